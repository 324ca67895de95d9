#include "scse/buffer.hpp"

#include <stdexcept>

namespace scse {

MemoryBuffer::MemoryBuffer(std::size_t capacity, std::size_t dim)
    : capacity_(capacity), dim_(dim) {
    if (capacity < 1) {
        throw std::invalid_argument("MemoryBuffer: capacity must be >= 1");
    }
    if (dim < 2) {
        throw std::invalid_argument("MemoryBuffer: dim must be >= 2");
    }
}

void MemoryBuffer::push_batch(const std::vector<Vec>& batch) {
    if (batch.size() > capacity_) {
        throw std::invalid_argument("push_batch: batch larger than buffer capacity");
    }
    std::vector<Vec> normalized;
    normalized.reserve(batch.size());
    for (const Vec& v : batch) {
        if (v.size() != dim_) {
            throw std::invalid_argument("push_batch: dimension mismatch");
        }
        normalized.push_back(l2_normalize(v));  // rejects zero vectors
    }
    for (Vec& v : normalized) {
        entries_.push_back(std::move(v));
    }
    while (entries_.size() > capacity_) {
        entries_.pop_front();
    }
}

std::vector<Vec> MemoryBuffer::contents() const {
    return {entries_.begin(), entries_.end()};
}

}  // namespace scse
