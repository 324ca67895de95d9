#pragma once

#include <cstddef>
#include <deque>
#include <vector>

#include "scse/core_math.hpp"

namespace scse {

/// Bounded FIFO of unit-norm embeddings from earlier training steps.
/// Entries are value snapshots: nothing downstream can push gradient
/// into them.
class MemoryBuffer {
public:
    MemoryBuffer(std::size_t capacity, std::size_t dim);

    /// Normalizes each incoming vector and appends it at the tail; if the
    /// result would exceed capacity, the oldest entries are discarded so
    /// exactly `capacity` remain. Batches larger than the capacity are
    /// rejected.
    void push_batch(const std::vector<Vec>& batch);

    /// Snapshot copy, oldest first.
    std::vector<Vec> contents() const;

    const Vec& at(std::size_t i) const { return entries_.at(i); }
    std::size_t size() const { return entries_.size(); }
    std::size_t capacity() const { return capacity_; }
    std::size_t dim() const { return dim_; }
    bool empty() const { return entries_.empty(); }

private:
    std::size_t capacity_;
    std::size_t dim_;
    std::deque<Vec> entries_;
};

}  // namespace scse
