#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "scse/buffer.hpp"
#include "scse/core_math.hpp"

namespace scse {

/// min(k, |buf|) entries with highest cosine similarity to the query,
/// descending; exact ties keep the older entry first. Returned vectors
/// are copies (stop-gradient).
std::vector<Vec> knn_retrieve(const MemoryBuffer& buf, const Vec& query, std::size_t k);

struct ClusterModel {
    std::vector<Vec> centers;              // unit norm
    std::vector<std::size_t> assignments;  // buffer index -> center index
    std::vector<double> objective_per_iter;  // sum of member-to-center cosines, per assign pass
};

/// Lloyd iteration on cosine similarity over the buffer contents:
/// assign to the most similar center (tie -> lowest index), recompute
/// centers as normalized member means, reseed dead centers from the
/// worst-fit entry. Stops when assignments stabilize or after max_iters
/// assignment passes. Initial centers are k distinct entries chosen by a
/// seeded draw.
ClusterModel spherical_kmeans(const MemoryBuffer& buf, std::size_t k, std::size_t max_iters,
                              std::uint64_t seed);

/// Center with the highest cosine similarity to the query (tie -> lowest
/// index); returned by value (stop-gradient).
Vec assigned_center(const ClusterModel& model, const Vec& query);

}  // namespace scse
