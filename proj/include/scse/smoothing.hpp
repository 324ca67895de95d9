#pragma once

#include <cstdint>
#include <vector>

#include "scse/core_math.hpp"

namespace scse {

struct SmoothedEmbedding {
    Vec value;
    std::vector<double> weights;  // mixing weights actually used, for inspection
};

struct AttentionSmoothCache {
    Vec input;                  // raw h_plus
    double input_norm = 0.0;
    Vec query;                  // normalized h_plus (also row 0 of K)
    std::vector<Vec> retrieved; // rows 1..k of K (constants)
    std::vector<double> weights;
    double beta = 0.0;
};

/// Self-attention aggregation of the normalized positive with retrieved
/// neighbors: K = [q, r_1..r_k], value = softmax(q K^T / beta) K.
/// An empty retrieval list reduces this to the normalized positive.
SmoothedEmbedding attention_smooth(const Vec& h_plus, const std::vector<Vec>& retrieved,
                                   double beta, AttentionSmoothCache* cache = nullptr);

struct AttentionSmoothGrads {
    Vec wrt_h_plus;
    std::vector<Vec> wrt_retrieved;  // identically zero: retrieved rows are stop-gradient
};

/// Pullback of attention_smooth. Gradient reaches h_plus through both its
/// query role and its row-0 role, including the normalization.
AttentionSmoothGrads attention_smooth_vjp(const AttentionSmoothCache& cache, const Vec& upstream);

/// gamma * normalize(h_plus) + (1 - gamma) * center.
SmoothedEmbedding center_smooth(const Vec& h_plus, const Vec& center, double gamma);

struct CenterSmoothGrads {
    Vec wrt_h_plus;
    Vec wrt_center;  // identically zero: the center is stop-gradient
};

CenterSmoothGrads center_smooth_vjp(const Vec& h_plus, double gamma, const Vec& upstream);

/// Instrumentation: number of smoothing forward calls since the last
/// reset. Lets callers prove the smoothing path was never exercised.
std::uint64_t smoothing_invocations();
void reset_smoothing_invocations();

}  // namespace scse
