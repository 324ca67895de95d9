#pragma once

#include <cstddef>
#include <vector>

#include "scse/core_math.hpp"

namespace scse {

struct PairLossResult {
    double value = 0.0;
    std::vector<Vec> grad_left;   // w.r.t. the anchor rows
    std::vector<Vec> grad_right;  // w.r.t. the positive rows
};

/// Mean over rows of -log( e^{sim(h_i, h+_i)/tau} / sum_j e^{sim(h_i, h+_j)/tau} ),
/// with in-batch negatives, plus exact gradients for every input vector.
PairLossResult instance_loss(const std::vector<Vec>& h, const std::vector<Vec>& h_plus,
                             double tau);

/// Same functional form with the positives replaced by smoothed positives.
PairLossResult smoothing_loss(const std::vector<Vec>& h, const std::vector<Vec>& h_smooth,
                              double tau);

struct LossBreakdown {
    double instance_loss = 0.0;
    double smoothing_loss = 0.0;
    double alpha = 0.0;
    double total = 0.0;  // instance_loss + alpha * smoothing_loss
};

struct CombinedLossResult {
    LossBreakdown breakdown;
    std::vector<Vec> grad_h;
    std::vector<Vec> grad_h_plus;
    // one gradient matrix per smoothed-positive matrix, already scaled by alpha
    std::vector<std::vector<Vec>> grad_h_smooth;
};

/// total = instance + alpha * sum of smoothing terms (one per smoothed
/// matrix; zero, one, or two in practice).
CombinedLossResult combined_loss_multi(const std::vector<Vec>& h, const std::vector<Vec>& h_plus,
                                       const std::vector<std::vector<Vec>>& h_smooth_groups,
                                       double tau, double alpha);

/// Single-group convenience form.
CombinedLossResult combined_loss(const std::vector<Vec>& h, const std::vector<Vec>& h_plus,
                                 const std::vector<Vec>& h_smooth, double tau, double alpha);

struct AlphaSchedule {
    enum class Mode { constant, cosine };
    Mode mode = Mode::constant;
    double alpha_const = 0.1;
    double alpha_start = 0.005;
    double alpha_end = 0.05;
    std::size_t t_max = 0;
};

/// Constant mode returns alpha_const. Cosine mode evaluates
/// min{cos(pi * t_i / t_max) * (alpha_start - alpha_end), 0} + alpha_end.
double alpha_at(const AlphaSchedule& schedule, std::size_t t_i);

}  // namespace scse
