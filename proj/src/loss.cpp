#include "scse/loss.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace scse {

namespace {

// Shared InfoNCE core over cosine similarities. Row i of `left` is the
// anchor, rows of `right` supply the positive (j == i) and the in-batch
// negatives (j != i).
PairLossResult info_nce(const std::vector<Vec>& left, const std::vector<Vec>& right, double tau,
                        const char* who) {
    const std::size_t n = left.size();
    if (n == 0 || right.size() != n) {
        throw std::invalid_argument(std::string(who) + ": batch shape mismatch");
    }
    if (!(tau > 0.0)) {
        throw std::invalid_argument(std::string(who) + ": tau must be positive");
    }
    const std::size_t d = left[0].size();

    std::vector<Vec> a(n), b(n);
    std::vector<double> na(n), nb(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (left[i].size() != d || right[i].size() != d) {
            throw std::invalid_argument(std::string(who) + ": dimension mismatch");
        }
        na[i] = norm(left[i]);
        nb[i] = norm(right[i]);
        if (na[i] <= 0.0 || nb[i] <= 0.0) {
            throw std::invalid_argument(std::string(who) + ": zero-norm vector");
        }
        a[i].resize(d);
        b[i].resize(d);
        for (std::size_t t = 0; t < d; ++t) {
            a[i][t] = left[i][t] / na[i];
            b[i][t] = right[i][t] / nb[i];
        }
    }

    // scores s_ij = cos(a_i, b_j) / tau
    std::vector<std::vector<double>> cos(n, std::vector<double>(n));
    std::vector<std::vector<double>> s(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            cos[i][j] = dot(a[i], b[j]);
            s[i][j] = cos[i][j] / tau;
        }
    }

    PairLossResult res;
    res.grad_left.assign(n, Vec(d, 0.0));
    res.grad_right.assign(n, Vec(d, 0.0));

    double total = 0.0;
    std::vector<std::vector<double>> g(n, std::vector<double>(n));  // dL/ds_ij
    for (std::size_t i = 0; i < n; ++i) {
        const double m = *std::max_element(s[i].begin(), s[i].end());
        double sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            sum += std::exp(s[i][j] - m);
        }
        const double lse = m + std::log(sum);
        total += lse - s[i][i];
        for (std::size_t j = 0; j < n; ++j) {
            const double p = std::exp(s[i][j] - lse);
            g[i][j] = (p - (i == j ? 1.0 : 0.0)) / static_cast<double>(n);
        }
    }
    res.value = total / static_cast<double>(n);

    // chain through cos(a_i, b_j) into the raw vectors
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double coeff = g[i][j] / tau;
            if (coeff == 0.0) {
                continue;
            }
            for (std::size_t t = 0; t < d; ++t) {
                res.grad_left[i][t] += coeff * (b[j][t] - cos[i][j] * a[i][t]) / na[i];
                res.grad_right[j][t] += coeff * (a[i][t] - cos[i][j] * b[j][t]) / nb[j];
            }
        }
    }
    return res;
}

}  // namespace

PairLossResult instance_loss(const std::vector<Vec>& h, const std::vector<Vec>& h_plus,
                             double tau) {
    return info_nce(h, h_plus, tau, "instance_loss");
}

PairLossResult smoothing_loss(const std::vector<Vec>& h, const std::vector<Vec>& h_smooth,
                              double tau) {
    return info_nce(h, h_smooth, tau, "smoothing_loss");
}

CombinedLossResult combined_loss_multi(const std::vector<Vec>& h, const std::vector<Vec>& h_plus,
                                       const std::vector<std::vector<Vec>>& h_smooth_groups,
                                       double tau, double alpha) {
    if (alpha < 0.0) {
        throw std::invalid_argument("combined_loss: alpha must be >= 0");
    }
    PairLossResult inst = instance_loss(h, h_plus, tau);

    CombinedLossResult res;
    res.grad_h = std::move(inst.grad_left);
    res.grad_h_plus = std::move(inst.grad_right);
    res.breakdown.instance_loss = inst.value;
    res.breakdown.alpha = alpha;

    double smooth_sum = 0.0;
    for (const auto& group : h_smooth_groups) {
        PairLossResult sm = smoothing_loss(h, group, tau);
        smooth_sum += sm.value;
        for (std::size_t i = 0; i < res.grad_h.size(); ++i) {
            for (std::size_t t = 0; t < res.grad_h[i].size(); ++t) {
                res.grad_h[i][t] += alpha * sm.grad_left[i][t];
            }
        }
        for (auto& row : sm.grad_right) {
            for (double& x : row) {
                x *= alpha;
            }
        }
        res.grad_h_smooth.push_back(std::move(sm.grad_right));
    }
    res.breakdown.smoothing_loss = smooth_sum;
    res.breakdown.total = res.breakdown.instance_loss + alpha * smooth_sum;
    return res;
}

CombinedLossResult combined_loss(const std::vector<Vec>& h, const std::vector<Vec>& h_plus,
                                 const std::vector<Vec>& h_smooth, double tau, double alpha) {
    return combined_loss_multi(h, h_plus, {h_smooth}, tau, alpha);
}

double alpha_at(const AlphaSchedule& schedule, std::size_t t_i) {
    if (t_i > schedule.t_max) {
        throw std::invalid_argument("alpha_at: t_i exceeds t_max");
    }
    if (schedule.mode == AlphaSchedule::Mode::constant) {
        return schedule.alpha_const;
    }
    const double ratio = schedule.t_max > 0
                             ? static_cast<double>(t_i) / static_cast<double>(schedule.t_max)
                             : 0.0;
    const double swing = std::cos(M_PI * ratio) * (schedule.alpha_start - schedule.alpha_end);
    return std::min(swing, 0.0) + schedule.alpha_end;
}

}  // namespace scse
