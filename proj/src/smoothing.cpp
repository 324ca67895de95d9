#include "scse/smoothing.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>

namespace scse {

namespace {

std::atomic<std::uint64_t> g_invocations{0};

void check_unit_rows(const std::vector<Vec>& rows, std::size_t dim, const char* who) {
    for (const Vec& r : rows) {
        if (r.size() != dim) {
            throw std::invalid_argument(std::string(who) + ": dimension mismatch");
        }
        if (std::fabs(norm(r) - 1.0) > 1e-6) {
            throw std::invalid_argument(std::string(who) + ": retrieved row not unit norm");
        }
    }
}

}  // namespace

SmoothedEmbedding attention_smooth(const Vec& h_plus, const std::vector<Vec>& retrieved,
                                   double beta, AttentionSmoothCache* cache) {
    if (!(beta > 0.0)) {
        throw std::invalid_argument("attention_smooth: beta must be positive");
    }
    g_invocations.fetch_add(1, std::memory_order_relaxed);
    const double n = norm(h_plus);
    if (n <= 0.0) {
        throw std::invalid_argument("attention_smooth: zero-norm h_plus");
    }
    check_unit_rows(retrieved, h_plus.size(), "attention_smooth");

    Vec q(h_plus.size());
    for (std::size_t i = 0; i < q.size(); ++i) {
        q[i] = h_plus[i] / n;
    }

    std::vector<double> scores;
    scores.reserve(retrieved.size() + 1);
    scores.push_back(dot(q, q));
    for (const Vec& r : retrieved) {
        scores.push_back(dot(q, r));
    }
    const std::vector<double> w = softmax_temp(scores, beta);

    Vec value(q.size(), 0.0);
    for (std::size_t i = 0; i < q.size(); ++i) {
        value[i] += w[0] * q[i];
    }
    for (std::size_t j = 0; j < retrieved.size(); ++j) {
        for (std::size_t i = 0; i < q.size(); ++i) {
            value[i] += w[j + 1] * retrieved[j][i];
        }
    }

    if (cache != nullptr) {
        cache->input = h_plus;
        cache->input_norm = n;
        cache->query = q;
        cache->retrieved = retrieved;
        cache->weights = w;
        cache->beta = beta;
    }
    return SmoothedEmbedding{std::move(value), w};
}

AttentionSmoothGrads attention_smooth_vjp(const AttentionSmoothCache& cache, const Vec& upstream) {
    const std::size_t d = cache.query.size();
    const std::size_t k = cache.retrieved.size();
    if (upstream.size() != d) {
        throw std::invalid_argument("attention_smooth_vjp: upstream shape mismatch");
    }
    const std::vector<double>& w = cache.weights;

    // d(value)/d(weights): alpha_j = upstream . K_j
    std::vector<double> alpha(k + 1);
    alpha[0] = dot(upstream, cache.query);
    for (std::size_t j = 0; j < k; ++j) {
        alpha[j + 1] = dot(upstream, cache.retrieved[j]);
    }

    // softmax pullback, scores were q.K_j / beta
    double mix = 0.0;
    for (std::size_t j = 0; j <= k; ++j) {
        mix += w[j] * alpha[j];
    }
    std::vector<double> du(k + 1);
    for (std::size_t j = 0; j <= k; ++j) {
        du[j] = w[j] * (alpha[j] - mix) / cache.beta;
    }

    // gradient w.r.t. the normalized query: row-0 of the value, plus the
    // score terms (u_0 = q.q contributes 2q, the rest contribute r_j)
    Vec dq(d, 0.0);
    for (std::size_t i = 0; i < d; ++i) {
        dq[i] = w[0] * upstream[i] + du[0] * 2.0 * cache.query[i];
    }
    for (std::size_t j = 0; j < k; ++j) {
        for (std::size_t i = 0; i < d; ++i) {
            dq[i] += du[j + 1] * cache.retrieved[j][i];
        }
    }

    AttentionSmoothGrads g;
    g.wrt_h_plus = l2_normalize_vjp(cache.input, dq);
    g.wrt_retrieved.assign(k, Vec(d, 0.0));  // stop-gradient rows
    return g;
}

SmoothedEmbedding center_smooth(const Vec& h_plus, const Vec& center, double gamma) {
    if (!(gamma >= 0.0 && gamma <= 1.0)) {
        throw std::invalid_argument("center_smooth: gamma must be in [0, 1]");
    }
    g_invocations.fetch_add(1, std::memory_order_relaxed);
    const double n = norm(h_plus);
    if (n <= 0.0) {
        throw std::invalid_argument("center_smooth: zero-norm h_plus");
    }
    if (center.size() != h_plus.size()) {
        throw std::invalid_argument("center_smooth: dimension mismatch");
    }
    if (std::fabs(norm(center) - 1.0) > 1e-6) {
        throw std::invalid_argument("center_smooth: center not unit norm");
    }
    Vec value(h_plus.size());
    for (std::size_t i = 0; i < value.size(); ++i) {
        value[i] = gamma * h_plus[i] / n + (1.0 - gamma) * center[i];
    }
    return SmoothedEmbedding{std::move(value), {gamma, 1.0 - gamma}};
}

CenterSmoothGrads center_smooth_vjp(const Vec& h_plus, double gamma, const Vec& upstream) {
    CenterSmoothGrads g;
    g.wrt_h_plus = l2_normalize_vjp(h_plus, upstream);
    for (double& x : g.wrt_h_plus) {
        x *= gamma;
    }
    g.wrt_center.assign(h_plus.size(), 0.0);  // stop-gradient
    return g;
}

std::uint64_t smoothing_invocations() {
    return g_invocations.load(std::memory_order_relaxed);
}

void reset_smoothing_invocations() {
    g_invocations.store(0, std::memory_order_relaxed);
}

}  // namespace scse
