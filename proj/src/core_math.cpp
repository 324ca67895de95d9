#include "scse/core_math.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace scse {

double dot(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("dot: dimension mismatch");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += a[i] * b[i];
    }
    return s;
}

double norm(const Vec& v) {
    return std::sqrt(dot(v, v));
}

Vec l2_normalize(const Vec& v) {
    const double n = norm(v);
    if (n <= 0.0) {
        throw std::invalid_argument("l2_normalize: zero-norm input");
    }
    Vec out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        out[i] = v[i] / n;
    }
    return out;
}

Vec l2_normalize_vjp(const Vec& v, const Vec& upstream) {
    const double n = norm(v);
    if (n <= 0.0) {
        throw std::invalid_argument("l2_normalize_vjp: zero-norm input");
    }
    if (upstream.size() != v.size()) {
        throw std::invalid_argument("l2_normalize_vjp: dimension mismatch");
    }
    Vec u(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        u[i] = v[i] / n;
    }
    const double proj = dot(u, upstream);
    Vec out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        out[i] = (upstream[i] - proj * u[i]) / n;
    }
    return out;
}

double cosine_sim(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("cosine_sim: dimension mismatch");
    }
    const double na = norm(a);
    const double nb = norm(b);
    if (na <= 0.0 || nb <= 0.0) {
        throw std::invalid_argument("cosine_sim: zero-norm operand");
    }
    const double c = dot(a, b) / (na * nb);
    return std::clamp(c, -1.0, 1.0);
}

CosineSimGrad cosine_sim_grad(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("cosine_sim_grad: dimension mismatch");
    }
    const double na = norm(a);
    const double nb = norm(b);
    if (na <= 0.0 || nb <= 0.0) {
        throw std::invalid_argument("cosine_sim_grad: zero-norm operand");
    }
    const double c = dot(a, b) / (na * nb);
    CosineSimGrad g;
    g.wrt_a.resize(a.size());
    g.wrt_b.resize(b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        g.wrt_a[i] = b[i] / (na * nb) - c * a[i] / (na * na);
        g.wrt_b[i] = a[i] / (na * nb) - c * b[i] / (nb * nb);
    }
    return g;
}

std::vector<double> softmax_temp(const std::vector<double>& scores, double temperature) {
    if (scores.empty()) {
        throw std::invalid_argument("softmax_temp: empty scores");
    }
    if (!(temperature > 0.0)) {
        throw std::invalid_argument("softmax_temp: temperature must be positive");
    }
    const double m = *std::max_element(scores.begin(), scores.end());
    std::vector<double> out(scores.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        out[i] = std::exp((scores[i] - m) / temperature);
        sum += out[i];
    }
    for (double& w : out) {
        w /= sum;
    }
    return out;
}

std::vector<double> rankdata(const std::vector<double>& xs) {
    if (xs.empty()) {
        throw std::invalid_argument("rankdata: empty input");
    }
    const std::size_t n = xs.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return xs[i] < xs[j]; });

    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && xs[order[j + 1]] == xs[order[i]]) {
            ++j;
        }
        // positions i..j (0-based) share the average 1-based rank
        const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) {
            ranks[order[k]] = avg;
        }
        i = j + 1;
    }
    return ranks;
}

}  // namespace scse
