#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "scse/core_math.hpp"

using namespace scse;

namespace {

Vec random_vec(std::mt19937_64& rng, std::size_t d, double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> dist(lo, hi);
    Vec v(d);
    for (double& x : v) {
        x = dist(rng);
    }
    return v;
}

}  // namespace

TEST_CASE("l2_normalize basics") {
    const Vec a = l2_normalize({3.0, 4.0});
    CHECK(a[0] == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(a[1] == doctest::Approx(0.8).epsilon(1e-12));

    const Vec b = l2_normalize({1.0, 0.0});
    CHECK(b[0] == 1.0);
    CHECK(b[1] == 0.0);

    const Vec c = l2_normalize({2.0, 2.0});
    CHECK(c[0] == doctest::Approx(0.70710678).epsilon(1e-8));
    CHECK(c[1] == doctest::Approx(0.70710678).epsilon(1e-8));

    CHECK_THROWS_AS(l2_normalize({0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("l2_normalize is idempotent and direction-preserving") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t d = 2 + trial % 9;
        Vec v = random_vec(rng, d);
        if (norm(v) < 1e-6) {
            continue;
        }
        const Vec once = l2_normalize(v);
        const Vec twice = l2_normalize(once);
        CHECK(norm(once) == doctest::Approx(1.0).epsilon(1e-12));
        for (std::size_t i = 0; i < d; ++i) {
            CHECK(std::fabs(once[i] - twice[i]) <= 1e-12);
        }
        CHECK(cosine_sim(v, once) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("cosine_sim basics") {
    CHECK(cosine_sim({1, 0}, {0, 1}) == doctest::Approx(0.0));
    CHECK(cosine_sim({1, 0}, {1, 0}) == doctest::Approx(1.0));
    CHECK(cosine_sim({1, 1}, {1, 0}) == doctest::Approx(0.70710678).epsilon(1e-8));
    CHECK_THROWS_AS(cosine_sim({0, 0}, {1, 0}), std::invalid_argument);
    CHECK_THROWS_AS(cosine_sim({1, 0}, {1, 0, 0}), std::invalid_argument);
}

TEST_CASE("cosine_sim is symmetric, scale-invariant and bounded") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> scale(0.01, 100.0);
    for (int trial = 0; trial < 100; ++trial) {
        Vec v = random_vec(rng, 5);
        Vec w = random_vec(rng, 5);
        if (norm(v) < 1e-6 || norm(w) < 1e-6) {
            continue;
        }
        const double c = cosine_sim(v, w);
        CHECK(c >= -1.0);
        CHECK(c <= 1.0);
        CHECK(std::fabs(c - cosine_sim(w, v)) <= 1e-12);

        Vec sv = v, sw = w;
        const double a = scale(rng), b = scale(rng);
        for (double& x : sv) x *= a;
        for (double& x : sw) x *= b;
        CHECK(std::fabs(cosine_sim(sv, sw) - c) <= 1e-12);
    }
}

TEST_CASE("cosine_sim_grad matches central finite differences") {
    std::mt19937_64 rng(13);
    const double eps = 1e-6;
    for (int trial = 0; trial < 20; ++trial) {
        Vec a = random_vec(rng, 4, 0.2, 1.0);
        Vec b = random_vec(rng, 4, -1.0, -0.2);
        const CosineSimGrad g = cosine_sim_grad(a, b);
        for (std::size_t i = 0; i < a.size(); ++i) {
            Vec ap = a, am = a;
            ap[i] += eps;
            am[i] -= eps;
            const double fd = (cosine_sim(ap, b) - cosine_sim(am, b)) / (2 * eps);
            CHECK(g.wrt_a[i] == doctest::Approx(fd).epsilon(1e-5));

            Vec bp = b, bm = b;
            bp[i] += eps;
            bm[i] -= eps;
            const double fd_b = (cosine_sim(a, bp) - cosine_sim(a, bm)) / (2 * eps);
            CHECK(g.wrt_b[i] == doctest::Approx(fd_b).epsilon(1e-5));
        }
    }
}

TEST_CASE("softmax_temp basics") {
    const auto uniform = softmax_temp({0.0, 0.0, 0.0}, 2.0);
    for (double w : uniform) {
        CHECK(w == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    }

    const auto single = softmax_temp({42.0}, 0.3);
    CHECK(single.size() == 1);
    CHECK(single[0] == doctest::Approx(1.0));

    // hand evaluation: e^{0.5} / (e^{0.5} + 1)
    const double e = std::exp(0.5);
    const auto two = softmax_temp({1.0, 0.0}, 2.0);
    CHECK(two[0] == doctest::Approx(e / (e + 1.0)).epsilon(1e-10));
    CHECK(two[1] == doctest::Approx(1.0 / (e + 1.0)).epsilon(1e-10));
    CHECK(two[0] == doctest::Approx(0.62245933).epsilon(1e-8));
    CHECK(two[1] == doctest::Approx(0.37754067).epsilon(1e-8));

    CHECK_THROWS_AS(softmax_temp({}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(softmax_temp({1.0}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(softmax_temp({1.0}, -2.0), std::invalid_argument);
}

TEST_CASE("softmax_temp is stable, normalized, and permutation-equivariant") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 1 + trial % 8;
        std::vector<double> scores = random_vec(rng, n, -5.0, 5.0);
        const auto w = softmax_temp(scores, 0.7);
        double sum = 0.0;
        for (double x : w) {
            CHECK(x > 0.0);
            sum += x;
        }
        CHECK(std::fabs(sum - 1.0) <= 1e-12);

        // permuting scores permutes weights identically
        std::vector<std::size_t> perm(n);
        for (std::size_t i = 0; i < n; ++i) perm[i] = (i + 3) % n;
        std::vector<double> permuted(n);
        for (std::size_t i = 0; i < n; ++i) permuted[i] = scores[perm[i]];
        const auto wp = softmax_temp(permuted, 0.7);
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(std::fabs(wp[i] - w[perm[i]]) <= 1e-15);
        }
    }

    // huge temperature flattens the weights
    const auto flat = softmax_temp({3.0, -1.0, 0.5, 2.0}, 1e9);
    for (double w : flat) {
        CHECK(std::fabs(w - 0.25) <= 1e-6);
    }

    // large scores do not overflow
    const auto big = softmax_temp({1000.0, 0.0}, 1.0);
    CHECK(big[0] == doctest::Approx(1.0));
    CHECK(std::isfinite(big[1]));
}

namespace {

// enumeration oracle: rank = (#smaller) + (#equal + 1) / 2
std::vector<double> rank_oracle(const std::vector<double>& xs) {
    std::vector<double> out(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double smaller = 0, equal = 0;
        for (double x : xs) {
            if (x < xs[i]) ++smaller;
            if (x == xs[i]) ++equal;
        }
        out[i] = smaller + (equal + 1.0) / 2.0;
    }
    return out;
}

}  // namespace

TEST_CASE("rankdata basics and ties") {
    CHECK(rankdata({10, 20, 30}) == std::vector<double>{1, 2, 3});
    CHECK(rankdata({30, 20, 10}) == std::vector<double>{3, 2, 1});
    CHECK(rankdata({5, 5, 1}) == rank_oracle({5, 5, 1}));
    CHECK(rankdata({5, 5, 1}) == std::vector<double>{2.5, 2.5, 1});
    CHECK_THROWS_AS(rankdata({}), std::invalid_argument);
}

TEST_CASE("rankdata matches the enumeration oracle and sums exactly") {
    std::mt19937_64 rng(23);
    std::uniform_int_distribution<int> val(0, 5);  // force ties
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 1 + trial % 17;
        std::vector<double> xs(n);
        for (double& x : xs) {
            x = val(rng);
        }
        const auto ranks = rankdata(xs);
        CHECK(ranks == rank_oracle(xs));
        double sum = 0.0;
        for (double r : ranks) {
            sum += r;
        }
        CHECK(sum == static_cast<double>(n * (n + 1)) / 2.0);  // exact
    }
}
