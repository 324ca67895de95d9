#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "scse/smoothing.hpp"

using namespace scse;

namespace {

Vec random_unit(std::mt19937_64& rng, std::size_t d) {
    std::normal_distribution<double> dist(0.0, 1.0);
    Vec v(d);
    double n;
    do {
        for (double& x : v) {
            x = dist(rng);
        }
        n = norm(v);
    } while (n < 1e-9);
    return l2_normalize(v);
}

Vec random_vec(std::mt19937_64& rng, std::size_t d) {
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    Vec v(d);
    do {
        for (double& x : v) {
            x = dist(rng);
        }
    } while (norm(v) < 1e-6);
    return v;
}

}  // namespace

TEST_CASE("attention_smooth reduces to the normalized positive without neighbors") {
    const auto sm = attention_smooth({3, 4}, {}, 2.0);
    CHECK(sm.weights == std::vector<double>{1.0});
    CHECK(sm.value[0] == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(sm.value[1] == doctest::Approx(0.8).epsilon(1e-12));
}

TEST_CASE("attention_smooth of identical vectors is that vector") {
    const Vec q = l2_normalize({1, 2, 2});
    const auto sm = attention_smooth({1, 2, 2}, {q, q, q}, 2.0);
    for (std::size_t i = 0; i < q.size(); ++i) {
        CHECK(sm.value[i] == doctest::Approx(q[i]).epsilon(1e-12));
    }
}

TEST_CASE("attention_smooth hand-evaluated two-row case") {
    // scores [1, 0] at beta 2 -> weights [e^.5/(e^.5+1), 1/(e^.5+1)]
    const auto sm = attention_smooth({1, 0}, {Vec{0, 1}}, 2.0);
    CHECK(sm.weights[0] == doctest::Approx(0.62245933).epsilon(1e-8));
    CHECK(sm.weights[1] == doctest::Approx(0.37754067).epsilon(1e-8));
    CHECK(sm.value[0] == doctest::Approx(0.62245933).epsilon(1e-8));
    CHECK(sm.value[1] == doctest::Approx(0.37754067).epsilon(1e-8));
}

TEST_CASE("attention_smooth rejects bad inputs") {
    CHECK_THROWS_AS(attention_smooth({0, 0}, {}, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(attention_smooth({1, 0}, {}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(attention_smooth({1, 0}, {}, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(attention_smooth({1, 0}, {Vec{2, 0}}, 2.0), std::invalid_argument);
}

TEST_CASE("attention_smooth stays inside the unit ball and normalizes weights") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t d = 3 + trial % 6;
        const std::size_t k = trial % 7;
        std::vector<Vec> retrieved;
        for (std::size_t i = 0; i < k; ++i) {
            retrieved.push_back(random_unit(rng, d));
        }
        const auto sm = attention_smooth(random_vec(rng, d), retrieved, 2.0);
        CHECK(norm(sm.value) <= 1.0 + 1e-9);
        double sum = 0.0;
        for (double w : sm.weights) {
            CHECK(w > 0.0);
            sum += w;
        }
        CHECK(std::fabs(sum - 1.0) <= 1e-9);
    }
}

TEST_CASE("attention_smooth is invariant to neighbor permutation") {
    std::mt19937_64 rng(5);
    const Vec x = random_vec(rng, 6);
    std::vector<Vec> retrieved;
    for (int i = 0; i < 5; ++i) {
        retrieved.push_back(random_unit(rng, 6));
    }
    const auto base = attention_smooth(x, retrieved, 2.0);
    for (int trial = 0; trial < 10; ++trial) {
        std::shuffle(retrieved.begin(), retrieved.end(), rng);
        const auto sm = attention_smooth(x, retrieved, 2.0);
        for (std::size_t i = 0; i < base.value.size(); ++i) {
            CHECK(std::fabs(sm.value[i] - base.value[i]) <= 1e-12);
        }
    }
}

TEST_CASE("attention_smooth flattens to the row mean at huge beta") {
    std::mt19937_64 rng(8);
    const Vec x = random_vec(rng, 4);
    std::vector<Vec> retrieved = {random_unit(rng, 4), random_unit(rng, 4), random_unit(rng, 4)};
    const auto sm = attention_smooth(x, retrieved, 1e9);
    const Vec q = l2_normalize(x);
    for (std::size_t i = 0; i < 4; ++i) {
        const double mean = (q[i] + retrieved[0][i] + retrieved[1][i] + retrieved[2][i]) / 4.0;
        CHECK(std::fabs(sm.value[i] - mean) <= 1e-6);
    }
}

TEST_CASE("attention_smooth pullback matches finite differences; neighbors get none") {
    std::mt19937_64 rng(21);
    const double eps = 1e-5;
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t d = 4 + trial % 4;
        const std::size_t k = trial % 5;
        Vec x = random_vec(rng, d);
        std::vector<Vec> retrieved;
        for (std::size_t i = 0; i < k; ++i) {
            retrieved.push_back(random_unit(rng, d));
        }
        Vec upstream = random_vec(rng, d);

        AttentionSmoothCache cache;
        attention_smooth(x, retrieved, 2.0, &cache);
        const AttentionSmoothGrads g = attention_smooth_vjp(cache, upstream);

        auto phi = [&](const Vec& input) {
            return dot(attention_smooth(input, retrieved, 2.0).value, upstream);
        };
        for (std::size_t i = 0; i < d; ++i) {
            Vec xp = x, xm = x;
            xp[i] += eps;
            xm[i] -= eps;
            const double fd = (phi(xp) - phi(xm)) / (2 * eps);
            const double err = std::fabs(g.wrt_h_plus[i] - fd) /
                               std::max({1.0, std::fabs(g.wrt_h_plus[i]), std::fabs(fd)});
            CHECK(err <= 1e-4);
        }

        // stop-gradient: the analytic gradient into every neighbor is exactly zero
        REQUIRE(g.wrt_retrieved.size() == k);
        for (const Vec& gr : g.wrt_retrieved) {
            for (double v : gr) {
                CHECK(v == 0.0);
            }
        }
    }
}

TEST_CASE("center_smooth endpoints and midpoint") {
    const Vec center = {0, 1};
    const auto top = center_smooth({2, 0}, center, 1.0);
    CHECK(top.value == Vec{1, 0});

    const auto bottom = center_smooth({2, 0}, center, 0.0);
    CHECK(bottom.value == center);

    const auto mid = center_smooth({1, 0}, center, 0.5);
    CHECK(mid.value[0] == doctest::Approx(0.5));
    CHECK(mid.value[1] == doctest::Approx(0.5));
    CHECK(mid.weights == std::vector<double>{0.5, 0.5});

    CHECK_THROWS_AS(center_smooth({1, 0}, center, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(center_smooth({1, 0}, center, 1.1), std::invalid_argument);
}

TEST_CASE("center_smooth pullback matches finite differences; center gets none") {
    std::mt19937_64 rng(33);
    const double eps = 1e-5;
    for (int trial = 0; trial < 10; ++trial) {
        const Vec center = random_unit(rng, 5);
        const Vec x = random_vec(rng, 5);
        const Vec upstream = random_vec(rng, 5);
        const double gamma = 0.3 + 0.05 * trial;

        const CenterSmoothGrads g = center_smooth_vjp(x, gamma, upstream);
        auto phi = [&](const Vec& input) {
            return dot(center_smooth(input, center, gamma).value, upstream);
        };
        for (std::size_t i = 0; i < 5; ++i) {
            Vec xp = x, xm = x;
            xp[i] += eps;
            xm[i] -= eps;
            const double fd = (phi(xp) - phi(xm)) / (2 * eps);
            const double err = std::fabs(g.wrt_h_plus[i] - fd) /
                               std::max({1.0, std::fabs(g.wrt_h_plus[i]), std::fabs(fd)});
            CHECK(err <= 1e-4);
        }
        for (double v : g.wrt_center) {
            CHECK(v == 0.0);
        }
    }
}

TEST_CASE("smoothing invocation counter tracks forward calls") {
    reset_smoothing_invocations();
    CHECK(smoothing_invocations() == 0);
    attention_smooth({1, 0}, {}, 2.0);
    center_smooth({1, 0}, {0, 1}, 0.5);
    CHECK(smoothing_invocations() == 2);
    reset_smoothing_invocations();
    CHECK(smoothing_invocations() == 0);
}
