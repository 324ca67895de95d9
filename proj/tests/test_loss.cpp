#include <cmath>
#include <random>

#include "doctest.h"
#include "scse/loss.hpp"

using namespace scse;

namespace {

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

std::vector<Vec> random_batch(std::mt19937_64& rng, std::size_t n, std::size_t d) {
    std::vector<Vec> out;
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(random_vec(rng, d));
    }
    return out;
}

// direct scalar evaluation, no max-subtraction, no shared code path
double info_nce_oracle(const std::vector<Vec>& left, const std::vector<Vec>& right, double tau) {
    const std::size_t n = left.size();
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double denom = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            denom += std::exp(cosine_sim(left[i], right[j]) / tau);
        }
        total += -std::log(std::exp(cosine_sim(left[i], right[i]) / tau) / denom);
    }
    return total / static_cast<double>(n);
}

}  // namespace

TEST_CASE("instance_loss closed forms") {
    // single row: numerator equals denominator
    const auto single = instance_loss({{1, 2}}, {{2, 1}}, 0.05);
    CHECK(single.value == 0.0);

    // orthogonal pair at tau 0.05: per-row loss log(1 + e^{-20})
    const auto ortho = instance_loss({{1, 0}, {0, 1}}, {{1, 0}, {0, 1}}, 0.05);
    const double want = std::log1p(std::exp(-20.0));
    CHECK(ortho.value == doctest::Approx(want).epsilon(1e-12));
    CHECK(ortho.value == doctest::Approx(2.06e-9).epsilon(0.01));

    // all four identical: positive and negative scores equal -> log 2
    const auto same = instance_loss({{1, 1}, {1, 1}}, {{1, 1}, {1, 1}}, 0.05);
    CHECK(same.value == doctest::Approx(std::log(2.0)).epsilon(1e-12));

    CHECK_THROWS_AS(instance_loss({{0, 0}}, {{1, 0}}, 0.05), std::invalid_argument);
    CHECK_THROWS_AS(instance_loss({{1, 0}}, {{1, 0}}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(instance_loss({{1, 0}, {0, 1}}, {{1, 0}}, 0.05), std::invalid_argument);
}

TEST_CASE("instance_loss is non-negative and matches the scalar oracle") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 1 + trial % 5;
        const auto h = random_batch(rng, n, 6);
        const auto hp = random_batch(rng, n, 6);
        const auto res = instance_loss(h, hp, 0.2);
        CHECK(res.value >= 0.0);
        CHECK(res.value == doctest::Approx(info_nce_oracle(h, hp, 0.2)).epsilon(1e-12));
    }
}

TEST_CASE("losses are invariant to positive rescaling of any input") {
    std::mt19937_64 rng(43);
    const auto h = random_batch(rng, 3, 5);
    const auto hp = random_batch(rng, 3, 5);
    const double base = instance_loss(h, hp, 0.1).value;

    auto h2 = h;
    auto hp2 = hp;
    for (double& x : h2[1]) x *= 7.25;
    for (double& x : hp2[2]) x *= 0.013;
    CHECK(std::fabs(instance_loss(h2, hp2, 0.1).value - base) <= 1e-9);
}

TEST_CASE("smoothing_loss reduces to instance form on normalized positives") {
    std::mt19937_64 rng(47);
    const auto h = random_batch(rng, 4, 6);
    const auto hp = random_batch(rng, 4, 6);
    std::vector<Vec> normalized;
    for (const Vec& v : hp) {
        normalized.push_back(l2_normalize(v));
    }
    const auto a = smoothing_loss(h, normalized, 0.05);
    const auto b = instance_loss(h, hp, 0.05);
    CHECK(a.value == doctest::Approx(b.value).epsilon(1e-12));

    CHECK(smoothing_loss({{1, 2}}, {{0.6, 0.8}}, 0.05).value == 0.0);

    const auto h2 = random_batch(rng, 2, 4);
    const auto hs2 = random_batch(rng, 2, 4);
    CHECK(smoothing_loss(h2, hs2, 0.3).value ==
          doctest::Approx(info_nce_oracle(h2, hs2, 0.3)).epsilon(1e-12));
}

TEST_CASE("combined_loss composes the breakdown exactly") {
    std::mt19937_64 rng(53);
    const auto h = random_batch(rng, 4, 5);
    const auto hp = random_batch(rng, 4, 5);
    const auto hs = random_batch(rng, 4, 5);

    SUBCASE("alpha zero reduces to the instance term") {
        const auto res = combined_loss(h, hp, hs, 0.05, 0.0);
        const auto inst = instance_loss(h, hp, 0.05);
        CHECK(res.breakdown.total == inst.value);
        for (std::size_t i = 0; i < 4; ++i) {
            CHECK(res.grad_h[i] == inst.grad_left[i]);
            for (double g : res.grad_h_smooth[0][i]) {
                CHECK(g == 0.0);
            }
        }
    }

    SUBCASE("alpha one adds the terms") {
        const auto res = combined_loss(h, hp, hs, 0.05, 1.0);
        const double a = instance_loss(h, hp, 0.05).value;
        const double b = smoothing_loss(h, hs, 0.05).value;
        CHECK(res.breakdown.total == doctest::Approx(a + b).epsilon(1e-15));
    }

    SUBCASE("alpha 0.1 matches an independent evaluation") {
        const auto res = combined_loss(h, hp, hs, 0.05, 0.1);
        const double want = info_nce_oracle(h, hp, 0.05) + 0.1 * info_nce_oracle(h, hs, 0.05);
        CHECK(res.breakdown.total == doctest::Approx(want).epsilon(1e-12));
        CHECK(res.breakdown.total ==
              res.breakdown.instance_loss + res.breakdown.alpha * res.breakdown.smoothing_loss);
        CHECK(res.breakdown.instance_loss >= 0.0);
        CHECK(res.breakdown.smoothing_loss >= 0.0);
    }

    SUBCASE("negative alpha is rejected") {
        CHECK_THROWS_AS(combined_loss(h, hp, hs, 0.05, -0.1), std::invalid_argument);
    }
}

TEST_CASE("combined_loss gradients match central finite differences") {
    std::mt19937_64 rng(59);
    const double eps = 1e-5;
    for (int trial = 0; trial < 8; ++trial) {
        const std::size_t n = 1 + trial % 4;
        const std::size_t d = 3 + trial % 5;
        auto h = random_batch(rng, n, d);
        auto hp = random_batch(rng, n, d);
        auto hs = random_batch(rng, n, d);
        const double tau = 0.3;  // keep the objective well-conditioned for FD
        const double alpha = 0.1 * (trial + 1);

        const auto res = combined_loss(h, hp, hs, tau, alpha);
        auto value = [&] { return combined_loss(h, hp, hs, tau, alpha).breakdown.total; };

        auto check_matrix = [&](std::vector<Vec>& mat, const std::vector<Vec>& grad,
                                double scale) {
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t t = 0; t < d; ++t) {
                    const double orig = mat[i][t];
                    mat[i][t] = orig + eps;
                    const double fp = value();
                    mat[i][t] = orig - eps;
                    const double fm = value();
                    mat[i][t] = orig;
                    const double fd = (fp - fm) / (2 * eps);
                    const double analytic = grad[i][t] * scale;
                    const double err = std::fabs(analytic - fd) /
                                       std::max({1.0, std::fabs(analytic), std::fabs(fd)});
                    CHECK(err <= 1e-4);
                }
            }
        };
        check_matrix(h, res.grad_h, 1.0);
        check_matrix(hp, res.grad_h_plus, 1.0);
        // grad_h_smooth is already scaled by alpha
        check_matrix(hs, res.grad_h_smooth[0], 1.0);
    }
}

TEST_CASE("alpha_at implements both schedules") {
    AlphaSchedule cosine;
    cosine.mode = AlphaSchedule::Mode::cosine;
    cosine.alpha_start = 0.005;
    cosine.alpha_end = 0.05;
    cosine.t_max = 1000;

    CHECK(alpha_at(cosine, 0) == doctest::Approx(0.005).epsilon(1e-12));
    CHECK(alpha_at(cosine, 1000) == doctest::Approx(0.05).epsilon(1e-12));
    CHECK(alpha_at(cosine, 500) == doctest::Approx(0.05).epsilon(1e-12));
    // cos(pi/4) * (0.005 - 0.05) + 0.05
    CHECK(alpha_at(cosine, 250) == doctest::Approx(0.0181802).epsilon(1e-5));

    // non-decreasing, plateaus at alpha_end from t_max/2 on
    double prev = -1.0;
    for (std::size_t t = 0; t <= 1000; t += 25) {
        const double a = alpha_at(cosine, t);
        CHECK(a >= prev);
        prev = a;
        if (t >= 500) {
            CHECK(a == doctest::Approx(0.05).epsilon(1e-12));
        }
    }

    AlphaSchedule constant;
    constant.mode = AlphaSchedule::Mode::constant;
    constant.alpha_const = 0.1;
    constant.t_max = 10;
    CHECK(alpha_at(constant, 0) == 0.1);
    CHECK(alpha_at(constant, 10) == 0.1);

    CHECK_THROWS_AS(alpha_at(constant, 11), std::invalid_argument);
    CHECK_THROWS_AS(alpha_at(cosine, 1001), std::invalid_argument);
}
