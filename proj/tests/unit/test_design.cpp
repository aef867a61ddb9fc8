#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "ddestab/criteria.hpp"
#include "ddestab/design.hpp"
#include "ddestab/errors.hpp"

using namespace ddestab;

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

// Left side of delta lambda^2 s - 2 (delta + s) alpha lambda - 4 beta > 0,
// s = sqrt(4 - delta^2); the threshold is its positive root in lambda.
double boundary_polynomial(double delta, double alpha, double beta, double lambda) {
    const double s = std::sqrt(4.0 - delta * delta);
    return delta * lambda * lambda * s - 2.0 * (delta + s) * alpha * lambda - 4.0 * beta;
}

}  // namespace

TEST_CASE("mu_of_delta reproduces the worked thresholds") {
    CHECK(std::fabs(mu_of_delta(kSqrt2, 1.0, 1.0) - (2.0 + kSqrt2)) < 1e-12);
    CHECK(std::fabs(mu_of_delta(kSqrt2, 1.0, 2.0) - (kSqrt2 + std::sqrt(6.0))) < 1e-12);
    CHECK(mu_of_delta(0.3, 0.0, 0.0) == 0.0);
    CHECK(mu_of_delta(1.9, 0.0, 0.0) == 0.0);
    CHECK_THROWS_AS(mu_of_delta(0.0, 1.0, 1.0), DomainError);
    CHECK_THROWS_AS(mu_of_delta(2.0, 1.0, 1.0), DomainError);
    CHECK_THROWS_AS(mu_of_delta(1.0, -1.0, 1.0), DomainError);
}

TEST_CASE("mu at delta = sqrt(2) has the closed form sqrt(2)(alpha + sqrt(alpha^2 + beta))") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(0.0, 10.0);
    for (int i = 0; i < 1000; ++i) {
        const double alpha = u(rng);
        const double beta = u(rng);
        CHECK(std::fabs(mu_of_delta(kSqrt2, alpha, beta) - kSqrt2 * (alpha + std::sqrt(alpha * alpha + beta))) < 1e-12);
    }
}

TEST_CASE("mu is the root of the boundary polynomial") {
    std::mt19937_64 rng(22);
    std::uniform_real_distribution<double> d(0.05, 1.95);
    std::uniform_real_distribution<double> u(0.01, 10.0);
    for (int i = 0; i < 500; ++i) {
        const double delta = d(rng);
        const double alpha = u(rng);
        const double beta = u(rng);
        const double mu = mu_of_delta(delta, alpha, beta);
        const double scale = delta * mu * mu * std::sqrt(4.0 - delta * delta);
        CHECK(std::fabs(boundary_polynomial(delta, alpha, beta, mu)) < 1e-11 * scale);
    }
}

TEST_CASE("threshold is sharp for the exponential-stability test") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> d(0.05, 1.95);
    std::uniform_real_distribution<double> u(0.01, 10.0);
    for (int i = 0; i < 200; ++i) {
        const double delta = d(rng);
        const double alpha = u(rng);
        const double beta = u(rng);
        const double mu = mu_of_delta(delta, alpha, beta);
        const double above = (1.0 + 1e-9) * mu;
        const double below = (1.0 - 1e-9) * mu;
        CHECK(lemma1_check(delta * above, above * above, alpha, beta).satisfied);
        CHECK_FALSE(lemma1_check(delta * below, below * below, alpha, beta).satisfied);
    }
}

TEST_CASE("mu is nondecreasing in alpha and beta") {
    std::mt19937_64 rng(24);
    std::uniform_real_distribution<double> d(0.05, 1.95);
    std::uniform_real_distribution<double> u(0.0, 10.0);
    for (int i = 0; i < 1000; ++i) {
        const double delta = d(rng);
        const double alpha = u(rng);
        const double beta = u(rng);
        const double step = u(rng);
        CHECK(mu_of_delta(delta, alpha + step, beta) >= mu_of_delta(delta, alpha, beta));
        CHECK(mu_of_delta(delta, alpha, beta + step) >= mu_of_delta(delta, alpha, beta));
    }
}

TEST_CASE("optimal_delta") {
    SUBCASE("alpha = 0 is minimized where delta sqrt(4 - delta^2) peaks") {
        // d/dd [d sqrt(4 - d^2)] = (4 - 2 d^2)/sqrt(4 - d^2) = 0  =>  d = sqrt(2)
        for (double beta : {0.5, 1.0, 4.0}) {
            const auto opt = optimal_delta(0.0, beta, 0.01);
            CHECK(std::fabs(opt.delta - kSqrt2) < 1e-6);
            CHECK(opt.mu == doctest::Approx(mu_of_delta(kSqrt2, 0.0, beta)).epsilon(1e-12));
        }
    }
    SUBCASE("zero bounds tie-break to sqrt(2)") {
        const auto opt = optimal_delta(0.0, 0.0, 0.01);
        CHECK(opt.delta == kSqrt2);
        CHECK(opt.mu == 0.0);
    }
    SUBCASE("never worse than delta = sqrt(2)") {
        const auto opt = optimal_delta(1.0, 1.0, 0.01);
        CHECK(opt.mu <= (2.0 + kSqrt2) * (1.0 + 1e-15));
    }
    SUBCASE("no point of an independent fine grid does better") {
        std::mt19937_64 rng(25);
        std::uniform_real_distribution<double> u(0.0, 10.0);
        for (int trial = 0; trial < 20; ++trial) {
            const double alpha = u(rng);
            const double beta = u(rng);
            const double eps = 0.01;
            const auto opt = optimal_delta(alpha, beta, eps);
            CHECK(opt.delta >= eps);
            CHECK(opt.delta <= 2.0 - eps);
            double grid_min = std::numeric_limits<double>::infinity();
            for (int i = 0; i < 10000; ++i) {
                const double delta = eps + (2.0 - 2.0 * eps) * i / 9999.0;
                grid_min = std::min(grid_min, mu_of_delta(delta, alpha, beta));
            }
            CHECK(opt.mu <= grid_min + 1e-8);
        }
    }
    CHECK_THROWS_AS(optimal_delta(1.0, 1.0, 0.0), DomainError);
    CHECK_THROWS_AS(optimal_delta(1.0, 1.0, 1.0), DomainError);
}

TEST_CASE("damping_gain") {
    SUBCASE("explicit lambda = 4 for the sunflower bounds") {
        const double mu = kSqrt2 + std::sqrt(6.0);
        const auto g = damping_gain(1.0, 2.0, kSqrt2, 4.0 / mu - 1.0);
        CHECK(g.lambda == doctest::Approx(4.0).epsilon(1e-14));
        CHECK(g.lambda > g.lambda_threshold);
        const auto& c = std::get<Controller::Damping>(g.controller.variant);
        CHECK(c.delta == kSqrt2);
        CHECK(c.lambda == g.lambda);
        CHECK(c.xstar == 0.0);
    }
    SUBCASE("zero margin is rejected") {
        CHECK_THROWS_AS(damping_gain(1.0, 1.0, kSqrt2, 0.0), DomainError);
    }
    SUBCASE("zero threshold uses the margin as the gain") {
        const auto g = damping_gain(0.0, 0.0, 1.0, 0.5);
        CHECK(g.lambda_threshold == 0.0);
        CHECK(g.lambda == 0.5);
        CHECK_THROWS_AS(damping_gain(0.0, 0.0, 1.0, 0.0), DomainError);
    }
    SUBCASE("relative margin") {
        const auto g = damping_gain(1.0, 1.0, kSqrt2, 0.1);
        CHECK(g.lambda == doctest::Approx(1.1 * (2.0 + kSqrt2)).epsilon(1e-14));
        CHECK(g.margin == 0.1);
    }
    SUBCASE("explicit lambda") {
        const auto g = damping_gain_for_lambda(1.0, 2.0, kSqrt2, 4.0);
        CHECK(g.lambda == 4.0);
        CHECK(g.margin == doctest::Approx(4.0 / (kSqrt2 + std::sqrt(6.0)) - 1.0));
        CHECK_THROWS_AS(damping_gain_for_lambda(1.0, 2.0, kSqrt2, 3.8), DomainError);
    }
}

TEST_CASE("synthesize_damping_controller") {
    SUBCASE("sunflower, lambda = 4 around x* = pi") {
        const auto m = builtin("sunflower");
        const auto g = synthesize_damping_controller_for_lambda(m.system, FixedDelta{kSqrt2}, 4.0, 0.0, 10.0, 101);
        CHECK(g.bounds_used.alpha == 1.0);
        CHECK(g.bounds_used.beta == 2.0);
        CHECK(g.lambda_threshold == doctest::Approx(kSqrt2 + std::sqrt(6.0)).epsilon(1e-14));
        const auto& c = std::get<Controller::Damping>(g.controller.variant);
        CHECK(c.xstar == doctest::Approx(std::numbers::pi).epsilon(1e-15));
        CHECK(c.lambda == 4.0);
    }
    SUBCASE("example1 with a 10% margin") {
        const auto m = builtin("example1");
        const auto g = synthesize_damping_controller(m.system, FixedDelta{kSqrt2}, 0.1, 0.0, 2.0 * std::numbers::pi, 1001);
        CHECK(g.bounds_used.alpha == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(g.bounds_used.beta == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(g.lambda == doctest::Approx(1.1 * (2.0 + kSqrt2)).epsilon(1e-6));
    }
    SUBCASE("empty system with delta optimization") {
        const auto g = synthesize_damping_controller(SecondOrderDDE{}, OptimizeDelta{0.01}, 1.0, 0.0, 1.0, 2);
        CHECK(g.lambda == 1.0);
        CHECK(g.delta == kSqrt2);
    }
}

TEST_CASE("proportional_gain") {
    SUBCASE("case a midpoint") {
        const auto p = proportional_gain(2.0, 0.8);
        REQUIRE(p);
        CHECK(p->K == doctest::Approx(0.9));
        CHECK(p->chosen_case == "a");
        CHECK(p->report.which_case == "a");
    }
    SUBCASE("case c above the inverted threshold") {
        const auto p = proportional_gain(1.0, 2.0);
        REQUIRE(p);
        CHECK(p->chosen_case == "c");
        CHECK(p->K == doctest::Approx(20.3125));
        CHECK(p->report.which_case == "c");
    }
    SUBCASE("zero forcing") {
        const auto p = proportional_gain(1.0, 0.0);
        REQUIRE(p);
        CHECK(p->K == doctest::Approx(0.125));
        CHECK(p->chosen_case == "a");
    }
    SUBCASE("case b preference") {
        const auto p = proportional_gain(4.0, 1.0, CasePreference::BAC);
        REQUIRE(p);
        CHECK(p->chosen_case == "b");
        CHECK(p->K == doctest::Approx(5.5));
    }
    CHECK_FALSE(proportional_gain(0.0, 1.0));
    CHECK_FALSE(proportional_gain(1.0, std::numeric_limits<double>::infinity()));
}

TEST_CASE("proportional_gain output always passes theorem4_check") {
    std::mt19937_64 rng(26);
    std::uniform_real_distribution<double> u(0.01, 10.0);
    for (int i = 0; i < 2000; ++i) {
        const double a = u(rng);
        const double C = u(rng) - 0.01;
        for (auto pref : {CasePreference::ABC, CasePreference::BAC, CasePreference::C}) {
            const auto p = proportional_gain(a, C, pref);
            REQUIRE(p);
            CHECK(p->report.satisfied);
            const auto& cases = p->report.holding_cases;
            CHECK(std::find(cases.begin(), cases.end(), p->chosen_case) != cases.end());
        }
    }
}
