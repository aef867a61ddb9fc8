#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ddestab/errors.hpp"
#include "ddestab/model.hpp"

using namespace ddestab;

namespace {

// Brute-force sup over w of |s(t, w) / w| on a dense symmetric grid.
double sampled_gain(const StateTerm& term, double t) {
    double best = 0.0;
    for (int i = 1; i <= 200000; ++i) {
        const double w = 1e-4 * i;
        best = std::max(best, std::fabs(term.value(t, w) / w));
        best = std::max(best, std::fabs(term.value(t, -w) / w));
    }
    return best;
}

}  // namespace

TEST_CASE("DelayFn") {
    SUBCASE("constant lag") {
        const auto d = DelayFn::constant_lag(2.0);
        CHECK(d(5.0) == 3.0);
        CHECK(d.max_lag() == 2.0);
        CHECK_THROWS_AS(DelayFn::constant_lag(-1.0), DomainError);
    }
    SUBCASE("zero lag by default") {
        const DelayFn d;
        CHECK(d(1.5) == 1.5);
        CHECK(d.max_lag() == 0.0);
    }
    SUBCASE("expression must not look ahead") {
        const auto d = DelayFn::expression(ScalarFn::parse("t + 1"));
        CHECK_THROWS_AS(d(0.0), DelayViolation);
    }
    SUBCASE("declared lag bound is enforced") {
        const auto d = DelayFn::expression(ScalarFn::parse("t/2"), 1.0);
        CHECK(d(2.0) == 1.0);
        CHECK_THROWS_AS(d(3.0), DelayViolation);
        CHECK(d.max_lag() == 1.0);
    }
    SUBCASE("undeclared expression lag is unknown") {
        CHECK_FALSE(DelayFn::expression(ScalarFn::parse("t - sin(t)^2")).max_lag());
    }
}

TEST_CASE("envelope_bounds on the worked examples") {
    SUBCASE("example1 has alpha = beta = 1") {
        const auto m = builtin("example1");
        const auto b = envelope_bounds(m.system, 0.0, 2.0 * std::numbers::pi, 1001);
        CHECK(std::fabs(b.alpha - 1.0) < 1e-6);
        CHECK(std::fabs(b.beta - 1.0) < 1e-6);
        CHECK(b.samples == 1001);
    }
    SUBCASE("sunflower has alpha = 1, beta = 2") {
        const auto m = builtin("sunflower");
        const auto b = envelope_bounds(m.system, 0.0, 10.0, 11);
        CHECK(b.alpha == 1.0);
        CHECK(b.beta == 2.0);
    }
    SUBCASE("an empty system has zero bounds") {
        const auto b = envelope_bounds(SecondOrderDDE{}, 0.0, 1.0, 2);
        CHECK(b.alpha == 0.0);
        CHECK(b.beta == 0.0);
    }
    CHECK_THROWS_AS(envelope_bounds(SecondOrderDDE{}, 1.0, 1.0, 10), DomainError);
    CHECK_THROWS_AS(envelope_bounds(SecondOrderDDE{}, -1.0, 1.0, 10), DomainError);
    CHECK_THROWS_AS(envelope_bounds(SecondOrderDDE{}, 0.0, 1.0, 1), DomainError);
}

TEST_CASE("refining a nested grid never lowers the bounds") {
    SecondOrderDDE sys;
    sys.damping_terms.push_back(DampingTerm::linear(ScalarFn::parse("sin(3*t) + 0.5*cos(7*t)")));
    sys.state_terms.push_back(StateTerm::linear(ScalarFn::parse("exp(-t)*cos(t)")));
    BoundsEstimate prev = envelope_bounds(sys, 0.0, 10.0, 11);
    for (int k = 1; k <= 8; ++k) {
        const int samples = 10 * (1 << k) + 1;
        const auto b = envelope_bounds(sys, 0.0, 10.0, samples);
        CHECK(b.alpha >= prev.alpha);
        CHECK(b.beta >= prev.beta);
        prev = b;
    }
    CHECK(prev.beta == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("state-term envelopes bound |s(t,w)/w| and are attained") {
    SUBCASE("sine") {
        const auto term = StateTerm::sine(-2.0, 1.5);
        CHECK(term.envelope(0.0) == 3.0);
        const double g = sampled_gain(term, 0.0);
        CHECK(g <= 3.0);
        CHECK(g > 3.0 * (1.0 - 1e-6));
    }
    SUBCASE("rational") {
        for (int n = 1; n <= 6; ++n)
            for (int m = 0; m < n; ++m) {
                const auto term = StateTerm::rational(ScalarFn::constant(-0.5), m, n);
                const double env = term.envelope(0.0);
                const double g = sampled_gain(term, 0.0);
                CHECK(g <= env * (1.0 + 1e-12));
                CHECK(g > env * (1.0 - 1e-3));  // m = 0 peaks only in the limit w -> 0
            }
    }
    SUBCASE("saturating") {
        const auto term = StateTerm::saturating(-0.8, 8);
        CHECK(term.envelope(0.0) == doctest::Approx(0.8));
        CHECK(sampled_gain(term, 0.0) <= 0.8 * (1.0 + 1e-15));
        CHECK(term.value(0.0, 1.0) == doctest::Approx(-0.4));
    }
    SUBCASE("declared envelope replaces the computed one") {
        const auto term = StateTerm::sine(1.0, 1.0).with_envelope(ScalarFn::constant(5.0));
        CHECK(term.envelope(3.0) == 5.0);
    }
}

TEST_CASE("term values stay finite for huge arguments") {
    const auto rational = StateTerm::rational(ScalarFn::constant(1.0), 1, 4);
    CHECK(std::isfinite(rational.value(0.0, 1e200)));
    CHECK(rational.value(0.0, 1e100) == doctest::Approx(1e-200).epsilon(1e-12));
    const auto sat = StateTerm::saturating(1.0, 8);
    CHECK(std::isfinite(sat.value(0.0, 1e100)));
    CHECK(sat.value(0.0, 1e10) == doctest::Approx(1e-70).epsilon(1e-12));
}

TEST_CASE("invalid terms are rejected") {
    CHECK_THROWS_AS(StateTerm::saturating(1.0, 3), ModelError);
    CHECK_THROWS_AS(StateTerm::saturating(1.0, -2), ModelError);
    CHECK_THROWS_AS(StateTerm::rational(ScalarFn::constant(1.0), 2, 2), ModelError);
    CHECK_THROWS_AS(StateTerm::rational(ScalarFn::constant(1.0), -1, 2), ModelError);
}

TEST_CASE("builtins sit at their equilibrium") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.0, 1000.0);
    for (const auto& name : builtin_names()) {
        const auto m = builtin(name);
        for (int i = 0; i < 100; ++i) CHECK(std::fabs(m.system.equilibrium_residual(u(rng))) < 1e-12);
    }
    for (int k = -3; k <= 3; ++k) {
        const auto m = builtin("sunflower", {{"k", double(k)}, {"omega", 2.0}});
        CHECK(m.system.equilibrium == doctest::Approx(k * std::numbers::pi / 2.0));
        for (int i = 0; i < 100; ++i) CHECK(std::fabs(m.system.equilibrium_residual(u(rng))) < 1e-12);
    }
}

TEST_CASE("builtin defaults and histories") {
    const auto m = builtin("sunflower");
    CHECK(m.history.x_at_start() == 6.0);
    CHECK(m.history.v_at_start() == 1.0);
    CHECK(m.history.phi(-2.0) == 6.0);
    CHECK(m.history.psi(-2.0) == 0.0);
    CHECK(m.system.max_known_lag() == doctest::Approx(std::numbers::pi));
    CHECK(builtin_defaults("saturating_feedback").at("tau") == 10.0);
}

TEST_CASE("builtin errors") {
    CHECK_THROWS_AS(builtin("nope"), ModelError);
    CHECK_THROWS_AS(builtin_defaults("nope"), ModelError);
    CHECK_THROWS_AS(builtin("sunflower", {{"bogus", 1.0}}), ModelError);
    CHECK_THROWS_AS(builtin("sunflower", {{"omega", 0.0}}), ModelError);
    CHECK_THROWS_AS(builtin("sunflower", {{"k", 0.5}}), ModelError);
    CHECK_THROWS_AS(builtin("sunflower", {{"tau", -1.0}}), ModelError);
    CHECK_THROWS_AS(builtin("rational_feedback", {{"m", 4.0}}), ModelError);
    CHECK_THROWS_AS(builtin("saturating_feedback", {{"n", 3.0}}), ModelError);
    CHECK_THROWS_AS(builtin("example1", {{"x0", std::nan("")}}), ModelError);
}

TEST_CASE("validate rejects a wrong equilibrium") {
    SecondOrderDDE sys;
    sys.state_terms.push_back(StateTerm::linear(ScalarFn::constant(1.0)));
    sys.equilibrium = 0.5;
    CHECK_THROWS_AS(validate(sys), ModelError);
    sys.equilibrium = 0.0;
    CHECK_NOTHROW(validate(sys));
}

TEST_CASE("controller factories") {
    CHECK(Controller::none().name() == "none");
    CHECK(Controller::damping(1.0, 2.0, 3.0).name() == "damping");
    CHECK_THROWS_AS(Controller::damping(0.0, 1.0), DomainError);
    CHECK_THROWS_AS(Controller::damping(2.0, 1.0), DomainError);
    CHECK_THROWS_AS(Controller::damping(1.0, 0.0), DomainError);
    CHECK_THROWS_AS(Controller::proportional_state(0.0), DomainError);
    CHECK_NOTHROW(Controller::delayed_proportional(-1.0, DelayFn::constant_lag(1.0)));
}
