#include <doctest.h>

#include <cmath>
#include <random>

#include "ddestab/errors.hpp"
#include "ddestab/model_config.hpp"

using namespace ddestab;

namespace {

json lag(double tau) { return {{"kind", "constant_lag"}, {"params", {{"tau", tau}}}}; }

json sunflower_doc() {
    return json::parse(R"({
        "damping_terms": [{"kind": "linear", "params": {"a": 1}, "delay": {"kind": "constant_lag", "params": {"tau": 0}}}],
        "state_terms": [{"kind": "sine", "params": {"A": 2, "omega": 1},
                         "delay": {"kind": "constant_lag", "params": {"tau": 3.141592653589793}}}],
        "equilibrium": 3.141592653589793,
        "history": {"phi": 6, "v0": 1}
    })");
}

}  // namespace

TEST_CASE("real_from_json") {
    CHECK(real_from_json(json(2.5), "x") == 2.5);
    CHECK(real_from_json(json("2*3"), "x") == 6.0);
    CHECK(real_from_json(json("sqrt(2)^2"), "x") == doctest::Approx(2.0).epsilon(1e-15));
    CHECK_THROWS_AS(real_from_json(json("t"), "x"), ConfigError);
    CHECK_THROWS_AS(real_from_json(json("1/0"), "x"), ConfigError);
    CHECK_THROWS_AS(real_from_json(json("2*"), "x"), ConfigError);
    CHECK_THROWS_AS(real_from_json(json(true), "x"), ConfigError);
    CHECK_THROWS_AS(real_from_json(json::array(), "x"), ConfigError);
}

TEST_CASE("a model document reproduces the builtin") {
    const auto from_doc = model_from_json(sunflower_doc());
    const auto reference = builtin("sunflower");
    CHECK(from_doc.system.equilibrium == reference.system.equilibrium);
    CHECK(from_doc.history.x_at_start() == 6.0);
    CHECK(from_doc.history.v_at_start() == 1.0);
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    for (int i = 0; i < 100; ++i) {
        const double t = std::fabs(u(rng)) + 10.0;
        const double w = u(rng);
        CHECK(from_doc.system.state_terms[0].value(t, w) == reference.system.state_terms[0].value(t, w));
        CHECK(from_doc.system.damping_terms[0].value(t, w) == reference.system.damping_terms[0].value(t, w));
        CHECK(from_doc.system.state_terms[0].delay(t) == reference.system.state_terms[0].delay(t));
    }
}

TEST_CASE("system documents round-trip through to_json") {
    for (const auto& name : builtin_names()) {
        const auto m = builtin(name);
        const json doc = to_json(m.system);
        const auto back = system_from_json(doc);
        CHECK(to_json(back) == doc);
        REQUIRE(back.state_terms.size() == m.system.state_terms.size());
        std::mt19937_64 rng(42);
        std::uniform_real_distribution<double> u(-5.0, 5.0);
        for (int i = 0; i < 50; ++i) {
            const double t = 20.0 + u(rng);
            const double w = u(rng);
            for (std::size_t k = 0; k < m.system.state_terms.size(); ++k) {
                CHECK(back.state_terms[k].value(t, w) == m.system.state_terms[k].value(t, w));
                CHECK(back.state_terms[k].envelope(t) == m.system.state_terms[k].envelope(t));
            }
            for (std::size_t k = 0; k < m.system.damping_terms.size(); ++k)
                CHECK(back.damping_terms[k].value(t, w) == m.system.damping_terms[k].value(t, w));
        }
    }
}

TEST_CASE("history and delay round trips") {
    History h;
    h.phi = ScalarFn::parse("cos(t)");
    h.psi = ScalarFn::parse("-sin(t)");
    h.t0 = 1.0;
    h.v0 = 0.25;
    const History back = history_from_json(to_json(h));
    CHECK(back.phi == h.phi);
    CHECK(back.psi == h.psi);
    CHECK(back.t0 == 1.0);
    CHECK(back.v0 == 0.25);

    const auto d = DelayFn::expression(ScalarFn::parse("t - 1 - sin(t)^2"), 2.0);
    const auto dback = delay_from_json(to_json(d));
    CHECK(dback.lag_bound() == 2.0);
    CHECK(dback(3.0) == d(3.0));
    CHECK(delay_from_json(lag(1.5))(4.0) == 2.5);
}

TEST_CASE("controllers round-trip") {
    const Controller cs[] = {Controller::none(), Controller::damping(1.2, 3.0, 0.5),
                             Controller::delayed_proportional(-0.7, DelayFn::constant_lag(2.0)),
                             Controller::proportional_state(4.0, 1.0)};
    for (const auto& c : cs) {
        const json doc = to_json(c);
        CHECK(to_json(controller_from_json(doc)) == doc);
        CHECK(controller_from_json(doc).name() == c.name());
    }
    const auto d = controller_from_json(json::parse(R"j({"kind": "damping", "delta": "sqrt(2)", "lambda": 4})j"));
    CHECK(std::get<Controller::Damping>(d.variant).xstar == 0.0);
}

TEST_CASE("malformed documents are rejected") {
    SUBCASE("unknown keys") {
        json doc = sunflower_doc();
        doc["extra"] = 1;
        CHECK_THROWS_AS(model_from_json(doc), ConfigError);
        doc = sunflower_doc();
        doc["state_terms"][0]["params"]["phase"] = 0;
        CHECK_THROWS_AS(model_from_json(doc), ConfigError);
        doc = sunflower_doc();
        doc["history"]["x0"] = 0;
        CHECK_THROWS_AS(model_from_json(doc), ConfigError);
        CHECK_THROWS_AS(controller_from_json(json{{"kind", "none"}, {"gain", 1}}), ConfigError);
    }
    SUBCASE("unknown kinds") {
        CHECK_THROWS_AS(controller_from_json(json{{"kind", "pid"}}), ConfigError);
        CHECK_THROWS_AS(delay_from_json(json{{"kind", "state_dependent"}, {"params", json::object()}}), ConfigError);
        json doc = sunflower_doc();
        doc["state_terms"][0]["kind"] = "cubic";
        CHECK_THROWS_AS(model_from_json(doc), ConfigError);
    }
    SUBCASE("missing fields") {
        json doc = sunflower_doc();
        doc["state_terms"][0].erase("delay");
        CHECK_THROWS_AS(model_from_json(doc), ConfigError);
        CHECK_THROWS_AS(controller_from_json(json{{"kind", "damping"}, {"delta", 1}}), ConfigError);
        CHECK_THROWS_AS(history_from_json(json::object()), ConfigError);
    }
    SUBCASE("invalid values") {
        CHECK_THROWS_AS(controller_from_json(json{{"kind", "damping"}, {"delta", 2}, {"lambda", 1}}), ConfigError);
        CHECK_THROWS_AS(delay_from_json(lag(-1.0)), ConfigError);
        json doc = sunflower_doc();
        doc["equilibrium"] = 1.0;
        CHECK_THROWS_AS(model_from_json(doc), ConfigError);
        doc = sunflower_doc();
        doc["state_terms"][0] = {{"kind", "saturating"}, {"params", {{"c", 1}, {"n", 3}}}, {"delay", lag(0)}};
        doc["equilibrium"] = 0;
        CHECK_THROWS_AS(model_from_json(doc), ConfigError);
        doc["state_terms"][0]["params"]["n"] = 2.5;
        CHECK_THROWS_AS(model_from_json(doc), ConfigError);
    }
}

TEST_CASE("missing history defaults to rest at the equilibrium") {
    json doc = sunflower_doc();
    doc.erase("history");
    const auto m = model_from_json(doc);
    CHECK(m.history.x_at_start() == doctest::Approx(3.141592653589793).epsilon(1e-16));
    CHECK(m.history.v_at_start() == 0.0);
}
