#include "ddestab/model_config.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <string>

#include "ddestab/errors.hpp"

namespace ddestab {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_object(const json& j, std::string_view what) {
    if (!j.is_object()) throw ConfigError(std::string(what) + " must be a JSON object");
}

void only_keys(const json& j, std::initializer_list<std::string_view> allowed, std::string_view what) {
    require_object(j, what);
    for (const auto& [key, value] : j.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw ConfigError("unknown key '" + key + "' in " + std::string(what));
    }
}

const json& required(const json& j, const char* key, std::string_view what) {
    auto it = j.find(key);
    if (it == j.end()) throw ConfigError(std::string(what) + " is missing '" + key + "'");
    return *it;
}

std::string kind_of(const json& j, std::string_view what) {
    const json& k = required(j, "kind", what);
    if (!k.is_string()) throw ConfigError(std::string(what) + ".kind must be a string");
    return k.get<std::string>();
}

int integer_from_json(const json& j, std::string_view what) {
    const double v = real_from_json(j, what);
    if (v != std::floor(v) || std::fabs(v) > 1e6) throw ConfigError(std::string(what) + " must be an integer");
    return static_cast<int>(v);
}

const json& params_of(const json& j, std::initializer_list<std::string_view> allowed, std::string_view what) {
    const json& p = required(j, "params", what);
    only_keys(p, allowed, std::string(what) + ".params");
    return p;
}

DampingTerm damping_term_from_json(const json& j, std::string_view what) {
    only_keys(j, {"kind", "params", "delay", "envelope"}, what);
    const std::string kind = kind_of(j, what);
    if (kind != "linear") throw ConfigError(std::string(what) + ": unknown damping term kind '" + kind + "'");
    const json& p = params_of(j, {"a"}, what);
    ScalarFn a = function_from_json(required(p, "a", what), "a");
    DelayFn delay = delay_from_json(required(j, "delay", what));
    if (auto env = j.find("envelope"); env != j.end())
        return DampingTerm::linear(std::move(a), std::move(delay), function_from_json(*env, "envelope"));
    return DampingTerm::linear(std::move(a), std::move(delay));
}

StateTerm state_term_from_json(const json& j, std::string_view what) {
    only_keys(j, {"kind", "params", "delay", "envelope"}, what);
    const std::string kind = kind_of(j, what);
    DelayFn delay = delay_from_json(required(j, "delay", what));
    StateTerm term = [&] {
        try {
            if (kind == "linear") {
                const json& p = params_of(j, {"b"}, what);
                return StateTerm::linear(function_from_json(required(p, "b", what), "b"), delay);
            }
            if (kind == "sine") {
                const json& p = params_of(j, {"A", "omega"}, what);
                return StateTerm::sine(real_from_json(required(p, "A", what), "A"),
                                       real_from_json(required(p, "omega", what), "omega"), delay);
            }
            if (kind == "rational") {
                const json& p = params_of(j, {"d", "m", "n"}, what);
                return StateTerm::rational(function_from_json(required(p, "d", what), "d"),
                                           integer_from_json(required(p, "m", what), "m"),
                                           integer_from_json(required(p, "n", what), "n"), delay);
            }
            if (kind == "saturating") {
                const json& p = params_of(j, {"c", "n"}, what);
                return StateTerm::saturating(real_from_json(required(p, "c", what), "c"),
                                             integer_from_json(required(p, "n", what), "n"), delay);
            }
        } catch (const ModelError& e) {
            throw ConfigError(std::string(what) + ": " + e.what());
        }
        throw ConfigError(std::string(what) + ": unknown state term kind '" + kind + "'");
    }();
    if (auto env = j.find("envelope"); env != j.end()) term = term.with_envelope(function_from_json(*env, "envelope"));
    return term;
}

json function_to_json(const ScalarFn& f) { return f.source(); }

json damping_term_to_json(const DampingTerm& term) {
    const auto& lin = std::get<DampingTerm::Linear>(term.kind);
    return json{{"kind", "linear"},
                {"params", {{"a", function_to_json(lin.a)}}},
                {"delay", to_json(term.delay)},
                {"envelope", function_to_json(term.envelope)}};
}

json state_term_to_json(const StateTerm& term) {
    json out = std::visit(
        overloaded{
            [](const StateTerm::Linear& k) {
                return json{{"kind", "linear"}, {"params", {{"b", function_to_json(k.b)}}}};
            },
            [](const StateTerm::Sine& k) {
                return json{{"kind", "sine"}, {"params", {{"A", k.amplitude}, {"omega", k.omega}}}};
            },
            [](const StateTerm::Rational& k) {
                return json{{"kind", "rational"}, {"params", {{"d", function_to_json(k.d)}, {"m", k.m}, {"n", k.n}}}};
            },
            [](const StateTerm::Saturating& k) {
                return json{{"kind", "saturating"}, {"params", {{"c", k.c}, {"n", k.n}}}};
            },
        },
        term.kind);
    out["delay"] = to_json(term.delay);
    out["envelope"] = function_to_json(term.envelope);
    return out;
}

}  // namespace

double real_from_json(const json& j, std::string_view what) {
    if (j.is_number()) {
        const double v = j.get<double>();
        if (!std::isfinite(v)) throw ConfigError(std::string(what) + " must be finite");
        return v;
    }
    if (j.is_string()) {
        try {
            const ScalarFn f = ScalarFn::parse(j.get<std::string>());
            if (!f.is_constant()) throw ConfigError(std::string(what) + " must not depend on t");
            return f(0.0);
        } catch (const ParseError& e) {
            throw ConfigError(std::string(what) + ": " + e.what());
        } catch (const EvalError& e) {
            throw ConfigError(std::string(what) + ": " + e.what());
        }
    }
    throw ConfigError(std::string(what) + " must be a number or an expression string");
}

ScalarFn function_from_json(const json& j, std::string_view what) {
    if (j.is_number()) return ScalarFn::constant(real_from_json(j, what));
    if (j.is_string()) {
        try {
            return ScalarFn::parse(j.get<std::string>());
        } catch (const ParseError& e) {
            throw ConfigError(std::string(what) + ": " + e.what());
        }
    }
    throw ConfigError(std::string(what) + " must be a number or an expression string");
}

DelayFn delay_from_json(const json& j) {
    only_keys(j, {"kind", "params"}, "delay");
    const std::string kind = kind_of(j, "delay");
    try {
        if (kind == "constant_lag") {
            const json& p = params_of(j, {"tau"}, "delay");
            return DelayFn::constant_lag(real_from_json(required(p, "tau", "delay"), "tau"));
        }
        if (kind == "expression") {
            const json& p = params_of(j, {"g", "lag_bound"}, "delay");
            std::optional<double> bound;
            if (auto it = p.find("lag_bound"); it != p.end()) bound = real_from_json(*it, "lag_bound");
            return DelayFn::expression(function_from_json(required(p, "g", "delay"), "g"), bound);
        }
    } catch (const DomainError& e) {
        throw ConfigError(std::string("delay: ") + e.what());
    }
    throw ConfigError("unknown delay kind '" + kind + "'");
}

json to_json(const DelayFn& d) {
    if (const auto* lag = std::get_if<DelayFn::ConstantLag>(&d.kind()))
        return json{{"kind", "constant_lag"}, {"params", {{"tau", lag->tau}}}};
    json p{{"g", std::get<DelayFn::Expression>(d.kind()).g.source()}};
    if (d.lag_bound()) p["lag_bound"] = *d.lag_bound();
    return json{{"kind", "expression"}, {"params", p}};
}

SecondOrderDDE system_from_json(const json& j) {
    only_keys(j, {"damping_terms", "state_terms", "equilibrium"}, "system");
    SecondOrderDDE sys;
    if (auto it = j.find("damping_terms"); it != j.end()) {
        if (!it->is_array()) throw ConfigError("damping_terms must be an array");
        for (std::size_t i = 0; i < it->size(); ++i)
            sys.damping_terms.push_back(damping_term_from_json((*it)[i], "damping_terms[" + std::to_string(i) + "]"));
    }
    if (auto it = j.find("state_terms"); it != j.end()) {
        if (!it->is_array()) throw ConfigError("state_terms must be an array");
        for (std::size_t i = 0; i < it->size(); ++i)
            sys.state_terms.push_back(state_term_from_json((*it)[i], "state_terms[" + std::to_string(i) + "]"));
    }
    if (auto it = j.find("equilibrium"); it != j.end()) sys.equilibrium = real_from_json(*it, "equilibrium");
    validate(sys);
    return sys;
}

json to_json(const SecondOrderDDE& sys) {
    json damping = json::array();
    for (const auto& term : sys.damping_terms) damping.push_back(damping_term_to_json(term));
    json state = json::array();
    for (const auto& term : sys.state_terms) state.push_back(state_term_to_json(term));
    return json{{"damping_terms", damping}, {"state_terms", state}, {"equilibrium", sys.equilibrium}};
}

History history_from_json(const json& j) {
    only_keys(j, {"phi", "psi", "t0", "v0"}, "history");
    History h;
    h.phi = function_from_json(required(j, "phi", "history"), "phi");
    h.psi = j.contains("psi") ? function_from_json(j["psi"], "psi") : ScalarFn::constant(0.0);
    h.t0 = j.contains("t0") ? real_from_json(j["t0"], "t0") : 0.0;
    if (j.contains("v0")) h.v0 = real_from_json(j["v0"], "v0");
    return h;
}

json to_json(const History& h) {
    json out{{"phi", h.phi.source()}, {"psi", h.psi.source()}, {"t0", h.t0}};
    if (h.v0) out["v0"] = *h.v0;
    return out;
}

Controller controller_from_json(const json& j) {
    require_object(j, "controller");
    const std::string kind = kind_of(j, "controller");
    try {
        if (kind == "none") {
            only_keys(j, {"kind"}, "controller");
            return Controller::none();
        }
        if (kind == "damping") {
            only_keys(j, {"kind", "delta", "lambda", "xstar"}, "controller");
            const double xstar = j.contains("xstar") ? real_from_json(j["xstar"], "xstar") : 0.0;
            return Controller::damping(real_from_json(required(j, "delta", "controller"), "delta"),
                                       real_from_json(required(j, "lambda", "controller"), "lambda"), xstar);
        }
        if (kind == "delayed_proportional") {
            only_keys(j, {"kind", "b", "delay"}, "controller");
            return Controller::delayed_proportional(real_from_json(required(j, "b", "controller"), "b"),
                                                    delay_from_json(required(j, "delay", "controller")));
        }
        if (kind == "proportional_state") {
            only_keys(j, {"kind", "K", "xstar"}, "controller");
            const double xstar = j.contains("xstar") ? real_from_json(j["xstar"], "xstar") : 0.0;
            return Controller::proportional_state(real_from_json(required(j, "K", "controller"), "K"), xstar);
        }
    } catch (const DomainError& e) {
        throw ConfigError(std::string("controller: ") + e.what());
    }
    throw ConfigError("unknown controller kind '" + kind + "'");
}

json to_json(const Controller& c) {
    return std::visit(overloaded{
                          [](const Controller::None&) { return json{{"kind", "none"}}; },
                          [](const Controller::Damping& d) {
                              return json{{"kind", "damping"}, {"delta", d.delta}, {"lambda", d.lambda}, {"xstar", d.xstar}};
                          },
                          [](const Controller::DelayedProportional& d) {
                              return json{{"kind", "delayed_proportional"}, {"b", d.b}, {"delay", to_json(d.h)}};
                          },
                          [](const Controller::ProportionalState& d) {
                              return json{{"kind", "proportional_state"}, {"K", d.K}, {"xstar", d.xstar}};
                          },
                      },
                      c.variant);
}

BuiltinModel model_from_json(const json& j) {
    require_object(j, "model");
    json system = j;
    system.erase("history");
    BuiltinModel out;
    try {
        out.system = system_from_json(system);
    } catch (const ModelError& e) {
        throw ConfigError(e.what());
    }
    if (auto it = j.find("history"); it != j.end())
        out.history = history_from_json(*it);
    else
        out.history = History::constant(out.system.equilibrium);
    return out;
}

}  // namespace ddestab
