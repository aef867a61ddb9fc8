#include <cmath>
#include <numbers>
#include <string>

#include "ddestab/errors.hpp"
#include "ddestab/model.hpp"

namespace ddestab {

namespace {

class Params {
public:
    Params(std::string_view model, ParamMap defaults, const ParamMap& given) : model_(model), values_(std::move(defaults)) {
        for (const auto& [key, value] : given) {
            auto it = values_.find(key);
            if (it == values_.end())
                throw ModelError("unknown parameter '" + key + "' for builtin '" + std::string(model) + "'");
            if (!std::isfinite(value)) throw ModelError("parameter '" + key + "' must be finite");
            it->second = value;
        }
    }

    double real(std::string_view key) const { return values_.find(key)->second; }

    double nonnegative(std::string_view key) const {
        const double v = real(key);
        if (v < 0.0) throw ModelError(std::string(key) + " must be >= 0 for " + std::string(model_));
        return v;
    }

    double positive(std::string_view key) const {
        const double v = real(key);
        if (!(v > 0.0)) throw ModelError(std::string(key) + " must be > 0 for " + std::string(model_));
        return v;
    }

    int integer(std::string_view key) const {
        const double v = real(key);
        if (v != std::floor(v) || std::fabs(v) > 1e6)
            throw ModelError(std::string(key) + " must be an integer for " + std::string(model_));
        return static_cast<int>(v);
    }

private:
    std::string_view model_;
    ParamMap values_;
};

History start_history(const Params& p) {
    History h = History::constant(p.real("x0"), 0.0, 0.0);
    h.v0 = p.real("v0");
    return h;
}

// x'' + sin(t) x'(t - tau_g) + cos(t) x(t - tau_h) = 0
BuiltinModel make_example1(const Params& p) {
    SecondOrderDDE sys;
    sys.damping_terms.push_back(
        DampingTerm::linear(ScalarFn::parse("sin(t)"), DelayFn::constant_lag(p.nonnegative("tau_g"))));
    sys.state_terms.push_back(StateTerm::linear(ScalarFn::parse("cos(t)"), DelayFn::constant_lag(p.nonnegative("tau_h"))));
    sys.equilibrium = 0.0;
    return {sys, start_history(p)};
}

// x'' + a x' + A sin(omega x(t - tau)) = 0, equilibrium k pi / omega.
// Defaults reproduce the sunflower run x'' + x' + 2 sin(x(t - pi)) = 0 with
// x = 6 before t = 0 and x'(0) = 1.
BuiltinModel make_sunflower(const Params& p) {
    SecondOrderDDE sys;
    sys.damping_terms.push_back(DampingTerm::linear(ScalarFn::constant(p.real("a"))));
    sys.state_terms.push_back(
        StateTerm::sine(p.real("A"), p.positive("omega"), DelayFn::constant_lag(p.nonnegative("tau"))));
    sys.equilibrium = p.integer("k") * std::numbers::pi / p.positive("omega");
    return {sys, start_history(p)};
}

// x'' + a x' + b x(t - tau) = d0 |x(t - tau)|^(m+1) / (1 + |x(t - tau)|^n)
BuiltinModel make_rational_feedback(const Params& p) {
    const int m = p.integer("m");
    const int n = p.integer("n");
    if (m < 0 || n <= m) throw ModelError("rational_feedback needs 0 <= m < n");
    const DelayFn lag = DelayFn::constant_lag(p.nonnegative("tau"));
    SecondOrderDDE sys;
    sys.damping_terms.push_back(DampingTerm::linear(ScalarFn::constant(p.real("a"))));
    sys.state_terms.push_back(StateTerm::linear(ScalarFn::constant(p.real("b")), lag));
    sys.state_terms.push_back(StateTerm::rational(ScalarFn::constant(-p.real("d0")), m, n, lag));
    sys.equilibrium = 0.0;
    return {sys, start_history(p)};
}

// x'' + a x' + b x(t - tau) = c x(t - tau) / (1 + x(t - tau)^n)
BuiltinModel make_saturating_feedback(const Params& p) {
    const int n = p.integer("n");
    const DelayFn lag = DelayFn::constant_lag(p.nonnegative("tau"));
    SecondOrderDDE sys;
    sys.damping_terms.push_back(DampingTerm::linear(ScalarFn::constant(p.real("a"))));
    sys.state_terms.push_back(StateTerm::linear(ScalarFn::constant(p.real("b")), lag));
    sys.state_terms.push_back(StateTerm::saturating(-p.real("c"), n, lag));
    sys.equilibrium = 0.0;
    return {sys, start_history(p)};
}

}  // namespace

std::vector<std::string> builtin_names() {
    return {"example1", "sunflower", "rational_feedback", "saturating_feedback"};
}

ParamMap builtin_defaults(std::string_view name) {
    if (name == "example1") return {{"tau_g", 0.0}, {"tau_h", 0.0}, {"x0", 1.0}, {"v0", 0.0}};
    if (name == "sunflower")
        return {{"a", 1.0}, {"A", 2.0}, {"omega", 1.0}, {"tau", std::numbers::pi}, {"k", 1.0}, {"x0", 6.0}, {"v0", 1.0}};
    if (name == "rational_feedback")
        return {{"a", 2.0}, {"b", 1.0}, {"d0", 0.5}, {"m", 1.0}, {"n", 4.0}, {"tau", 1.0}, {"x0", 1.0}, {"v0", 0.0}};
    if (name == "saturating_feedback")
        return {{"a", 2.0}, {"b", 1.0}, {"c", 0.8}, {"n", 8.0}, {"tau", 10.0}, {"x0", 1.0}, {"v0", 0.0}};
    throw ModelError("unknown builtin model '" + std::string(name) + "'");
}

BuiltinModel builtin(std::string_view name, const ParamMap& params) {
    const Params p(name, builtin_defaults(name), params);
    BuiltinModel out;
    if (name == "example1")
        out = make_example1(p);
    else if (name == "sunflower")
        out = make_sunflower(p);
    else if (name == "rational_feedback")
        out = make_rational_feedback(p);
    else
        out = make_saturating_feedback(p);
    validate(out.system);
    return out;
}

}  // namespace ddestab
