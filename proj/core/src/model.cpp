#include "ddestab/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ddestab/criteria.hpp"
#include "ddestab/errors.hpp"

namespace ddestab {

namespace {

// Residuals at the equilibrium are checked at these many times in [0, 100].
constexpr int kResidualSamples = 100;
constexpr double kResidualTolerance = 1e-12;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double int_pow(double base, int exponent) {
    double result = 1.0;
    double factor = exponent < 0 ? 1.0 / base : base;
    for (int e = exponent < 0 ? -exponent : exponent; e > 0; e >>= 1) {
        if (e & 1) result *= factor;
        factor *= factor;
    }
    return result;
}

}  // namespace

// DelayFn --------------------------------------------------------------------

DelayFn DelayFn::constant_lag(double tau) {
    if (!(tau >= 0.0) || !std::isfinite(tau)) throw DomainError("constant lag must be finite and >= 0");
    DelayFn d;
    d.kind_ = ConstantLag{tau};
    return d;
}

DelayFn DelayFn::expression(ScalarFn g, std::optional<double> lag_bound) {
    if (lag_bound && !(*lag_bound >= 0.0)) throw DomainError("lag bound must be >= 0");
    DelayFn d;
    d.kind_ = Expression{std::move(g)};
    d.lag_bound_ = lag_bound;
    return d;
}

double DelayFn::operator()(double t) const {
    if (const auto* lag = std::get_if<ConstantLag>(&kind_)) return t - lag->tau;
    const double s = std::get<Expression>(kind_).g(t);
    if (s > t)
        throw DelayViolation("delay function returned g(t)=" + std::to_string(s) + " > t=" + std::to_string(t));
    if (lag_bound_ && t - s > *lag_bound_)
        throw DelayViolation("lag t-g(t)=" + std::to_string(t - s) + " exceeds declared bound " +
                             std::to_string(*lag_bound_));
    return s;
}

std::optional<double> DelayFn::max_lag() const noexcept {
    if (const auto* lag = std::get_if<ConstantLag>(&kind_)) return lag->tau;
    return lag_bound_;
}

// Terms ----------------------------------------------------------------------

DampingTerm DampingTerm::linear(ScalarFn a, DelayFn delay) {
    ScalarFn env = abs_of(a);
    return DampingTerm{Linear{std::move(a)}, std::move(delay), std::move(env)};
}

DampingTerm DampingTerm::linear(ScalarFn a, DelayFn delay, ScalarFn envelope) {
    return DampingTerm{Linear{std::move(a)}, std::move(delay), std::move(envelope)};
}

double DampingTerm::value(double t, double delayed_velocity) const {
    return std::get<Linear>(kind).a(t) * delayed_velocity;
}

StateTerm StateTerm::linear(ScalarFn b, DelayFn delay) {
    ScalarFn env = abs_of(b);
    return StateTerm{Linear{std::move(b)}, std::move(delay), std::move(env)};
}

StateTerm StateTerm::sine(double amplitude, double omega, DelayFn delay) {
    if (!std::isfinite(amplitude) || !std::isfinite(omega)) throw ModelError("sine term parameters must be finite");
    return StateTerm{Sine{amplitude, omega}, std::move(delay), ScalarFn::constant(std::fabs(amplitude) * std::fabs(omega))};
}

StateTerm StateTerm::rational(ScalarFn d, int m, int n, DelayFn delay) {
    if (m < 0 || n <= m) throw ModelError("rational term needs 0 <= m < n");
    const double mu = rational_envelope_mu(m, n);
    ScalarFn env = ScalarFn::from_tree(make_binary(ExprKind::Mul, make_number(mu), abs_of(d).root()));
    return StateTerm{Rational{std::move(d), m, n}, std::move(delay), std::move(env)};
}

StateTerm StateTerm::saturating(double c, int n, DelayFn delay) {
    if (!std::isfinite(c)) throw ModelError("saturating term coefficient must be finite");
    // |c/(1+w^n)| has a pole at w = -1 for odd n.
    if (n < 0 || n % 2 != 0) throw ModelError("saturating term needs an even exponent n >= 0");
    return StateTerm{Saturating{c, n}, std::move(delay), ScalarFn::constant(std::fabs(c))};
}

StateTerm StateTerm::with_envelope(ScalarFn declared) const {
    StateTerm copy = *this;
    copy.envelope = std::move(declared);
    return copy;
}

double StateTerm::value(double t, double w) const {
    return std::visit(
        overloaded{
            [&](const Linear& k) { return k.b(t) * w; },
            [&](const Sine& k) { return k.amplitude * std::sin(k.omega * w); },
            [&](const Rational& k) {
                const double r = std::fabs(w);
                // Divide through by r^n for large r to stay finite.
                const double ratio = r <= 1.0 ? int_pow(r, k.m + 1) / (1.0 + int_pow(r, k.n))
                                              : int_pow(r, k.m + 1 - k.n) / (int_pow(r, -k.n) + 1.0);
                return k.d(t) * ratio;
            },
            [&](const Saturating& k) {
                if (std::fabs(w) <= 1.0) return k.c * w / (1.0 + int_pow(w, k.n));
                return k.c * int_pow(w, 1 - k.n) / (int_pow(w, -k.n) + 1.0);
            },
        },
        kind);
}

// System ---------------------------------------------------------------------

double SecondOrderDDE::equilibrium_residual(double t) const {
    double r = 0.0;
    for (const auto& term : damping_terms) r += term.value(t, 0.0);
    for (const auto& term : state_terms) r += term.value(t, equilibrium);
    return r;
}

double SecondOrderDDE::max_known_lag() const {
    double lag = 0.0;
    for (const auto& term : damping_terms) lag = std::max(lag, term.delay.max_lag().value_or(0.0));
    for (const auto& term : state_terms) lag = std::max(lag, term.delay.max_lag().value_or(0.0));
    return lag;
}

void validate(const SecondOrderDDE& sys) {
    if (!std::isfinite(sys.equilibrium)) throw ModelError("equilibrium must be finite");
    for (int i = 0; i < kResidualSamples; ++i) {
        // Irrational stride so the sample does not lock onto a period.
        const double t = std::fmod(i * 1.6180339887498949 * 10.0, 100.0);
        const double r = sys.equilibrium_residual(t);
        if (!(std::fabs(r) < kResidualTolerance))
            throw ModelError("x* = " + std::to_string(sys.equilibrium) + " is not an equilibrium: residual " +
                             std::to_string(r) + " at t=" + std::to_string(t));
    }
}

History History::constant(double x, double v, double t0) {
    return History{ScalarFn::constant(x), ScalarFn::constant(v), t0, std::nullopt};
}

// Controller -----------------------------------------------------------------

Controller Controller::damping(double delta, double lambda, double xstar) {
    if (!(delta > 0.0 && delta < 2.0)) throw DomainError("damping control needs delta in (0, 2)");
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("damping control needs lambda > 0");
    if (!std::isfinite(xstar)) throw DomainError("equilibrium must be finite");
    return Controller{Damping{delta, lambda, xstar}};
}

Controller Controller::delayed_proportional(double b, DelayFn h) {
    if (!std::isfinite(b)) throw DomainError("delayed proportional gain must be finite");
    return Controller{DelayedProportional{b, std::move(h)}};
}

Controller Controller::proportional_state(double K, double xstar) {
    if (!(K > 0.0) || !std::isfinite(K)) throw DomainError("proportional control needs K > 0");
    if (!std::isfinite(xstar)) throw DomainError("equilibrium must be finite");
    return Controller{ProportionalState{K, xstar}};
}

std::string_view Controller::name() const {
    return std::visit(overloaded{
                          [](const None&) { return std::string_view("none"); },
                          [](const Damping&) { return std::string_view("damping"); },
                          [](const DelayedProportional&) { return std::string_view("delayed_proportional"); },
                          [](const ProportionalState&) { return std::string_view("proportional_state"); },
                      },
                      variant);
}

// Bounds ---------------------------------------------------------------------

BoundsEstimate envelope_bounds(const SecondOrderDDE& sys, double t_lo, double t_hi, int samples) {
    if (!(t_hi > t_lo) || !(t_lo >= 0.0)) throw DomainError("envelope_bounds needs t_hi > t_lo >= 0");
    if (samples < 2) throw DomainError("envelope_bounds needs at least 2 samples");

    BoundsEstimate out{0.0, 0.0, t_lo, t_hi, samples};
    const double step = (t_hi - t_lo) / (samples - 1);
    for (int i = 0; i < samples; ++i) {
        const double t = i + 1 == samples ? t_hi : t_lo + i * step;
        double a = 0.0;
        double b = 0.0;
        for (const auto& term : sys.damping_terms) a += std::fabs(term.envelope(t));
        for (const auto& term : sys.state_terms) b += std::fabs(term.envelope(t));
        out.alpha = std::max(out.alpha, a);
        out.beta = std::max(out.beta, b);
    }
    return out;
}

}  // namespace ddestab
