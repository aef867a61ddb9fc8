#pragma once

// Second-order delay equations
//
//   x''(t) + sum_k f_k(t, x'(g_k(t))) + sum_k s_k(t, x(h_k(t))) = u(t),   t >= t0
//   x(t) = phi(t),  x'(t) = psi(t),                                       t <  t0
//
// together with the feedback laws u(t) and the built-in example systems.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ddestab/expr.hpp"

namespace ddestab {

/// Delay argument g(t) <= t, either t - tau or an explicit expression.
class DelayFn {
public:
    struct ConstantLag {
        double tau;
    };
    struct Expression {
        ScalarFn g;
    };

    /// Zero lag: g(t) = t.
    DelayFn() : kind_(ConstantLag{0.0}) {}

    static DelayFn constant_lag(double tau);
    static DelayFn expression(ScalarFn g, std::optional<double> lag_bound = std::nullopt);

    /// Evaluates g(t). Throws DelayViolation if g(t) > t or the declared lag
    /// bound is exceeded.
    double operator()(double t) const;

    const std::variant<ConstantLag, Expression>& kind() const noexcept { return kind_; }
    std::optional<double> lag_bound() const noexcept { return lag_bound_; }

    /// Declared or intrinsic upper bound of t - g(t), if known.
    std::optional<double> max_lag() const noexcept;

private:
    std::variant<ConstantLag, Expression> kind_;
    std::optional<double> lag_bound_;
};

/// f_k(t, w) = a(t) w evaluated at w = x'(g_k(t)).
struct DampingTerm {
    struct Linear {
        ScalarFn a;
    };

    std::variant<Linear> kind;
    DelayFn delay;
    ScalarFn envelope;  // pointwise bound of |f_k(t,w)/w|

    static DampingTerm linear(ScalarFn a, DelayFn delay = {});
    /// User-declared envelope; trusted as given.
    static DampingTerm linear(ScalarFn a, DelayFn delay, ScalarFn envelope);

    double value(double t, double delayed_velocity) const;
};

/// s_k(t, w) evaluated at w = x(h_k(t)).
struct StateTerm {
    struct Linear {  // b(t) w
        ScalarFn b;
    };
    struct Sine {  // A sin(omega w)
        double amplitude;
        double omega;
    };
    struct Rational {  // d(t) |w|^(m+1) / (1 + |w|^n)
        ScalarFn d;
        int m;
        int n;
    };
    struct Saturating {  // c w / (1 + w^n), n even
        double c;
        int n;
    };

    std::variant<Linear, Sine, Rational, Saturating> kind;
    DelayFn delay;
    ScalarFn envelope;  // pointwise bound of |s_k(t,w)/w|

    static StateTerm linear(ScalarFn b, DelayFn delay = {});
    static StateTerm sine(double amplitude, double omega, DelayFn delay = {});
    static StateTerm rational(ScalarFn d, int m, int n, DelayFn delay = {});
    static StateTerm saturating(double c, int n, DelayFn delay = {});

    /// Replaces the computed envelope with a user-declared one.
    StateTerm with_envelope(ScalarFn declared) const;

    double value(double t, double delayed_position) const;
};

struct SecondOrderDDE {
    std::vector<DampingTerm> damping_terms;
    std::vector<StateTerm> state_terms;
    double equilibrium = 0.0;

    /// sum_k f_k + sum_k s_k with every delayed argument replaced by the
    /// constant solution x = x*, x' = 0.
    double equilibrium_residual(double t) const;

    /// Largest known lag over all terms (0 if none known).
    double max_known_lag() const;
};

/// Throws ModelError unless the equilibrium residual is below 1e-12 on a
/// deterministic sample of times in [0, 100].
void validate(const SecondOrderDDE& sys);

/// Initial data. The node at t0 uses v0 when given (a velocity jump), while
/// delayed lookups strictly below t0 use psi.
struct History {
    ScalarFn phi;
    ScalarFn psi;
    double t0 = 0.0;
    std::optional<double> v0;

    double x_at_start() const { return phi(t0); }
    double v_at_start() const { return v0 ? *v0 : psi(t0); }

    static History constant(double x, double v = 0.0, double t0 = 0.0);
};

struct Controller {
    struct None {};
    /// u = -delta lambda x' - lambda^2 (x - x*)
    struct Damping {
        double delta;
        double lambda;
        double xstar;
    };
    /// u = -b [x(t) - x(h(t))]
    struct DelayedProportional {
        double b;
        DelayFn h;
    };
    /// u = -K (x - x*)
    struct ProportionalState {
        double K;
        double xstar;
    };

    std::variant<None, Damping, DelayedProportional, ProportionalState> variant{None{}};

    static Controller none() { return {}; }
    /// Throws DomainError unless 0 < delta < 2 and lambda > 0.
    static Controller damping(double delta, double lambda, double xstar = 0.0);
    static Controller delayed_proportional(double b, DelayFn h);
    /// Throws DomainError unless K > 0.
    static Controller proportional_state(double K, double xstar = 0.0);

    std::string_view name() const;
};

struct BoundsEstimate {
    double alpha = 0.0;
    double beta = 0.0;
    double t_lo = 0.0;
    double t_hi = 0.0;
    int samples = 0;
};

/// Sampled sup of the summed damping/state envelopes over [t_lo, t_hi].
/// Exact for constant coefficients and for periodic ones when the grid hits
/// the extremal phases.
BoundsEstimate envelope_bounds(const SecondOrderDDE& sys, double t_lo, double t_hi, int samples);

// Built-in example systems --------------------------------------------------

using ParamMap = std::map<std::string, double, std::less<>>;

struct BuiltinModel {
    SecondOrderDDE system;
    History history;
};

/// Names accepted by builtin().
std::vector<std::string> builtin_names();

/// Default parameters of a builtin; throws ModelError for unknown names.
ParamMap builtin_defaults(std::string_view name);

/// Constructs a built-in system. Parameters not given take their defaults;
/// unknown parameter names are rejected.
BuiltinModel builtin(std::string_view name, const ParamMap& params = {});

}  // namespace ddestab
