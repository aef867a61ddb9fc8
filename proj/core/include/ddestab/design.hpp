#pragma once

// Gain synthesis for the damping control u = -delta lambda x' - lambda^2 (x - x*)
// and the proportional state control u = -K (x - x*).

#include <optional>
#include <string>
#include <variant>

#include "ddestab/criteria.hpp"
#include "ddestab/model.hpp"

namespace ddestab {

/// Default relative excess of lambda over its threshold.
inline constexpr double kDefaultMargin = 0.1;

/// Smallest admissible lambda for a given delta:
///   mu = [p alpha + sqrt(p^2 alpha^2 + 4 s beta delta)] / (delta s),
///   s = sqrt(4 - delta^2),  p = delta + s.
/// Any lambda > mu makes the controlled equation exponentially stable.
/// Throws DomainError unless 0 < delta < 2 and alpha, beta >= 0.
double mu_of_delta(double delta, double alpha, double beta);

struct DeltaOptimum {
    double delta;
    double mu;
};

/// Minimizes mu_of_delta over [epsilon, 2 - epsilon]: a 512-point grid,
/// then golden-section refinement on the bracket around the best grid point.
/// When alpha = beta = 0 (mu identically zero) returns delta = sqrt(2).
DeltaOptimum optimal_delta(double alpha, double beta, double epsilon);

struct GainDesign {
    double delta = 0.0;
    double lambda_threshold = 0.0;
    double lambda = 0.0;
    double margin = 0.0;  // lambda = (1 + margin) * threshold when threshold > 0
    Controller controller;
    BoundsEstimate bounds_used;
};

/// lambda = (1 + margin) mu(delta); with a zero threshold lambda = margin.
/// Throws DomainError if the resulting lambda would not strictly exceed the
/// threshold (margin <= 0).
GainDesign damping_gain(double alpha, double beta, double delta, double margin);

/// Accepts an explicitly requested lambda; throws DomainError unless
/// lambda > mu(delta).
GainDesign damping_gain_for_lambda(double alpha, double beta, double delta, double lambda);

struct FixedDelta {
    double delta;
};
struct OptimizeDelta {
    double epsilon;
};
using DeltaPolicy = std::variant<FixedDelta, OptimizeDelta>;

/// Envelope reduction: bounds alpha, beta are taken from the system's
/// envelopes over [t_lo, t_hi], then the damping gain is chosen for them and
/// the controller is centred on sys.equilibrium.
GainDesign synthesize_damping_controller(const SecondOrderDDE& sys, const DeltaPolicy& policy, double margin,
                                         double t_lo, double t_hi, int samples);

/// Same, with an explicitly requested lambda.
GainDesign synthesize_damping_controller_for_lambda(const SecondOrderDDE& sys, const DeltaPolicy& policy,
                                                    double lambda, double t_lo, double t_hi, int samples);

struct ProportionalGain {
    double K;
    std::string chosen_case;  // "a", "b" or "c"
    CriterionReport report;   // theorem4_check(a, K, C)
};

/// Order in which the cases of the proportional-gain test are tried.
enum class CasePreference { ABC, BAC, C };

/// Picks K for u = -K (x - x*): the midpoint of the first nonempty interval
/// among cases a and b (in preference order), otherwise 1.25 times the case-c
/// threshold. Returns nullopt only for degenerate input (a <= 0 or
/// non-finite values).
std::optional<ProportionalGain> proportional_gain(double a, double C, CasePreference preference = CasePreference::ABC);

}  // namespace ddestab
