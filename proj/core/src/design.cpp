#include "ddestab/design.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ddestab/errors.hpp"

namespace ddestab {

namespace {

constexpr int kDeltaGridPoints = 512;
constexpr double kDeltaTolerance = 1e-9;

// Golden-section minimization of f on [lo, hi] down to a bracket of width tol.
template <class F>
double golden_section_minimize(F&& f, double lo, double hi, double tol) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = hi - inv_phi * (hi - lo);
    double d = lo + inv_phi * (hi - lo);
    double fc = f(c);
    double fd = f(d);
    while (hi - lo > tol) {
        if (fc <= fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = f(d);
        }
    }
    return 0.5 * (lo + hi);
}

void check_bounds(double alpha, double beta) {
    if (!(alpha >= 0.0) || !(beta >= 0.0) || !std::isfinite(alpha) || !std::isfinite(beta))
        throw DomainError("alpha and beta must be finite and >= 0");
}

double pick_delta(const DeltaPolicy& policy, double alpha, double beta) {
    if (const auto* fixed = std::get_if<FixedDelta>(&policy)) return fixed->delta;
    return optimal_delta(alpha, beta, std::get<OptimizeDelta>(policy).epsilon).delta;
}

}  // namespace

double mu_of_delta(double delta, double alpha, double beta) {
    if (!(delta > 0.0 && delta < 2.0)) throw DomainError("delta must lie in (0, 2)");
    check_bounds(alpha, beta);
    const double s = std::sqrt(4.0 - delta * delta);
    const double p = delta + s;
    return (p * alpha + std::sqrt(p * p * alpha * alpha + 4.0 * s * beta * delta)) / (delta * s);
}

DeltaOptimum optimal_delta(double alpha, double beta, double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("epsilon must lie in (0, 1)");
    check_bounds(alpha, beta);
    if (alpha == 0.0 && beta == 0.0) return {std::numbers::sqrt2, 0.0};

    const double lo = epsilon;
    const double hi = 2.0 - epsilon;
    const double step = (hi - lo) / (kDeltaGridPoints - 1);
    auto grid = [&](int i) { return i + 1 == kDeltaGridPoints ? hi : lo + i * step; };

    int best = 0;
    double best_mu = mu_of_delta(grid(0), alpha, beta);
    for (int i = 1; i < kDeltaGridPoints; ++i) {
        const double mu = mu_of_delta(grid(i), alpha, beta);
        if (mu < best_mu) {
            best_mu = mu;
            best = i;
        }
    }

    const double a = grid(std::max(best - 1, 0));
    const double b = grid(std::min(best + 1, kDeltaGridPoints - 1));
    const double refined = golden_section_minimize([&](double d) { return mu_of_delta(d, alpha, beta); }, a, b,
                                                   kDeltaTolerance);
    const double refined_mu = mu_of_delta(refined, alpha, beta);
    if (refined_mu <= best_mu) return {refined, refined_mu};
    return {grid(best), best_mu};
}

GainDesign damping_gain(double alpha, double beta, double delta, double margin) {
    if (!(margin >= 0.0) || !std::isfinite(margin)) throw DomainError("margin must be finite and >= 0");
    const double threshold = mu_of_delta(delta, alpha, beta);
    double lambda = 0.0;
    if (threshold > 0.0) {
        lambda = (1.0 + margin) * threshold;
    } else {
        lambda = margin;
    }
    if (!(lambda > threshold))
        throw DomainError("lambda must strictly exceed the threshold mu(delta) = " + std::to_string(threshold) +
                          "; use a positive margin");

    GainDesign out;
    out.delta = delta;
    out.lambda_threshold = threshold;
    out.lambda = lambda;
    out.margin = margin;
    out.controller = Controller::damping(delta, lambda, 0.0);
    out.bounds_used = BoundsEstimate{alpha, beta, 0.0, 0.0, 0};
    return out;
}

GainDesign damping_gain_for_lambda(double alpha, double beta, double delta, double lambda) {
    const double threshold = mu_of_delta(delta, alpha, beta);
    if (!(lambda > threshold) || !std::isfinite(lambda))
        throw DomainError("lambda = " + std::to_string(lambda) + " does not exceed the threshold mu(delta) = " +
                          std::to_string(threshold));
    GainDesign out;
    out.delta = delta;
    out.lambda_threshold = threshold;
    out.lambda = lambda;
    out.margin = threshold > 0.0 ? lambda / threshold - 1.0 : lambda;
    out.controller = Controller::damping(delta, lambda, 0.0);
    out.bounds_used = BoundsEstimate{alpha, beta, 0.0, 0.0, 0};
    return out;
}

GainDesign synthesize_damping_controller(const SecondOrderDDE& sys, const DeltaPolicy& policy, double margin,
                                         double t_lo, double t_hi, int samples) {
    const BoundsEstimate bounds = envelope_bounds(sys, t_lo, t_hi, samples);
    GainDesign out = damping_gain(bounds.alpha, bounds.beta, pick_delta(policy, bounds.alpha, bounds.beta), margin);
    out.controller = Controller::damping(out.delta, out.lambda, sys.equilibrium);
    out.bounds_used = bounds;
    return out;
}

GainDesign synthesize_damping_controller_for_lambda(const SecondOrderDDE& sys, const DeltaPolicy& policy,
                                                    double lambda, double t_lo, double t_hi, int samples) {
    const BoundsEstimate bounds = envelope_bounds(sys, t_lo, t_hi, samples);
    GainDesign out =
        damping_gain_for_lambda(bounds.alpha, bounds.beta, pick_delta(policy, bounds.alpha, bounds.beta), lambda);
    out.controller = Controller::damping(out.delta, out.lambda, sys.equilibrium);
    out.bounds_used = bounds;
    return out;
}

std::optional<ProportionalGain> proportional_gain(double a, double C, CasePreference preference) {
    if (!(a > 0.0) || !(C >= 0.0) || !std::isfinite(a) || !std::isfinite(C)) return std::nullopt;
    const double quarter = a * a / 4.0;
    const double upper_b = a * a / 2.0 - C;

    auto try_case = [&](char label) -> std::optional<double> {
        switch (label) {
            case 'a':
                if (C < quarter) return 0.5 * (C + quarter);
                return std::nullopt;
            case 'b':
                if (quarter < upper_b) return 0.5 * (quarter + upper_b);
                return std::nullopt;
            default:
                return 1.25 * case_c_threshold(a, C);
        }
    };

    std::string order;
    switch (preference) {
        case CasePreference::ABC: order = "abc"; break;
        case CasePreference::BAC: order = "bac"; break;
        case CasePreference::C: order = "c"; break;
    }
    for (char label : order) {
        if (auto K = try_case(label)) {
            ProportionalGain out{*K, std::string(1, label), theorem4_check(a, *K, C)};
            return out;
        }
    }
    return std::nullopt;
}

}  // namespace ddestab
