#pragma once

// Method-of-steps solver for controlled second-order delay equations.
//
// The equation is integrated as y = (x, v), y' = (v, u - sum f_k - sum s_k)
// with classic fixed-step RK4. Delayed values come from the initial history
// for times below t0 and from cubic Hermite interpolation of the computed
// nodes otherwise: position uses (x, v) as endpoint values/slopes, velocity
// uses (v, acc). A lookup inside the step being computed (lag shorter than a
// step) extrapolates the last completed step's Hermite cubic.

#include <cstddef>
#include <optional>
#include <vector>

#include "ddestab/model.hpp"

namespace ddestab {

/// Default fixed step size.
inline constexpr double kDefaultStep = 0.005;
/// |x| or |v| above this stops integration with the divergence flag set.
inline constexpr double kDivergenceLimit = 1e12;

struct TrajectoryNode {
    double t;
    double x;
    double v;
    double acc;  // right-hand side for v evaluated at this node
};

struct Trajectory {
    double t0 = 0.0;
    double dt = 0.0;
    std::vector<TrajectoryNode> nodes;
    History history;

    /// Smallest time a lookup may request: t0 minus the largest lag used.
    double earliest_time = 0.0;

    bool diverged = false;
    std::optional<double> truncation_time;

    std::size_t rhs_evaluations = 0;
    std::size_t extrapolated_lookups = 0;

    bool extrapolation_used() const noexcept { return extrapolated_lookups > 0; }
    double last_time() const { return nodes.back().t; }
};

/// Integrates from hist.t0 to t_end with step dt. Node i lies at t0 + i dt;
/// the last node is the first one at or beyond t_end.
/// Throws DomainError for dt <= 0 or t_end <= t0, DelayViolation for g(t) > t,
/// EvalError from coefficient evaluation.
Trajectory integrate(const SecondOrderDDE& sys, const Controller& ctrl, const History& hist, double t_end,
                     double dt = kDefaultStep);

struct StateSample {
    double x;
    double v;
};

/// Dense output: exact node values at node times, Hermite in between,
/// history below t0. Throws DomainError outside [earliest_time, last_time].
StateSample sample(const Trajectory& traj, double t);

/// Right-hand side u - sum f_k - sum s_k at (t, x, v) with delayed values read
/// from a finished trajectory. Used for post hoc consistency checks.
double evaluate_rhs(const SecondOrderDDE& sys, const Controller& ctrl, const Trajectory& traj, double t, double x,
                    double v);

/// Cubic Hermite interpolant on [t_a, t_b] at s (s may lie outside).
double hermite(double t_a, double y_a, double dy_a, double t_b, double y_b, double dy_b, double s);

}  // namespace ddestab
