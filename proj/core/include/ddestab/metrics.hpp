#pragma once

// Convergence statistics of a trajectory towards an equilibrium x*.

#include <optional>

#include "ddestab/integrator.hpp"

namespace ddestab {

/// Smallest node time T with |x(t) - x*| <= tol at every node t >= T;
/// nullopt when the final node is outside the band.
std::optional<double> settling_time(const Trajectory& traj, double xstar, double tol);

/// Largest |x(t) - x*| over node times t >= from_t.
double max_deviation(const Trajectory& traj, double xstar, double from_t);

struct DecayFit {
    double sigma;        // |x - x*| ~ C exp(-sigma t)
    double fit_quality;  // R^2 of the log-peak regression
    int peaks;
};

/// Least-squares fit of log(peak) against time over the local maxima of
/// |x - x*| in [t_lo, t_hi]. Peaks at or below the round-off floor of x*
/// are ignored. Throws InsufficientData with fewer than 3 usable peaks.
DecayFit decay_rate(const Trajectory& traj, double xstar, double t_lo, double t_hi);

struct ConvergenceReport {
    bool settled = false;
    std::optional<double> settling_time;
    double max_deviation_tail = 0.0;
    std::optional<double> decay_rate;  // present only when fit_quality >= 0.5
    double fit_quality = 0.0;
    bool diverged = false;
    std::optional<double> truncation_time;
    bool extrapolation_used = false;
};

struct ConvergenceOptions {
    double tol = 1e-3;
    /// The tail statistic starts at this fraction of the horizon.
    double tail_fraction = 0.5;
};

/// Summary used by the command-line tool; the decay fit spans the whole
/// trajectory.
ConvergenceReport assess_convergence(const Trajectory& traj, double xstar, const ConvergenceOptions& options = {});

}  // namespace ddestab
