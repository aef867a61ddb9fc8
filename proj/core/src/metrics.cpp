#include "ddestab/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "ddestab/errors.hpp"

namespace ddestab {

namespace {

constexpr double kMinFitQuality = 0.5;

// Deviations this close to x* are indistinguishable from rounding of x*.
double noise_floor(double xstar) { return 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::fabs(xstar)); }

}  // namespace

std::optional<double> settling_time(const Trajectory& traj, double xstar, double tol) {
    if (traj.nodes.empty()) throw DomainError("empty trajectory");
    if (!(tol > 0.0)) throw DomainError("settling tolerance must be positive");
    const auto& nodes = traj.nodes;
    std::size_t i = nodes.size();
    while (i > 0 && std::fabs(nodes[i - 1].x - xstar) <= tol) --i;
    if (i == nodes.size()) return std::nullopt;
    return nodes[i].t;
}

double max_deviation(const Trajectory& traj, double xstar, double from_t) {
    if (traj.nodes.empty()) throw DomainError("empty trajectory");
    double m = 0.0;
    for (const auto& node : traj.nodes)
        if (node.t >= from_t) m = std::max(m, std::fabs(node.x - xstar));
    return m;
}

DecayFit decay_rate(const Trajectory& traj, double xstar, double t_lo, double t_hi) {
    if (!(t_lo < t_hi)) throw DomainError("decay_rate needs t_lo < t_hi");
    std::vector<double> t;
    std::vector<double> dev;
    for (const auto& node : traj.nodes) {
        if (node.t < t_lo || node.t > t_hi) continue;
        t.push_back(node.t);
        dev.push_back(std::fabs(node.x - xstar));
    }

    // Strict local maxima; a plateau counts once, at its leftmost point.
    const double floor = noise_floor(xstar);
    std::vector<double> peak_t;
    std::vector<double> peak_log;
    for (std::size_t i = 1; i + 1 < dev.size(); ++i) {
        if (!(dev[i] > dev[i - 1])) continue;
        std::size_t j = i;
        while (j + 1 < dev.size() && dev[j + 1] == dev[i]) ++j;
        if (j + 1 < dev.size() && dev[j + 1] < dev[i] && dev[i] > floor) {
            peak_t.push_back(t[i]);
            peak_log.push_back(std::log(dev[i]));
        }
        i = j;
    }
    const std::size_t n = peak_t.size();
    if (n < 3) throw InsufficientData("found " + std::to_string(n) + " deviation peaks, need at least 3");

    double mean_t = 0.0;
    double mean_y = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mean_t += peak_t[i];
        mean_y += peak_log[i];
    }
    mean_t /= static_cast<double>(n);
    mean_y /= static_cast<double>(n);
    double stt = 0.0;
    double sty = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dt = peak_t[i] - mean_t;
        const double dy = peak_log[i] - mean_y;
        stt += dt * dt;
        sty += dt * dy;
        syy += dy * dy;
    }
    const double slope = sty / stt;
    // A perfectly flat envelope is fitted exactly.
    const double r2 = syy > 0.0 ? (sty * sty) / (stt * syy) : 1.0;
    return {-slope, r2, static_cast<int>(n)};
}

ConvergenceReport assess_convergence(const Trajectory& traj, double xstar, const ConvergenceOptions& options) {
    ConvergenceReport r;
    r.settling_time = settling_time(traj, xstar, options.tol);
    r.settled = r.settling_time.has_value() && !traj.diverged;
    if (!r.settled) r.settling_time.reset();
    const double t_first = traj.nodes.front().t;
    const double t_last = traj.nodes.back().t;
    r.max_deviation_tail = max_deviation(traj, xstar, t_first + options.tail_fraction * (t_last - t_first));
    r.diverged = traj.diverged;
    r.truncation_time = traj.truncation_time;
    r.extrapolation_used = traj.extrapolation_used();
    if (t_last > t_first) {
        try {
            const DecayFit fit = decay_rate(traj, xstar, t_first, t_last);
            r.fit_quality = fit.fit_quality;
            if (fit.fit_quality >= kMinFitQuality) r.decay_rate = fit.sigma;
        } catch (const InsufficientData&) {
            r.fit_quality = 0.0;
        }
    }
    return r;
}

}  // namespace ddestab
