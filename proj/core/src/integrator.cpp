#include "ddestab/integrator.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <span>
#include <string>

#include "ddestab/errors.hpp"

namespace ddestab {

double hermite(double t_a, double y_a, double dy_a, double t_b, double y_b, double dy_b, double s) {
    const double h = t_b - t_a;
    const double th = (s - t_a) / h;
    const double th2 = th * th;
    const double th3 = th2 * th;
    const double h00 = 2.0 * th3 - 3.0 * th2 + 1.0;
    const double h10 = th3 - 2.0 * th2 + th;
    const double h01 = -2.0 * th3 + 3.0 * th2;
    const double h11 = th3 - th2;
    return h00 * y_a + h10 * h * dy_a + h01 * y_b + h11 * h * dy_b;
}

namespace {

StateSample hermite_on(const TrajectoryNode& a, const TrajectoryNode& b, double s) {
    return {hermite(a.t, a.x, a.v, b.t, b.x, b.v, s), hermite(a.t, a.v, a.acc, b.t, b.v, b.acc, s)};
}

// Interpolates completed nodes at t0 <= s <= nodes.back().t.
StateSample interpolate(std::span<const TrajectoryNode> nodes, double t0, double dt, double s) {
    const std::size_t last = nodes.size() - 1;
    if (last == 0) return {nodes[0].x, nodes[0].v};
    auto i = static_cast<std::size_t>(std::max(0.0, std::floor((s - t0) / dt)));
    i = std::min(i, last - 1);
    // Node times are t0 + i dt, so floor() can be off by one after rounding.
    while (i > 0 && nodes[i].t > s) --i;
    while (i + 1 < last && nodes[i + 1].t <= s) ++i;
    if (s == nodes[i].t) return {nodes[i].x, nodes[i].v};
    if (s == nodes[i + 1].t) return {nodes[i + 1].x, nodes[i + 1].v};
    return hermite_on(nodes[i], nodes[i + 1], s);
}

// Delayed lookups during integration. The state of the stage being
// evaluated is supplied so that zero-lag arguments read it directly.
class StageLookup {
public:
    StageLookup(const std::vector<TrajectoryNode>& nodes, const History& hist, double dt, Trajectory& stats)
        : nodes_(nodes), hist_(hist), dt_(dt), stats_(stats) {}

    StateSample operator()(double s, double stage_t, double stage_x, double stage_v) {
        assert(s <= stage_t);
        stats_.earliest_time = std::min(stats_.earliest_time, s);
        if (s == stage_t) return {stage_x, stage_v};
        if (s < hist_.t0) return {hist_.phi(s), hist_.psi(s)};
        const TrajectoryNode& back = nodes_.back();
        if (s <= back.t) return interpolate(nodes_, hist_.t0, dt_, s);

        ++stats_.extrapolated_lookups;
        if (nodes_.size() >= 2) return hermite_on(nodes_[nodes_.size() - 2], back, s);
        const double h = s - back.t;
        return {back.x + h * back.v + 0.5 * h * h * back.acc, back.v + h * back.acc};
    }

private:
    const std::vector<TrajectoryNode>& nodes_;
    const History& hist_;
    double dt_;
    Trajectory& stats_;
};

// Lookups into a finished trajectory.
class FinishedLookup {
public:
    explicit FinishedLookup(const Trajectory& traj) : traj_(traj) {}

    StateSample operator()(double s, double stage_t, double stage_x, double stage_v) const {
        if (s == stage_t) return {stage_x, stage_v};
        return sample(traj_, s);
    }

private:
    const Trajectory& traj_;
};

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

template <class Lookup>
double right_hand_side(const SecondOrderDDE& sys, const Controller& ctrl, Lookup& lookup, double t, double x,
                       double v) {
    double u = std::visit(overloaded{
                              [](const Controller::None&) { return 0.0; },
                              [&](const Controller::Damping& c) {
                                  return -c.delta * c.lambda * v - c.lambda * c.lambda * (x - c.xstar);
                              },
                              [&](const Controller::DelayedProportional& c) {
                                  return -c.b * (x - lookup(c.h(t), t, x, v).x);
                              },
                              [&](const Controller::ProportionalState& c) { return -c.K * (x - c.xstar); },
                          },
                          ctrl.variant);
    for (const auto& term : sys.damping_terms) u -= term.value(t, lookup(term.delay(t), t, x, v).v);
    for (const auto& term : sys.state_terms) u -= term.value(t, lookup(term.delay(t), t, x, v).x);
    return u;
}

bool out_of_bounds(double x, double v) {
    return !(std::fabs(x) <= kDivergenceLimit) || !(std::fabs(v) <= kDivergenceLimit);
}

}  // namespace

Trajectory integrate(const SecondOrderDDE& sys, const Controller& ctrl, const History& hist, double t_end, double dt) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("step size must be positive");
    if (!(t_end > hist.t0) || !std::isfinite(t_end)) throw DomainError("t_end must exceed the history start t0");

    Trajectory traj;
    traj.t0 = hist.t0;
    traj.dt = dt;
    traj.history = hist;
    traj.earliest_time = hist.t0 - sys.max_known_lag();

    const auto steps = static_cast<std::size_t>(std::ceil((t_end - hist.t0) / dt - 1e-9));
    traj.nodes.reserve(steps + 1);

    std::vector<TrajectoryNode>& nodes = traj.nodes;
    StageLookup lookup(nodes, hist, dt, traj);
    auto f = [&](double t, double x, double v) {
        ++traj.rhs_evaluations;
        return right_hand_side(sys, ctrl, lookup, t, x, v);
    };

    const double x0 = hist.x_at_start();
    const double v0 = hist.v_at_start();
    nodes.push_back({hist.t0, x0, v0, 0.0});
    nodes.back().acc = f(hist.t0, x0, v0);

    const double half = 0.5 * dt;
    for (std::size_t n = 0; n < steps; ++n) {
        const TrajectoryNode cur = nodes.back();
        const double t = cur.t;
        const double t_next = hist.t0 + static_cast<double>(n + 1) * dt;
        const double h = t_next - t;

        const double k1x = cur.v;
        const double k1v = cur.acc;
        const double k2x = cur.v + half * k1v;
        const double k2v = f(t + half, cur.x + half * k1x, k2x);
        const double k3x = cur.v + half * k2v;
        const double k3v = f(t + half, cur.x + half * k2x, k3x);
        const double k4x = cur.v + h * k3v;
        const double k4v = f(t_next, cur.x + h * k3x, k4x);

        const double x = cur.x + h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
        const double v = cur.v + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        if (out_of_bounds(x, v)) {
            traj.diverged = true;
            traj.truncation_time = t_next;
            break;
        }
        nodes.push_back({t_next, x, v, 0.0});
        const double acc = f(t_next, x, v);
        if (!std::isfinite(acc)) {
            nodes.pop_back();
            traj.diverged = true;
            traj.truncation_time = t_next;
            break;
        }
        nodes.back().acc = acc;
    }
    return traj;
}

StateSample sample(const Trajectory& traj, double t) {
    if (traj.nodes.empty()) throw DomainError("empty trajectory");
    if (!(t >= traj.earliest_time) || !(t <= traj.last_time()))
        throw DomainError("sample time " + std::to_string(t) + " outside [" + std::to_string(traj.earliest_time) +
                          ", " + std::to_string(traj.last_time()) + "]");
    if (t < traj.t0) return {traj.history.phi(t), traj.history.psi(t)};
    return interpolate(traj.nodes, traj.t0, traj.dt, t);
}

double evaluate_rhs(const SecondOrderDDE& sys, const Controller& ctrl, const Trajectory& traj, double t, double x,
                    double v) {
    FinishedLookup lookup(traj);
    return right_hand_side(sys, ctrl, lookup, t, x, v);
}

}  // namespace ddestab
