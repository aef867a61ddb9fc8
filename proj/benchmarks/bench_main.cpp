#include <benchmark/benchmark.h>

#include <numbers>

#include "ddestab/design.hpp"
#include "ddestab/expr.hpp"
#include "ddestab/integrator.hpp"
#include "ddestab/model.hpp"

using namespace ddestab;

static void BM_IntegrateSunflowerControlled(benchmark::State& state) {
    const auto m = builtin("sunflower");
    const auto ctrl = Controller::damping(std::numbers::sqrt2, 4.0, m.system.equilibrium);
    const double t_end = static_cast<double>(state.range(0));
    for (auto _ : state) {
        auto traj = integrate(m.system, ctrl, m.history, t_end);
        benchmark::DoNotOptimize(traj.nodes.back().x);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(t_end / kDefaultStep));
}
BENCHMARK(BM_IntegrateSunflowerControlled)->Arg(60)->Arg(200);

static void BM_IntegrateExpressionCoefficients(benchmark::State& state) {
    const auto m = builtin("example1", {{"tau_g", 0.5}, {"tau_h", 1.0}});
    for (auto _ : state) {
        auto traj = integrate(m.system, Controller::damping(1.0, 3.0), m.history, 60.0);
        benchmark::DoNotOptimize(traj.nodes.back().x);
    }
}
BENCHMARK(BM_IntegrateExpressionCoefficients);

static void BM_OptimalDelta(benchmark::State& state) {
    double alpha = 0.5;
    for (auto _ : state) {
        auto opt = optimal_delta(alpha, 2.0, 0.01);
        benchmark::DoNotOptimize(opt.mu);
        alpha = alpha < 5.0 ? alpha + 0.01 : 0.5;
    }
}
BENCHMARK(BM_OptimalDelta);

static void BM_MuOfDelta(benchmark::State& state) {
    double delta = 0.1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(mu_of_delta(delta, 1.0, 2.0));
        delta = delta < 1.9 ? delta + 1e-4 : 0.1;
    }
}
BENCHMARK(BM_MuOfDelta);

static void BM_ExpressionEval(benchmark::State& state) {
    const auto f = ScalarFn::parse("exp(-0.1*t)*sin(3*t) + abs(cos(t))^2/(1 + t^2)");
    double t = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(f(t));
        t += 1e-3;
    }
}
BENCHMARK(BM_ExpressionEval);

static void BM_ExpressionParse(benchmark::State& state) {
    for (auto _ : state) {
        auto f = ScalarFn::parse("exp(-0.1*t)*sin(3*t) + abs(cos(t))^2/(1 + t^2)");
        benchmark::DoNotOptimize(f);
    }
}
BENCHMARK(BM_ExpressionParse);

static void BM_EnvelopeBounds(benchmark::State& state) {
    const auto m = builtin("example1");
    for (auto _ : state) {
        auto b = envelope_bounds(m.system, 0.0, 20.0 * std::numbers::pi, 20001);
        benchmark::DoNotOptimize(b.alpha);
    }
}
BENCHMARK(BM_EnvelopeBounds);
BENCHMARK_MAIN();
