#include <benchmark/benchmark.h>

#include "exhawkes/bandwidth.hpp"
#include "exhawkes/estimation.hpp"
#include "exhawkes/scenarios.hpp"
#include "exhawkes/simulate.hpp"

using namespace exhawkes;

namespace {

GroundTruth equilibrium(int horizon_days, double n_scale) {
    ScenarioParams p;
    p.horizon_days = horizon_days;
    p.n_scale = n_scale;
    p.branching = 0.95;
    p.immigration_days = horizon_days;
    return make_scenario("stationary-subcritical", p);
}

void BM_Simulate(benchmark::State& state) {
    const GroundTruth gt = equilibrium(static_cast<int>(state.range(0)), 5.0);
    std::uint64_t seed = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(simulate(gt, seed++));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Simulate)->Arg(300)->Arg(600)->Arg(1200)->Complexity();

void BM_EngineBuild(benchmark::State& state) {
    const GroundTruth gt = equilibrium(static_cast<int>(state.range(0)), 5.0);
    const SimOutput sim = simulate(gt, 7);
    const auto exposure = sim.infections.as_doubles();
    const EstimationConfig config{{0.1, 5.0}, 14, {}};
    for (auto _ : state) {
        LocalLinearEngine engine(exposure, config);
        benchmark::DoNotOptimize(engine.denominator(gt.horizon_days / 2, 7));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_EngineBuild)->Arg(300)->Arg(600)->Arg(1200)->Complexity();

void BM_FullInfoSurface(benchmark::State& state) {
    const GroundTruth gt = equilibrium(static_cast<int>(state.range(0)), 5.0);
    const SimOutput sim = simulate(gt, 7);
    const auto exposure = sim.infections.as_doubles();
    const EstimationConfig config{{0.1, 5.0}, 14, {}};
    const LocalLinearEngine engine(exposure, config);
    for (auto _ : state) {
        benchmark::DoNotOptimize(engine.ratio_surface(sim.infection_pairs));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_FullInfoSurface)->Arg(300)->Arg(600)->Arg(1200)->Complexity();

void BM_MissingLinkIteration(benchmark::State& state) {
    const GroundTruth gt = equilibrium(600, 5.0);
    const SimOutput sim = simulate(gt, 7);
    const auto exposure = sim.infections.as_doubles();
    MissingLinkConfig ml;
    ml.est = EstimationConfig{{0.1, 5.0}, 14, {}};
    ml.max_iter = static_cast<int>(state.range(0));
    ml.tol = 1e-300; // run exactly max_iter iterations
    for (auto _ : state) {
        benchmark::DoNotOptimize(estimate_missing_link(exposure, exposure, ml));
    }
}
BENCHMARK(BM_MissingLinkIteration)->Arg(1)->Arg(5)->Arg(20);

void BM_CvScore(benchmark::State& state) {
    const GroundTruth gt = equilibrium(600, 5.0);
    const SimOutput sim = simulate(gt, 7);
    const auto exposure = sim.infections.as_doubles();
    const EstimationConfig config{{0.1, 5.0}, 14, {}};
    for (auto _ : state) {
        benchmark::DoNotOptimize(cv_score(exposure, sim.infection_pairs, config));
    }
}
BENCHMARK(BM_CvScore);

} // namespace

BENCHMARK_MAIN();
