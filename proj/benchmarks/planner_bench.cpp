// Microbenchmarks for the belief filter and the planner. Run manually:
//   build/benchmarks/planner_bench [--benchmark_filter=...]

#include <benchmark/benchmark.h>

#include "beliefplan/bench.hpp"
#include "beliefplan/planner.hpp"

namespace {

using namespace beliefplan;

WorldModel make_world(std::size_t target_states, std::uint64_t seed) {
  const GridDims dims = realize_dims(target_states, 4);
  return compile_grid_world(
      random_world(dims.width, dims.height, dims.orientations, seed).spec);
}

BeliefState uniform_belief(std::size_t n) {
  return normalize(std::vector<double>(n, 1.0));
}

void BM_Predict(benchmark::State& state) {
  const WorldModel world = make_world(state.range(0), 11);
  const BeliefState b = uniform_belief(world.state_count);
  for (auto _ : state)
    benchmark::DoNotOptimize(predict(b, world.actuation[0]));
}
BENCHMARK(BM_Predict)->Arg(100)->Arg(1000)->Arg(10000);

void BM_Update(benchmark::State& state) {
  const WorldModel world = make_world(state.range(0), 11);
  const BeliefState b = uniform_belief(world.state_count);
  // "nothing detected" is the bulkiest observation branch
  for (auto _ : state)
    benchmark::DoNotOptimize(update(b, world.perception[0], 0));
}
BENCHMARK(BM_Update)->Arg(100)->Arg(1000)->Arg(10000);

void BM_NextNodes(benchmark::State& state) {
  const WorldModel world = make_world(state.range(0), 11);
  const BeliefState b = uniform_belief(world.state_count);
  for (auto _ : state)
    benchmark::DoNotOptimize(next_nodes(b, world, kZeroMassEpsilon, true));
}
BENCHMARK(BM_NextNodes)->Arg(100)->Arg(1000);

void BM_Plan(benchmark::State& state) {
  const WorldModel world = make_world(state.range(0), state.range(1));
  const BeliefState b = uniform_belief(world.state_count);
  PlannerConfig config;
  config.use_heuristic = state.range(2) != 0;
  for (auto _ : state) {
    const PlanResult r = plan(b, world, config);
    benchmark::DoNotOptimize(r.status);
  }
}
BENCHMARK(BM_Plan)
    ->Args({100, 3, 1})
    ->Args({100, 3, 0})
    ->Args({1000, 3, 1})
    ->Unit(benchmark::kMillisecond);

void BM_WarmReplan(benchmark::State& state) {
  const WorldModel world = make_world(1000, 5);
  const BeliefState b = uniform_belief(world.state_count);
  PlannerConfig config;
  for (auto _ : state) {
    state.PauseTiming();
    SearchCache cache;
    plan(b, world, config, &cache);  // cold call fills the cache
    const BeliefState shifted = predict(b, world.actuation[0]);
    state.ResumeTiming();
    const PlanResult r = plan(shifted, world, config, &cache);
    benchmark::DoNotOptimize(r.status);
  }
}
BENCHMARK(BM_WarmReplan)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
