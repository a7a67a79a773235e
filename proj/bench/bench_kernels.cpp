#include <benchmark/benchmark.h>

#include "reachnav/cost.hpp"
#include "reachnav/hj_solver.hpp"
#include "reachnav/planner.hpp"
#include "reachnav/suite.hpp"

using namespace reachnav;

namespace {

const Task& scene() {
  static const Task t = [] {
    SuiteConfig sc;
    sc.maps = 1;
    sc.starts_per_map = 1;
    sc.map.width = 30;
    sc.map.height = 24;
    return make_suite(sc).front();
  }();
  return t;
}

// state.range(0): 0 serial Gauss-Seidel, 1 OpenMP hyperplane sweep.
void BM_SolveTtr(benchmark::State& state) {
  const Task& t = scene();
  const DynamicsBounds b;
  const Grid4D g = grid_for_map(t.map, b, 7, 24);
  SolveConfig cfg;
  cfg.backend = state.range(0) ? SweepBackend::kParallel : SweepBackend::kSerial;
  SolveReport report;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_ttr(g, b, t.goal, t.map, cfg, &report));
  }
  state.counters["cycles"] = report.cycles;
  state.counters["nodes"] = static_cast<double>(g.size());
}
BENCHMARK(BM_SolveTtr)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_SolveTtc(benchmark::State& state) {
  const Task& t = scene();
  const DynamicsBounds b;
  const Grid4D g = grid_for_map(t.map, b, 7, 24);
  SolveConfig cfg;
  cfg.backend = state.range(0) ? SweepBackend::kParallel : SweepBackend::kSerial;
  for (auto _ : state) benchmark::DoNotOptimize(solve_ttc(g, b, t.map, cfg));
}
BENCHMARK(BM_SolveTtc)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

// state.range(0): 0 serial candidate scoring, 1 OpenMP.
void BM_Plan(benchmark::State& state) {
  const Task& t = scene();
  const DynamicsBounds b;
  const Grid4D g = grid_for_map(t.map, b, 7, 24);
  static const CostMap cost = reachability_cost(solve_ttr(g, b, t.goal, t.map, SolveConfig{}),
                                                solve_ttc(g, b, t.map, SolveConfig{}),
                                                CostParams{}.alpha, CostParams{}.ttc_cap);
  PlannerConfig pc;
  pc.parallel = state.range(0) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(plan(t.start, cost, pc, b));
}
BENCHMARK(BM_Plan)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
