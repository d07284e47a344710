// Microbenchmarks for the hot paths: k-means restarts, LP solves of the three
// problem shapes, and model construction. Run with --benchmark_filter=... to
// select a subset.

#include <benchmark/benchmark.h>

#include <vector>

#include "repday/clustering.hpp"
#include "repday/lp.hpp"
#include "repday/pipeline.hpp"
#include "repday/resys.hpp"
#include "repday/synthgen.hpp"
#include "repday/timeseries.hpp"

namespace {

using namespace repday;

const Dataset& desk() {
  static const Dataset d = generate(desk_killer_config());
  return d;
}

const std::vector<Period>& normalized_days() {
  static const std::vector<Period> periods = [] {
    const auto [normalized, stats] = z_normalize(desk());
    (void)stats;
    std::vector<Period> out;
    for (int d = 0; d < normalized.n_days(); ++d) out.push_back(normalized.day(d));
    return out;
  }();
  return periods;
}

void BM_KMeansMultistart(benchmark::State& state) {
  KMeansConfig cfg;
  cfg.k = 5;
  cfg.n_init = static_cast<int>(state.range(0));
  cfg.seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(kmeans_multistart(normalized_days(), cfg));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_KMeansMultistart)->Arg(10)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

resys::RepresentativeSet representative_set(int k) {
  KMeansConfig cfg;
  cfg.k = k;
  cfg.n_init = 50;
  cfg.seed = 1;
  const ClusterResult cluster = kmeans_multistart(normalized_days(), cfg);
  return extremes::modify_feasibility_steps(cluster, desk(), std::vector<extremes::ExtremeDay>{});
}

void BM_BuildDesignProblem(benchmark::State& state) {
  const auto rep = representative_set(static_cast<int>(state.range(0)));
  const resys::TechnologyParams tp;
  const resys::GridLimit grid{5.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(resys::build_design_problem(rep, tp, grid, false));
  }
}
BENCHMARK(BM_BuildDesignProblem)->Arg(5)->Arg(20)->Unit(benchmark::kMicrosecond);

void BM_SolveDesignProblem(benchmark::State& state) {
  const auto rep = representative_set(static_cast<int>(state.range(0)));
  const resys::TechnologyParams tp;
  const resys::GridLimit grid{5.0};
  const auto problem = resys::build_design_problem(rep, tp, grid, false);
  for (auto _ : state) {
    benchmark::DoNotOptimize(lp::solve(problem.lp));
  }
}
BENCHMARK(BM_SolveDesignProblem)->Arg(5)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_SolveSingleDayOperations(benchmark::State& state) {
  const resys::TechnologyParams tp;
  const resys::GridLimit grid{5.0};
  resys::DesignVariables dv;
  dv.p_hp = 12.2;
  dv.p_eh = 2.0;
  dv.p_pv = 8.0;
  dv.p_bat = 5.0;
  dv.e_bat = 20.0;
  const auto problem = resys::build_operations_problem(dv, desk().day(11), tp, grid, true);
  for (auto _ : state) {
    benchmark::DoNotOptimize(lp::solve(problem.lp));
  }
}
BENCHMARK(BM_SolveSingleDayOperations)->Unit(benchmark::kMicrosecond);

void BM_FullAggregatedRun(benchmark::State& state) {
  pipeline::RunConfig cfg;
  cfg.k = 5;
  cfg.n_init = 50;
  cfg.seed = 1;
  cfg.method = pipeline::Method::Feasibility;
  cfg.grid_absolute = true;
  cfg.grid_fraction = 5.7176;  // kW
  cfg.with_reference = false;
  for (auto _ : state) {
    benchmark::DoNotOptimize(pipeline::run_aggregated(desk(), cfg));
  }
}
BENCHMARK(BM_FullAggregatedRun)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
