#include <benchmark/benchmark.h>

#include <cmath>
#include <memory>
#include <vector>

#include "mlmcfv/estimator.hpp"
#include "mlmcfv/mlmc.hpp"
#include "mlmcfv/random_data.hpp"
#include "mlmcfv/solver.hpp"

namespace {

using namespace mlmcfv;

SolverConfig config() {
  SolverConfig cfg;
  cfg.flux = std::make_shared<const FluxModel>(
      std::make_shared<BuckleyLeverettFlux>(), Interval{0.7, 2.3},
      Interval{0.35, 0.9});
  return cfg;
}

void BM_FluxEvalMany(benchmark::State& state) {
  BuckleyLeverettFlux f;
  std::vector<double> u(static_cast<std::size_t>(state.range(0)));
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = 0.4 + 0.4 * i / u.size();
  std::vector<double> out(u.size());
  for (auto _ : state) {
    f.eval_many(1.5, u, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FluxEvalMany)->Arg(1024)->Arg(8192);

void BM_Invert(benchmark::State& state) {
  const auto cfg = config();
  double p = cfg.flux->eval(1.0, 0.61);
  for (auto _ : state) benchmark::DoNotOptimize(cfg.flux->invert(2.0, p));
}
BENCHMARK(BM_Invert);

// One Experiment-1 sample at dx = 2^-e; reports cell updates per second.
void BM_SolveSample(benchmark::State& state) {
  const auto cfg = config();
  const auto s = RandomDataModel::interface_position().realize(
      std::vector<double>{-0.3, 1.0, 2.0});
  const double dx = std::ldexp(1.0, -static_cast<int>(state.range(0)));
  std::uint64_t work = 0;
  for (auto _ : state) {
    const auto sol = solve_sample(s, {-1, 1}, dx, cfg, Alignment::snap_uniform);
    work += sol.cell_updates;
    benchmark::DoNotOptimize(sol.final.values().data());
  }
  state.counters["cell_updates_per_s"] =
      benchmark::Counter(static_cast<double>(work), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_SolveSample)->DenseRange(6, 10, 2)->Unit(benchmark::kMillisecond);

void BM_ProjectToOutputGrid(benchmark::State& state) {
  const auto src = AlignedGrid::uniform({-1, 1}, static_cast<std::size_t>(state.range(0)));
  const GridFunction f(src, 0.5);
  const auto out_grid = default_output_grid({-1, 1});
  std::vector<double> acc(out_grid->cells());
  for (auto _ : state) {
    project_add(f, *out_grid, 1.0, acc);
    benchmark::DoNotOptimize(acc.data());
  }
}
BENCHMARK(BM_ProjectToOutputGrid)->Arg(32)->Arg(1024)->Arg(4096);

void BM_OptimalSampleNumbers(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(
        optimal_sample_numbers(7, 1.0 / 16, {}, 2.0 * std::ldexp(1.0 / 16, -7)));
}
BENCHMARK(BM_OptimalSampleNumbers);

void BM_MlmcLevel3(benchmark::State& state) {
  const auto cfg = config();
  EstimatorContext ctx;
  ctx.output_grid = default_output_grid({-1, 1});
  ctx.exec.threads = 1;
  const auto plan = LevelPlan::optimal(3, 1.0 / 16);
  const auto model = RandomDataModel::interface_position();
  for (auto _ : state) {
    auto r = mlmc_estimate(model, plan, cfg, {1, 0}, ctx);
    benchmark::DoNotOptimize(r.mean.values().data());
  }
}
BENCHMARK(BM_MlmcLevel3)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
