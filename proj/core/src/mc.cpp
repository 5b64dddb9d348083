#include "mlmcfv/mc.hpp"

#include <chrono>

#include "sampling.hpp"

namespace mlmcfv {

EstimatorResult mc_estimate(const RandomDataModel& model, double dx,
                            std::size_t samples, const SolverConfig& cfg,
                            const KeyBase& keys, const EstimatorContext& ctx) {
  if (samples == 0) throw ConfigError("Monte Carlo needs at least one sample");
  if (!ctx.output_grid) throw ConfigError("estimator context has no output grid");
  const auto t0 = std::chrono::steady_clock::now();

  EstimatorResult result;
  result.levels.emplace_back(ctx.output_grid->cells());
  result.cell_updates = detail::accumulate_term(
      samples, ctx, result.levels.front(),
      [&](std::size_t i, std::vector<double>& out) -> std::uint64_t {
        const SampleKey key{keys.master_seed, 0, i, keys.replica};
        try {
          const Sample s = draw_sample(model, key);
          const Solution sol =
              solve_sample(s, model.domain(), dx, cfg, ctx.alignment);
          project_add(sol.final, *ctx.output_grid, 1.0, out);
          return sol.cell_updates;
        } catch (const NumericalError& e) {
          throw SampleError(key, e.what());
        }
      });
  finalize_result(result, ctx.output_grid);
  result.runtime_s = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - t0)
                         .count();
  return result;
}

}  // namespace mlmcfv
