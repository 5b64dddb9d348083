#include "mlmcfv/mlmc.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "sampling.hpp"

namespace mlmcfv {

namespace {

void check_rates(const RateParameters& r) {
  if (!(r.q > 1.0)) throw ConfigError("rate parameter q must exceed 1");
  if (!(r.p > 0.0) || !(r.s > 0.0) || !(r.w > 0.0))
    throw ConfigError("rate parameters p, s, w must be positive");
}

}  // namespace

double default_tolerance(std::size_t L, double dx0, const RateParameters& r) {
  const double dxL = std::ldexp(dx0, -static_cast<int>(L));
  return 2.0 * std::pow(dxL, r.s * r.q / r.p);
}

std::vector<std::size_t> optimal_sample_numbers(std::size_t L, double dx0,
                                                const RateParameters& r,
                                                double eps) {
  check_rates(r);
  if (!(dx0 > 0.0)) throw ConfigError("dx0 must be positive");
  const double pt = r.p_tilde();
  const double dxL = std::ldexp(dx0, -static_cast<int>(L));
  const double denom = eps - std::pow(dxL, r.s * r.q / r.p);
  if (!(denom > 0.0)) {
    std::ostringstream os;
    os.precision(17);
    os << "tolerance eps=" << eps << " must exceed dx_L^{sq/p}="
       << std::pow(dxL, r.s * r.q / r.p);
    throw InvalidTolerance(os.str());
  }
  const double coarse = std::pow(dx0, r.s / pt);
  double series = 0.0;
  for (std::size_t l = 1; l <= L; ++l)
    series += std::exp2(static_cast<double>(l) *
                        (r.w * (r.q - 1.0) / r.q - r.s / pt));
  const double m0 = std::pow((1.0 + coarse * series) / denom, 1.0 / (r.q - 1.0));

  std::vector<std::size_t> M(L + 1);
  M[0] = static_cast<std::size_t>(std::ceil(m0));
  for (std::size_t l = 1; l <= L; ++l) {
    const double ml =
        m0 * coarse * std::exp2(-static_cast<double>(l) * (r.s / pt + r.w / r.q));
    M[l] = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(ml)));
  }
  return M;
}

double LevelPlan::dx(std::size_t level) const {
  return std::ldexp(dx0, -static_cast<int>(level));
}

LevelPlan LevelPlan::optimal(std::size_t L, double dx0,
                             const RateParameters& rates,
                             std::optional<double> eps) {
  LevelPlan plan;
  plan.L = L;
  plan.dx0 = dx0;
  plan.rates = rates;
  plan.eps = eps.value_or(default_tolerance(L, dx0, rates));
  plan.samples = optimal_sample_numbers(L, dx0, rates, plan.eps);
  return plan;
}

LevelPlan LevelPlan::uniform(std::size_t L, double dx0, std::size_t M) {
  LevelPlan plan;
  plan.L = L;
  plan.dx0 = dx0;
  plan.eps = default_tolerance(L, dx0, plan.rates);
  plan.samples.assign(L + 1, M);
  return plan;
}

void LevelPlan::validate() const {
  if (!(dx0 > 0.0)) throw ConfigError("level plan: dx0 must be positive");
  if (samples.size() != L + 1)
    throw ConfigError("level plan: need L+1 sample counts");
  for (std::size_t m : samples)
    if (m == 0) throw ConfigError("level plan: every M_l must be >= 1");
}

EstimatorResult mlmc_estimate(const RandomDataModel& model,
                              const LevelPlan& plan, const SolverConfig& cfg,
                              const KeyBase& keys, const EstimatorContext& ctx,
                              const MlmcOptions& options) {
  plan.validate();
  if (!ctx.output_grid) throw ConfigError("estimator context has no output grid");
  const auto t0 = std::chrono::steady_clock::now();

  EstimatorResult result;
  for (std::size_t l = 0; l <= plan.L; ++l) {
    result.levels.emplace_back(ctx.output_grid->cells());
    const double fine = plan.dx(l);
    const double coarse = l > 0 ? plan.dx(l - 1) : 0.0;
    const auto key_level = static_cast<std::uint32_t>(
        options.share_draws_across_levels ? 0 : l);
    result.cell_updates += detail::accumulate_term(
        plan.samples[l], ctx, result.levels.back(),
        [&](std::size_t i, std::vector<double>& out) -> std::uint64_t {
          const SampleKey key{keys.master_seed, key_level, i, keys.replica};
          try {
            const Sample s = draw_sample(model, key);
            const Solution uf =
                solve_sample(s, model.domain(), fine, cfg, ctx.alignment);
            project_add(uf.final, *ctx.output_grid, 1.0, out);
            std::uint64_t work = uf.cell_updates;
            if (l > 0) {
              const Solution uc =
                  solve_sample(s, model.domain(), coarse, cfg, ctx.alignment);
              project_add(uc.final, *ctx.output_grid, -1.0, out);
              work += uc.cell_updates;
            }
            return work;
          } catch (const NumericalError& e) {
            throw SampleError(key, e.what());
          }
        });
  }
  finalize_result(result, ctx.output_grid);
  result.runtime_s = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - t0)
                         .count();
  return result;
}

}  // namespace mlmcfv
