#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "mlmcfv/estimator.hpp"
#include "mlmcfv/mc.hpp"

namespace mlmcfv {

/// Convergence and work exponents: error ~ dx^{s/p} in L^p, moments of
/// order r (q = min(2, r)), work per solve ~ dx^{-w}.
struct RateParameters {
  double p = 1.0;
  double q = 2.0;
  double r = 2.0;
  double s = 0.5;
  double w = 2.0;

  double p_tilde() const noexcept { return p > q ? p : q; }
};

/// Work-minimising sample numbers for a tolerance eps. M_0 is
///   ((1 + dx0^{s/pt} sum_{l=1}^L 2^{l(w(q-1)/q - s/pt)}) / (eps - dx_L^{sq/p}))^{1/(q-1)}
/// and M_l = M_0 dx0^{s/pt} 2^{-l(s/pt + w/q)}, each rounded up; the
/// unrounded M_0 enters M_l. Throws InvalidTolerance when the denominator is
/// not positive.
std::vector<std::size_t> optimal_sample_numbers(std::size_t L, double dx0,
                                                const RateParameters& rates,
                                                double eps);

/// 2 * dx_L^{sq/p}.
double default_tolerance(std::size_t L, double dx0, const RateParameters& rates);

struct LevelPlan {
  std::size_t L = 0;
  double dx0 = 0.0625;
  std::vector<std::size_t> samples;  // M_0..M_L
  RateParameters rates;
  double eps = 0.0;

  double dx(std::size_t level) const;

  /// Optimal plan; eps defaults to default_tolerance().
  static LevelPlan optimal(std::size_t L, double dx0,
                           const RateParameters& rates = {},
                           std::optional<double> eps = std::nullopt);
  /// Same M at every level.
  static LevelPlan uniform(std::size_t L, double dx0, std::size_t M);

  void validate() const;
};

struct MlmcOptions {
  /// Use key level 0 for every term so all levels see the same draws. Only
  /// useful for checking the telescoping identity.
  bool share_draws_across_levels = false;
};

/// sum_{l=0}^{L} E_{M_l}[u_{dx_l} - u_{dx_{l-1}}] with u_{dx_{-1}} = 0. Both
/// resolutions in a difference use the same draw, keyed by (level, index).
EstimatorResult mlmc_estimate(const RandomDataModel& model,
                              const LevelPlan& plan, const SolverConfig& cfg,
                              const KeyBase& keys, const EstimatorContext& ctx,
                              const MlmcOptions& options = {});

/// V_L = sum_l E_{M_l}[(d_l - E_{M_l}[d_l])^2] cellwise.
GridFunction variance_estimate(const std::vector<MomentAccumulator>& levels,
                               const GridPtr& output_grid);

}  // namespace mlmcfv
