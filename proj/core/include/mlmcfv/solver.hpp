#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>

#include "mlmcfv/flux.hpp"
#include "mlmcfv/grid.hpp"

namespace mlmcfv {

struct SolverConfig {
  double lambda = 0.2;  // dt / dx
  double t_end = 0.2;
  std::shared_ptr<const FluxModel> flux;
};

struct Solution {
  GridFunction final;
  std::size_t steps = 0;
  std::uint64_t cell_updates = 0;  // steps * cells
};

/// Largest df/du over the coefficient values and data_range (512 samples).
/// Throws CflViolation when lambda times that maximum exceeds 1.
double cfl_check(const SolverConfig& cfg, const Coefficient& coeff,
                 Interval data_range);

/// Upwind finite volume stepper for u_t + f(k(x),u)_x = 0 on a periodic
/// domain. Cells P_i sitting just right of a coefficient interface are ghost
/// cells: after the interior update they are set to
/// (f^{(i)})^{-1}(f^{(i-1)}(u_{P_i-1})) using the new left neighbour, which
/// enforces the Rankine-Hugoniot condition discretely.
class FvmStepper {
 public:
  FvmStepper(const AlignedGrid& grid, const Coefficient& coeff,
             const FluxModel& flux);

  /// Advances u in place by dt.
  void advance(std::span<double> u, double dt);

  /// max_i |f^{(i)}(u_{P_i}) - f^{(i-1)}(u_{P_i-1})|.
  double interface_residual(std::span<const double> u) const;

 private:
  const AlignedGrid& grid_;
  const FluxModel& flux_;
  std::vector<double> k_;             // per subdomain
  std::vector<std::size_t> begin_;    // first cell of each subdomain
  std::vector<double> inv_width_;     // per cell
  std::vector<double> flux_values_;   // scratch
};

/// One step of size dt = lambda * dx_min.
GridFunction fvm_step(const GridFunction& state, const Coefficient& coeff,
                      const SolverConfig& cfg);

/// Called after every completed step with the step index (1-based), the
/// current time and the cell values.
using StepObserver =
    std::function<void(std::size_t, double, std::span<const double>)>;

/// Iterates fvm_step to t_end. The last step is shortened so the result sits
/// exactly at t_end.
Solution solve(const GridFunction& u0, const Coefficient& coeff,
               const SolverConfig& cfg, const StepObserver& observer = {});

/// Number of steps solve() takes for a grid with minimum width dx.
std::size_t step_count(double dx, const SolverConfig& cfg);

}  // namespace mlmcfv
