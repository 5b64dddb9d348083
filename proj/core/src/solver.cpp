#include "mlmcfv/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mlmcfv/errors.hpp"

namespace mlmcfv {

double cfl_check(const SolverConfig& cfg, const Coefficient& coeff,
                 Interval data_range) {
  if (!cfg.flux) throw ConfigError("solver configuration has no flux");
  constexpr std::size_t kSamples = 512;
  double max_speed = 0.0;
  for (double k : coeff.values) {
    for (std::size_t i = 0; i < kSamples; ++i) {
      const double u = data_range.lo + data_range.width() *
                                           static_cast<double>(i) /
                                           static_cast<double>(kSamples - 1);
      max_speed = std::max(max_speed, std::abs(cfg.flux->derivative(k, u)));
    }
  }
  if (cfg.lambda * max_speed > 1.0) {
    std::ostringstream os;
    os << "CFL violated: lambda * max|f_u| = " << cfg.lambda << " * "
       << max_speed << " = " << cfg.lambda * max_speed << " > 1";
    throw CflViolation(os.str(), max_speed);
  }
  return max_speed;
}

namespace {

void require_aligned(const AlignedGrid& grid, const Coefficient& coeff) {
  const auto cells = grid.interface_cells();
  if (cells.size() != coeff.xi.size() ||
      coeff.values.size() != coeff.xi.size() + 1)
    throw ConfigError("coefficient does not match the grid's interfaces");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (grid.edges()[cells[i]] != coeff.xi[i]) {
      std::ostringstream os;
      os.precision(17);
      os << "interface " << coeff.xi[i] << " is not on grid edge "
         << grid.edges()[cells[i]] << "; build the grid with "
         << "build_aligned_grid first";
      throw ConfigError(os.str());
    }
  }
}

}  // namespace

FvmStepper::FvmStepper(const AlignedGrid& grid, const Coefficient& coeff,
                       const FluxModel& flux)
    : grid_(grid),
      flux_(flux),
      k_(coeff.values),
      flux_values_(grid.cells()) {
  require_aligned(grid, coeff);
  begin_.push_back(0);
  for (std::size_t p : grid.interface_cells()) begin_.push_back(p);
  if (!grid.is_uniform()) {
    inv_width_.resize(grid.cells());
    for (std::size_t j = 0; j < grid.cells(); ++j)
      inv_width_[j] = 1.0 / grid.width(j);
  }
}

void FvmStepper::advance(std::span<double> u, double dt) {
  const std::size_t n = u.size();
  const std::size_t subdomains = k_.size();
  double* const F = flux_values_.data();

  // Periodic upwind flux into cell 0, evaluated with the subdomain-0 flux.
  const double wrap = flux_.eval(k_[0], u[n - 1]);

  for (std::size_t s = 0; s < subdomains; ++s) {
    const std::size_t b = begin_[s];
    const std::size_t e = (s + 1 < subdomains) ? begin_[s + 1] : n;
    flux_.eval_many(k_[s], u.subspan(b, e - b), {F + b, e - b});
  }

  if (inv_width_.empty()) {
    const double ratio = dt / grid_.dx_min();
    u[0] -= ratio * (F[0] - wrap);
    for (std::size_t s = 0; s < subdomains; ++s) {
      const std::size_t e = (s + 1 < subdomains) ? begin_[s + 1] : n;
      for (std::size_t j = begin_[s] + 1; j < e; ++j)
        u[j] -= ratio * (F[j] - F[j - 1]);
    }
  } else {
    const double* const iw = inv_width_.data();
    u[0] -= dt * iw[0] * (F[0] - wrap);
    for (std::size_t s = 0; s < subdomains; ++s) {
      const std::size_t e = (s + 1 < subdomains) ? begin_[s + 1] : n;
      for (std::size_t j = begin_[s] + 1; j < e; ++j)
        u[j] -= dt * iw[j] * (F[j] - F[j - 1]);
    }
  }

  // Ghost cells, left to right, from the already-updated left neighbour.
  for (std::size_t s = 1; s < subdomains; ++s) {
    const std::size_t p = begin_[s];
    u[p] = flux_.invert(k_[s], flux_.eval(k_[s - 1], u[p - 1]));
  }
}

double FvmStepper::interface_residual(std::span<const double> u) const {
  double r = 0.0;
  for (std::size_t s = 1; s < k_.size(); ++s) {
    const std::size_t p = begin_[s];
    r = std::max(r, std::abs(flux_.eval(k_[s], u[p]) -
                             flux_.eval(k_[s - 1], u[p - 1])));
  }
  return r;
}

GridFunction fvm_step(const GridFunction& state, const Coefficient& coeff,
                      const SolverConfig& cfg) {
  if (!cfg.flux) throw ConfigError("solver configuration has no flux");
  FvmStepper stepper(state.grid(), coeff, *cfg.flux);
  GridFunction next = state;
  stepper.advance(next.values(), cfg.lambda * state.grid().dx_min());
  return next;
}

std::size_t step_count(double dx, const SolverConfig& cfg) {
  if (cfg.t_end <= 0.0) return 0;
  if (!(cfg.lambda > 0.0))
    throw ConfigError("lambda must be positive for a nonzero final time");
  const double dt = cfg.lambda * dx;
  // Relative slack so T/dt landing on an integer does not add a sliver step.
  return static_cast<std::size_t>(std::ceil(cfg.t_end / dt * (1.0 - 1e-12)));
}

Solution solve(const GridFunction& u0, const Coefficient& coeff,
               const SolverConfig& cfg, const StepObserver& observer) {
  if (!cfg.flux) throw ConfigError("solver configuration has no flux");
  if (cfg.t_end < 0.0) throw ConfigError("t_end must be nonnegative");
  const AlignedGrid& grid = u0.grid();
  FvmStepper stepper(grid, coeff, *cfg.flux);

  Solution sol{u0, 0, 0};
  const std::size_t steps = step_count(grid.dx_min(), cfg);
  const double dt = cfg.lambda * grid.dx_min();
  auto u = sol.final.values();
  for (std::size_t n = 0; n < steps; ++n) {
    const bool last = (n + 1 == steps);
    const double h = last ? cfg.t_end - static_cast<double>(n) * dt : dt;
    stepper.advance(u, h);
    if (observer)
      observer(n + 1, last ? cfg.t_end : static_cast<double>(n + 1) * dt, u);
  }
  sol.steps = steps;
  sol.cell_updates = static_cast<std::uint64_t>(steps) * grid.cells();
  return sol;
}

}  // namespace mlmcfv
