#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "mlmcfv/flux.hpp"

namespace mlmcfv {

/// Piecewise-constant spatial coefficient k: interfaces xi[0] < ... < xi[N-1]
/// inside the open domain and N+1 subdomain values.
struct Coefficient {
  std::vector<double> xi;
  std::vector<double> values;

  static Coefficient constant(double k) { return {{}, {k}}; }

  std::size_t interface_count() const noexcept { return xi.size(); }
  std::size_t subdomain_count() const noexcept { return values.size(); }

  /// Throws ConfigError when the invariants do not hold on `domain`.
  void validate(Interval domain) const;

  /// Value of k at x; at an interface the right-hand value is returned.
  double at(double x) const;
};

enum class Alignment {
  snap_uniform,       ///< uniform grid, interfaces moved to the nearest edge
  subdomain_uniform,  ///< interfaces kept, each subdomain meshed uniformly
};

Alignment parse_alignment(const std::string& name);
std::string to_string(Alignment a);

/// A 1-D mesh on [a,b]. Cell j spans [edges[j], edges[j+1]]. For every
/// coefficient interface i, edges[interface_cells[i]] is the interface.
class AlignedGrid {
 public:
  AlignedGrid(Interval domain, std::vector<double> edges,
              std::vector<std::size_t> interface_cells);

  static std::shared_ptr<const AlignedGrid> uniform(Interval domain,
                                                    std::size_t cells);

  Interval domain() const noexcept { return domain_; }
  std::size_t cells() const noexcept { return edges_.size() - 1; }
  std::span<const double> edges() const noexcept { return edges_; }
  std::span<const std::size_t> interface_cells() const noexcept {
    return interface_cells_;
  }
  double left(std::size_t j) const noexcept { return edges_[j]; }
  double right(std::size_t j) const noexcept { return edges_[j + 1]; }
  double width(std::size_t j) const noexcept {
    return edges_[j + 1] - edges_[j];
  }
  double center(std::size_t j) const noexcept {
    return 0.5 * (edges_[j] + edges_[j + 1]);
  }
  double dx_max() const noexcept { return dx_max_; }
  double dx_min() const noexcept { return dx_min_; }
  bool is_uniform() const noexcept { return uniform_; }

 private:
  Interval domain_;
  std::vector<double> edges_;
  std::vector<std::size_t> interface_cells_;
  double dx_max_ = 0.0;
  double dx_min_ = 0.0;
  bool uniform_ = false;
};

using GridPtr = std::shared_ptr<const AlignedGrid>;

struct AlignedMesh {
  GridPtr grid;
  Coefficient coeff;  // interfaces moved onto grid edges
};

/// Builds a mesh whose edges contain every interface of `coeff`. In
/// snap_uniform mode the grid has n = round((b-a)/dx_target) cells and each
/// interface moves to its nearest edge (by at most dx/2).
AlignedMesh build_aligned_grid(Interval domain, const Coefficient& coeff,
                               double dx_target,
                               Alignment mode = Alignment::snap_uniform);

/// Piecewise-constant function, one value per cell of a grid.
class GridFunction {
 public:
  GridFunction() = default;
  GridFunction(GridPtr grid, std::vector<double> values);
  GridFunction(GridPtr grid, double fill);

  const AlignedGrid& grid() const noexcept { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }
  std::vector<double>& storage() noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t j) const noexcept { return values_[j]; }
  double& operator[](std::size_t j) noexcept { return values_[j]; }

  double integral() const;
  double max_abs() const;

 private:
  GridPtr grid_;
  std::vector<double> values_;
};

/// Initial datum: either piecewise constant with explicit breakpoints (cell
/// averages computed exactly) or an arbitrary function (midpoint quadrature).
class InitialDatum {
 public:
  /// values.size() == breakpoints.size() + 1; value[i] holds between
  /// breakpoints i-1 and i.
  static InitialDatum piecewise_constant(std::vector<double> breakpoints,
                                         std::vector<double> values);
  static InitialDatum constant(double v) { return piecewise_constant({}, {v}); }
  static InitialDatum from_function(std::function<double(double)> fn,
                                    std::string description = "function");

  double operator()(double x) const;
  bool is_piecewise_constant() const noexcept { return !fn_; }
  std::span<const double> breakpoints() const noexcept { return breaks_; }
  std::span<const double> levels() const noexcept { return levels_; }
  std::string describe() const;
  double sup_norm() const;

 private:
  std::vector<double> breaks_;
  std::vector<double> levels_;
  std::function<double(double)> fn_;
  std::string description_;
};

GridFunction project_initial_datum(const InitialDatum& u0, GridPtr grid,
                                   std::size_t n_quad = 8);

/// Exact cell-average projection of a piecewise-constant function onto the
/// target grid via the merged breakpoint set. Conserves the integral.
GridFunction project_to_grid(const GridFunction& f, GridPtr target);

/// Accumulates scale * (L2 projection of f onto target) into `out`.
void project_add(const GridFunction& f, const AlignedGrid& target,
                 double scale, std::span<double> out);

/// Exact integral of |f - g| over the merged partition.
double l1_distance(const GridFunction& f, const GridFunction& g);

double total_variation(const GridFunction& f, bool periodic);

/// Decimal with 17 significant digits (round-trips binary64).
std::string format_double(double x);

/// Header "x,value", then one "center,value" row per cell.
void write_csv(std::ostream& os, const GridFunction& f);

}  // namespace mlmcfv
