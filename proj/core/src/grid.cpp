#include "mlmcfv/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>

#include "mlmcfv/errors.hpp"

namespace mlmcfv {

void Coefficient::validate(Interval domain) const {
  if (values.size() != xi.size() + 1) {
    std::ostringstream os;
    os << "coefficient has " << xi.size() << " interfaces but "
       << values.size() << " subdomain values (expected " << xi.size() + 1
       << ")";
    throw ConfigError(os.str());
  }
  for (std::size_t i = 0; i < xi.size(); ++i) {
    if (!(xi[i] > domain.lo && xi[i] < domain.hi)) {
      std::ostringstream os;
      os << "coefficient interface " << xi[i] << " not inside ("
         << domain.lo << ", " << domain.hi << ")";
      throw ConfigError(os.str());
    }
    if (i > 0 && !(xi[i] > xi[i - 1]))
      throw ConfigError("coefficient interfaces must be strictly increasing");
  }
}

double Coefficient::at(double x) const {
  const auto it = std::upper_bound(xi.begin(), xi.end(), x);
  return values[static_cast<std::size_t>(it - xi.begin())];
}

Alignment parse_alignment(const std::string& name) {
  if (name == "snap" || name == "snap_uniform") return Alignment::snap_uniform;
  if (name == "subdomain" || name == "subdomain_uniform")
    return Alignment::subdomain_uniform;
  throw ConfigError("unknown alignment '" + name +
                    "' (expected snap_uniform or subdomain_uniform)");
}

std::string to_string(Alignment a) {
  return a == Alignment::snap_uniform ? "snap_uniform" : "subdomain_uniform";
}

AlignedGrid::AlignedGrid(Interval domain, std::vector<double> edges,
                         std::vector<std::size_t> interface_cells)
    : domain_(domain),
      edges_(std::move(edges)),
      interface_cells_(std::move(interface_cells)) {
  if (edges_.size() < 2) throw ConfigError("grid needs at least one cell");
  if (edges_.front() != domain_.lo || edges_.back() != domain_.hi)
    throw ConfigError("grid edges must start and end on the domain bounds");
  dx_min_ = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j + 1 < edges_.size(); ++j) {
    const double w = edges_[j + 1] - edges_[j];
    if (!(w > 0.0)) throw ConfigError("grid cell widths must be positive");
    dx_min_ = std::min(dx_min_, w);
    dx_max_ = std::max(dx_max_, w);
  }
  uniform_ = (dx_max_ - dx_min_) <= 1e-12 * dx_max_;
  for (std::size_t i = 0; i < interface_cells_.size(); ++i) {
    const std::size_t p = interface_cells_[i];
    if (p == 0 || p >= cells())
      throw ConfigError("interface cell index out of range");
    if (i > 0 && p <= interface_cells_[i - 1])
      throw ConfigError("interface cells must be strictly increasing");
  }
}

GridPtr AlignedGrid::uniform(Interval domain, std::size_t cells) {
  if (cells == 0) throw ConfigError("uniform grid needs at least one cell");
  std::vector<double> edges(cells + 1);
  const double h = domain.width() / static_cast<double>(cells);
  for (std::size_t j = 0; j < cells; ++j)
    edges[j] = domain.lo + static_cast<double>(j) * h;
  edges[cells] = domain.hi;
  return std::make_shared<const AlignedGrid>(domain, std::move(edges),
                                             std::vector<std::size_t>{});
}

AlignedMesh build_aligned_grid(Interval domain, const Coefficient& coeff,
                               double dx_target, Alignment mode) {
  if (!(dx_target > 0.0)) throw ConfigError("dx_target must be positive");
  coeff.validate(domain);
  const double len = domain.width();

  if (mode == Alignment::snap_uniform) {
    const auto n = static_cast<std::size_t>(
        std::max(1.0L, std::round(static_cast<long double>(len) / dx_target)));
    const double h = len / static_cast<double>(n);
    std::vector<double> edges(n + 1);
    for (std::size_t j = 0; j < n; ++j)
      edges[j] = domain.lo + static_cast<double>(j) * h;
    edges[n] = domain.hi;

    std::vector<std::size_t> cells;
    Coefficient snapped = coeff;
    cells.reserve(coeff.xi.size());
    for (std::size_t i = 0; i < coeff.xi.size(); ++i) {
      const double pos = (coeff.xi[i] - domain.lo) / h;
      const auto p = static_cast<long long>(std::llround(pos));
      if (p <= 0 || p >= static_cast<long long>(n) ||
          (!cells.empty() && static_cast<std::size_t>(p) <= cells.back())) {
        std::ostringstream os;
        os << "interface " << coeff.xi[i] << " snaps onto edge " << p
           << " of an " << n << "-cell grid, which leaves an empty subdomain";
        throw DegenerateSubdomain(os.str());
      }
      cells.push_back(static_cast<std::size_t>(p));
      snapped.xi[i] = edges[static_cast<std::size_t>(p)];
    }
    return {std::make_shared<const AlignedGrid>(domain, std::move(edges),
                                                std::move(cells)),
            std::move(snapped)};
  }

  std::vector<double> bounds;
  bounds.reserve(coeff.xi.size() + 2);
  bounds.push_back(domain.lo);
  bounds.insert(bounds.end(), coeff.xi.begin(), coeff.xi.end());
  bounds.push_back(domain.hi);
  std::vector<double> edges{domain.lo};
  std::vector<std::size_t> cells;
  for (std::size_t s = 0; s + 1 < bounds.size(); ++s) {
    const double a = bounds[s];
    const double b = bounds[s + 1];
    const auto n = static_cast<std::size_t>(
        std::max(1.0, std::ceil((b - a) / dx_target - 1e-9)));
    const double h = (b - a) / static_cast<double>(n);
    if (s > 0) cells.push_back(edges.size() - 1);
    for (std::size_t j = 1; j < n; ++j)
      edges.push_back(a + static_cast<double>(j) * h);
    edges.push_back(b);
  }
  return {std::make_shared<const AlignedGrid>(domain, std::move(edges),
                                              std::move(cells)),
          coeff};
}

GridFunction::GridFunction(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_ || values_.size() != grid_->cells())
    throw ConfigError("grid function size does not match its grid");
}

GridFunction::GridFunction(GridPtr grid, double fill)
    : grid_(std::move(grid)), values_(grid_ ? grid_->cells() : 0, fill) {
  if (!grid_) throw ConfigError("grid function needs a grid");
}

double GridFunction::integral() const {
  double s = 0.0;
  for (std::size_t j = 0; j < values_.size(); ++j)
    s += values_[j] * grid_->width(j);
  return s;
}

double GridFunction::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

InitialDatum InitialDatum::piecewise_constant(std::vector<double> breakpoints,
                                              std::vector<double> values) {
  if (values.size() != breakpoints.size() + 1)
    throw ConfigError("piecewise-constant datum needs breakpoints+1 values");
  if (!std::is_sorted(breakpoints.begin(), breakpoints.end()))
    throw ConfigError("datum breakpoints must be sorted");
  InitialDatum d;
  d.breaks_ = std::move(breakpoints);
  d.levels_ = std::move(values);
  return d;
}

InitialDatum InitialDatum::from_function(std::function<double(double)> fn,
                                         std::string description) {
  InitialDatum d;
  d.fn_ = std::move(fn);
  d.description_ = std::move(description);
  return d;
}

double InitialDatum::operator()(double x) const {
  if (fn_) return fn_(x);
  const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
  return levels_[static_cast<std::size_t>(it - breaks_.begin())];
}

std::string InitialDatum::describe() const {
  if (fn_) return description_;
  std::ostringstream os;
  os << "piecewise_constant(";
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    os << format_double(levels_[i]);
    if (i < breaks_.size()) os << " | " << format_double(breaks_[i]) << " | ";
  }
  os << ")";
  return os.str();
}

double InitialDatum::sup_norm() const {
  double m = 0.0;
  for (double v : levels_) m = std::max(m, std::abs(v));
  return m;
}

GridFunction project_initial_datum(const InitialDatum& u0, GridPtr grid,
                                   std::size_t n_quad) {
  const std::size_t n = grid->cells();
  std::vector<double> out(n, 0.0);
  if (u0.is_piecewise_constant()) {
    const auto br = u0.breakpoints();
    const auto lv = u0.levels();
    for (std::size_t j = 0; j < n; ++j) {
      const double a = grid->left(j);
      const double b = grid->right(j);
      // Piece containing a, then walk breakpoints inside (a, b).
      std::size_t piece = static_cast<std::size_t>(
          std::upper_bound(br.begin(), br.end(), a) - br.begin());
      double lo = a;
      double acc = 0.0;
      while (piece < br.size() && br[piece] < b) {
        acc += lv[piece] * (br[piece] - lo);
        lo = br[piece];
        ++piece;
      }
      acc += lv[piece] * (b - lo);
      out[j] = acc / (b - a);
    }
  } else {
    if (n_quad == 0) throw ConfigError("n_quad must be positive");
    for (std::size_t j = 0; j < n; ++j) {
      const double a = grid->left(j);
      const double h = grid->width(j) / static_cast<double>(n_quad);
      double acc = 0.0;
      for (std::size_t q = 0; q < n_quad; ++q)
        acc += u0(a + (static_cast<double>(q) + 0.5) * h);
      out[j] = acc / static_cast<double>(n_quad);
    }
  }
  return GridFunction(std::move(grid), std::move(out));
}

namespace {

void require_same_domain(const AlignedGrid& a, const AlignedGrid& b) {
  if (a.domain().lo != b.domain().lo || a.domain().hi != b.domain().hi)
    throw ConfigError("grid functions live on different domains");
}

// Calls fn(i, j, length) for every nonempty intersection of cell i of `a`
// with cell j of `b`, in increasing x order.
template <class Fn>
void for_each_overlap(const AlignedGrid& a, const AlignedGrid& b, Fn&& fn) {
  std::size_t i = 0;
  std::size_t j = 0;
  const std::size_t na = a.cells();
  const std::size_t nb = b.cells();
  while (i < na && j < nb) {
    const double ra = a.right(i);
    const double rb = b.right(j);
    const double lo = std::max(a.left(i), b.left(j));
    const double hi = std::min(ra, rb);
    if (hi > lo) fn(i, j, hi - lo);
    if (ra < rb) {
      ++i;
    } else if (rb < ra) {
      ++j;
    } else {
      ++i;
      ++j;
    }
  }
}

}  // namespace

void project_add(const GridFunction& f, const AlignedGrid& target, double scale,
                 std::span<double> out) {
  const AlignedGrid& src = f.grid();
  require_same_domain(src, target);
  if (&src == &target || src.edges().data() == target.edges().data()) {
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += scale * f[j];
    return;
  }
  // Integrate per target cell, then divide: one rounding per target cell.
  std::size_t current = 0;
  double acc = 0.0;
  for_each_overlap(src, target, [&](std::size_t s, std::size_t t, double len) {
    if (t != current) {
      out[current] += scale * acc / target.width(current);
      acc = 0.0;
      current = t;
    }
    acc += f[s] * len;
  });
  out[current] += scale * acc / target.width(current);
}

GridFunction project_to_grid(const GridFunction& f, GridPtr target) {
  std::vector<double> out(target->cells(), 0.0);
  project_add(f, *target, 1.0, out);
  return GridFunction(std::move(target), std::move(out));
}

double l1_distance(const GridFunction& f, const GridFunction& g) {
  require_same_domain(f.grid(), g.grid());
  double acc = 0.0;
  for_each_overlap(f.grid(), g.grid(),
                   [&](std::size_t i, std::size_t j, double len) {
                     acc += std::abs(f[i] - g[j]) * len;
                   });
  return acc;
}

double total_variation(const GridFunction& f, bool periodic) {
  const auto v = f.values();
  double tv = 0.0;
  for (std::size_t j = 1; j < v.size(); ++j) tv += std::abs(v[j] - v[j - 1]);
  if (periodic && v.size() > 1) tv += std::abs(v.front() - v.back());
  return tv;
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_csv(std::ostream& os, const GridFunction& f) {
  os << "x,value\n";
  for (std::size_t j = 0; j < f.size(); ++j)
    os << format_double(f.grid().center(j)) << ',' << format_double(f[j])
       << '\n';
}

}  // namespace mlmcfv
