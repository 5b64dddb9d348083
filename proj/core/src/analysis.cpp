#include "mlmcfv/analysis.hpp"

#include <atomic>
#include <cmath>
#include <ostream>
#include <sstream>

#include "mlmcfv/parallel.hpp"

namespace mlmcfv {

std::vector<double> trapezoid_weights(std::size_t nodes) {
  if (nodes < 2) throw ConfigError("trapezoidal rule needs at least 2 nodes");
  std::vector<double> w(nodes, 1.0 / static_cast<double>(nodes - 1));
  w.front() *= 0.5;
  w.back() *= 0.5;
  return w;
}

ReferenceSolution reference_solution(const RandomDataModel& model,
                                     std::size_t nodes,
                                     const SampleSolver& solver,
                                     const GridPtr& output_grid,
                                     const ExecutionPolicy& exec) {
  const auto dims = model.stochastic_parameters();
  if (dims.size() > 2) {
    std::ostringstream os;
    os << "reference quadrature supports at most 2 stochastic dimensions, "
       << "model has " << dims.size();
    throw UnsupportedDimension(os.str());
  }

  std::vector<double> base(model.parameter_count());
  for (std::size_t i = 0; i < base.size(); ++i) base[i] = model.parameter(i).lo;

  ReferenceSolution ref;
  ref.model = model.describe();
  std::size_t total = 1;
  std::vector<double> weights1d;
  if (!dims.empty()) {
    weights1d = trapezoid_weights(nodes);
    ref.nodes.assign(dims.size(), nodes);
    for (std::size_t d = 0; d < dims.size(); ++d) total *= nodes;
  }

  const std::size_t cells = output_grid->cells();
  std::vector<double> acc(cells, 0.0);
  const std::size_t batch = 64;
  std::vector<std::vector<double>> slots(std::min(batch, total),
                                         std::vector<double>(cells));
  std::vector<double> slot_weight(slots.size());
  const unsigned threads = resolve_threads(exec.threads);

  for (std::size_t start = 0; start < total; start += batch) {
    const std::size_t n = std::min(batch, total - start);
    parallel_for(n, threads, [&](std::size_t b) {
      std::size_t flat = start + b;
      std::vector<double> params = base;
      double weight = 1.0;
      for (std::size_t d = 0; d < dims.size(); ++d) {
        const std::size_t i = flat % nodes;
        flat /= nodes;
        const UniformParameter p = model.parameter(dims[d]);
        const double t = (i + 1 == nodes)
                             ? 1.0
                             : static_cast<double>(i) /
                                   static_cast<double>(nodes - 1);
        params[dims[d]] = p.at(t);
        weight *= weights1d[i];
      }
      const GridFunction u = solver(model.realize(params));
      std::fill(slots[b].begin(), slots[b].end(), 0.0);
      project_add(u, *output_grid, 1.0, slots[b]);
      slot_weight[b] = weight;
    });
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t j = 0; j < cells; ++j)
        acc[j] += slot_weight[b] * slots[b][j];
  }
  ref.mean = GridFunction(output_grid, std::move(acc));
  return ref;
}

ReferenceSolution reference_solution(const RandomDataModel& model,
                                     std::size_t nodes, double dx_star,
                                     const SolverConfig& cfg,
                                     const EstimatorContext& ctx) {
  std::atomic<std::uint64_t> work{0};
  const Interval domain = model.domain();
  const Alignment alignment = ctx.alignment;
  SampleSolver solver = [&](const Sample& s) {
    Solution sol = solve_sample(s, domain, dx_star, cfg, alignment);
    work += sol.cell_updates;
    return std::move(sol.final);
  };
  ReferenceSolution ref =
      reference_solution(model, nodes, solver, ctx.output_grid, ctx.exec);
  ref.dx_star = dx_star;
  ref.cell_updates = work.load();
  return ref;
}

RmsResult rms_error(const GridFunction& reference,
                    std::span<const GridFunction> runs) {
  if (runs.empty()) throw ConfigError("RMS estimator needs at least one run");
  const GridFunction zero(reference.grid_ptr(), 0.0);
  const double ref_norm = l1_distance(reference, zero);
  if (!(ref_norm > 0.0))
    throw ZeroReference("reference solution has zero L1 norm");
  RmsResult out;
  double sq = 0.0;
  for (const auto& u : runs) {
    const double e = 100.0 * l1_distance(reference, u) / ref_norm;
    out.per_replica.push_back(e);
    sq += e * e;
  }
  out.rms = std::sqrt(sq / static_cast<double>(runs.size()));
  return out;
}

double ooc_fit(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw DegenerateFit("fit needs at least two (x, y) pairs of equal count");
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0))
      throw DegenerateFit("log-log fit needs positive values");
    mx += std::log2(xs[i]);
    my += std::log2(ys[i]);
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = std::log2(xs[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log2(ys[i]) - my);
  }
  if (!(sxx > 0.0)) throw DegenerateFit("all abscissae are equal");
  return sxy / sxx;
}

void write_table_csv(std::ostream& os, std::span<const ConvergenceRow> rows) {
  os << "L,dxL,rms_percent,runtime_s,cell_updates\n";
  for (const auto& r : rows)
    os << r.L << ',' << format_double(r.dx_L) << ',' << format_double(r.rms)
       << ',' << format_double(r.runtime_s) << ',' << r.cell_updates << '\n';
}

}  // namespace mlmcfv
