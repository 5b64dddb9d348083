#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mlmcfv/estimator.hpp"

namespace mlmcfv {

struct ReferenceSolution {
  GridFunction mean;
  std::vector<std::size_t> nodes;  // per stochastic dimension
  double dx_star = 0.0;
  std::string model;
  std::uint64_t cell_updates = 0;
};

/// Maps a sample to its deterministic solution. reference_solution() uses
/// the finite volume solver; tests substitute closed forms.
using SampleSolver = std::function<GridFunction(const Sample&)>;

/// Equispaced trapezoidal weights on [lo, hi] normalised to sum to one.
std::vector<double> trapezoid_weights(std::size_t nodes);

/// Trapezoidal (1-D) or tensorised trapezoidal (2-D) quadrature of the
/// solution over the uniform distribution of the model's stochastic
/// parameters, evaluated on the output grid. Throws UnsupportedDimension for
/// three or more stochastic dimensions.
ReferenceSolution reference_solution(const RandomDataModel& model,
                                     std::size_t nodes,
                                     const SampleSolver& solver,
                                     const GridPtr& output_grid,
                                     const ExecutionPolicy& exec = {});

ReferenceSolution reference_solution(const RandomDataModel& model,
                                     std::size_t nodes, double dx_star,
                                     const SolverConfig& cfg,
                                     const EstimatorContext& ctx);

struct RmsResult {
  double rms = 0.0;                // percent
  std::vector<double> per_replica; // percent
};

/// RMS_i = 100 ||U_ref - U_i||_1 / ||U_ref||_1, RMS = sqrt(mean RMS_i^2).
RmsResult rms_error(const GridFunction& reference,
                    std::span<const GridFunction> runs);
inline RmsResult rms_error(const ReferenceSolution& ref,
                           std::span<const GridFunction> runs) {
  return rms_error(ref.mean, runs);
}

/// Least-squares slope of log2(ys) against log2(xs).
double ooc_fit(std::span<const double> xs, std::span<const double> ys);

struct ConvergenceRow {
  std::size_t L = 0;
  double dx_L = 0.0;
  double rms = 0.0;  // percent
  double runtime_s = 0.0;
  std::uint64_t cell_updates = 0;
};

/// Header "L,dxL,rms_percent,runtime_s,cell_updates".
void write_table_csv(std::ostream& os, std::span<const ConvergenceRow> rows);

/// Parameters that fully determine a reference; also its cache identity.
struct ReferenceKey {
  std::string model;
  std::string flux;
  std::size_t nodes = 0;
  double dx_star = 0.0;
  double lambda = 0.0;
  double t_end = 0.0;
  std::string alignment;
  std::size_t output_cells = 0;

  std::map<std::string, std::string> fields() const;
  std::string digest() const;  // 16 hex digits
};

/// CSV with '#'-prefixed manifest lines, then "x,mean" rows.
void save_reference(const std::filesystem::path& file, const ReferenceKey& key,
                    const ReferenceSolution& ref);

/// Returns nothing if the file is missing or its manifest differs from key.
std::optional<ReferenceSolution> load_reference(
    const std::filesystem::path& file, const ReferenceKey& key,
    const GridPtr& output_grid);

/// File name used inside a cache directory.
std::filesystem::path reference_cache_path(const std::filesystem::path& dir,
                                           const ReferenceKey& key);

}  // namespace mlmcfv
