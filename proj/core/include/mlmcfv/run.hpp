#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mlmcfv/analysis.hpp"
#include "mlmcfv/mlmc.hpp"

namespace mlmcfv {

enum class Experiment { exp1, exp2, custom };
enum class RunMode { mlmc, mc, single_sample, reference, table };

Experiment parse_experiment(const std::string& s);
RunMode parse_mode(const std::string& s);
std::string to_string(Experiment e);
std::string to_string(RunMode m);

/// "7", "1..6" or "1,3,5".
std::vector<std::size_t> parse_levels(const std::string& s);

struct RunConfig {
  Experiment experiment = Experiment::exp1;
  RunMode mode = RunMode::mlmc;

  int dx0_exponent = 4;               // dx0 = 2^-e
  std::vector<std::size_t> levels{7};  // L, or the sweep for table mode
  int dx_exponent = 9;                 // single_sample / mc width 2^-e
  std::size_t mc_samples = 1000;
  std::vector<double> sample_parameters;  // single_sample: stochastic params

  double lambda = 0.2;
  double t_end = 0.2;
  std::uint64_t master_seed = 1;
  std::size_t replicas = 30;

  std::size_t reference_nodes = 0;  // 0: 200 (exp1) or 60 (exp2)
  int dx_star_exponent = 11;
  std::size_t output_cells = 1024;

  std::string flux = "buckley_leverett";
  Interval bracket{0.35, 0.9};
  std::optional<Interval> k_range;  // default: the model's coefficient range
  Alignment alignment = Alignment::snap_uniform;
  RateParameters rates;
  std::optional<double> eps;

  // custom experiment: layered model with uniform ranges
  std::vector<double> custom_xi_lo, custom_xi_hi;
  std::vector<double> custom_k_lo, custom_k_hi;

  unsigned threads = 0;
  std::filesystem::path output_dir = "mlmcfv_out";
  std::filesystem::path cache_dir;  // default: <output_dir>/cache
  bool write_manifest_timestamp = true;

  /// Throws ConfigError naming the offending field.
  void validate() const;
  RandomDataModel model() const;
  std::size_t effective_reference_nodes() const;
};

struct RunReport {
  std::vector<std::filesystem::path> files;
  std::vector<ConvergenceRow> rows;            // table mode
  std::optional<EstimatorResult> estimate;     // mc / mlmc mode
  std::optional<ReferenceSolution> reference;  // reference / table mode
};

/// Validates the configuration, builds the flux model, checks CFL and runs
/// the requested mode, writing CSV outputs and manifest.json to output_dir.
RunReport run(const RunConfig& config, std::ostream& log);

/// Loads the reference from the cache if present, else computes and stores
/// it. Returns the reference and the cache file path.
std::pair<ReferenceSolution, std::filesystem::path> cached_reference(
    const RunConfig& config, const SolverConfig& solver,
    const EstimatorContext& ctx, std::ostream& log);

}  // namespace mlmcfv
