#include "cli_app.hpp"

#if __has_include(<CLI/CLI.hpp>)
#include <CLI/CLI.hpp>
#else
#include <CLI11.hpp>
#endif

#include <iostream>
#include <sstream>

#include "mlmcfv/errors.hpp"
#include "mlmcfv/run.hpp"

namespace mlmcfv::cli {

namespace {

Interval parse_interval(const std::string& text, const std::string& field) {
  std::stringstream ss(text);
  std::string a, b, extra;
  if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') ||
      std::getline(ss, extra, ','))
    throw ConfigError(field + ": expected 'lo,hi', got '" + text + "'");
  try {
    return {std::stod(a), std::stod(b)};
  } catch (const std::exception&) {
    throw ConfigError(field + ": expected two numbers, got '" + text + "'");
  }
}

struct RawOptions {
  std::string experiment = "exp1";
  std::string mode = "mlmc";
  std::string levels = "7";
  std::string bracket = "0.35,0.9";
  std::string k_range;
  std::string alignment = "snap_uniform";
  std::string output_dir = "mlmcfv_out";
  std::string cache_dir;
  double eps = 0.0;
  bool no_timestamp = false;
};

void add_run_options(CLI::App& run, RunConfig& cfg, RawOptions& raw) {
  run.add_option("--experiment", raw.experiment, "exp1, exp2 or custom")
      ->capture_default_str();
  run.add_option("--mode", raw.mode,
                 "mlmc, mc, single_sample, reference or table")
      ->capture_default_str();
  run.add_option("--dx0-exp", cfg.dx0_exponent, "coarsest width dx0 = 2^-e")
      ->capture_default_str();
  run.add_option("--levels", raw.levels, "L, a range a..b, or a list a,b,c")
      ->capture_default_str();
  run.add_option("--dx-exp", cfg.dx_exponent,
                 "width 2^-e for single_sample and mc modes")
      ->capture_default_str();
  run.add_option("--samples", cfg.mc_samples, "samples for mc mode")
      ->capture_default_str();
  run.add_option("--xi", cfg.sample_parameters,
                 "stochastic parameters for single_sample (comma separated)")
      ->delimiter(',')
      ->allow_extra_args(false);
  run.add_option("--lambda", cfg.lambda, "dt/dx")->capture_default_str();
  run.add_option("--t-end", cfg.t_end, "final time")->capture_default_str();
  run.add_option("--seed", cfg.master_seed, "master seed")->capture_default_str();
  run.add_option("--replicas", cfg.replicas, "K repeated runs in table mode")
      ->capture_default_str();
  run.add_option("--nodes", cfg.reference_nodes,
                 "reference quadrature nodes per dimension (0: 200 exp1, 60 exp2)")
      ->capture_default_str();
  run.add_option("--dx-star-exp", cfg.dx_star_exponent,
                 "reference width dx* = 2^-e")
      ->capture_default_str();
  run.add_option("--output-cells", cfg.output_cells,
                 "cells of the statistics grid")
      ->capture_default_str();
  run.add_option("--flux", cfg.flux, "buckley_leverett, linear, linear_scaled")
      ->capture_default_str();
  run.add_option("--bracket", raw.bracket, "monotone state bracket lo,hi")
      ->capture_default_str();
  run.add_option("--k-range", raw.k_range,
                 "coefficient range lo,hi for the monotonicity check");
  run.add_option("--alignment", raw.alignment, "snap_uniform or subdomain_uniform")
      ->capture_default_str();
  run.add_option("--eps", raw.eps, "MLMC tolerance (default 2 dx_L^{sq/p})");
  run.add_option("--rate-p", cfg.rates.p)->capture_default_str();
  run.add_option("--rate-q", cfg.rates.q)->capture_default_str();
  run.add_option("--rate-r", cfg.rates.r)->capture_default_str();
  run.add_option("--rate-s", cfg.rates.s)->capture_default_str();
  run.add_option("--rate-w", cfg.rates.w)->capture_default_str();
  run.add_option("--custom-xi-lo", cfg.custom_xi_lo)->delimiter(',');
  run.add_option("--custom-xi-hi", cfg.custom_xi_hi)->delimiter(',');
  run.add_option("--custom-k-lo", cfg.custom_k_lo)->delimiter(',');
  run.add_option("--custom-k-hi", cfg.custom_k_hi)->delimiter(',');
  run.add_option("--threads", cfg.threads, "worker threads (0: auto)")
      ->capture_default_str();
  run.add_option("--output-dir", raw.output_dir, "directory for outputs")
      ->envname("MLMCFV_OUTPUT_DIR")
      ->capture_default_str();
  run.add_option("--cache-dir", raw.cache_dir,
                 "reference cache (default <output-dir>/cache)");
  run.add_flag("--no-timestamp", raw.no_timestamp,
               "omit the wall-clock timestamp from manifest.json");
}

void finish_config(RunConfig& cfg, const RawOptions& raw, const CLI::App& run) {
  cfg.experiment = parse_experiment(raw.experiment);
  cfg.mode = parse_mode(raw.mode);
  cfg.levels = parse_levels(raw.levels);
  cfg.bracket = parse_interval(raw.bracket, "bracket");
  if (!raw.k_range.empty()) cfg.k_range = parse_interval(raw.k_range, "k_range");
  cfg.alignment = parse_alignment(raw.alignment);
  if (run.count("--eps") > 0) cfg.eps = raw.eps;
  cfg.output_dir = raw.output_dir;
  cfg.cache_dir = raw.cache_dir;
  cfg.write_manifest_timestamp = !raw.no_timestamp;
}

}  // namespace

int main_entry(const std::vector<std::string>& args, std::ostream& out,
               std::ostream& err) {
  CLI::App app{"Monte Carlo and multilevel Monte Carlo finite volume solver "
               "for conservation laws with discontinuous flux"};
  app.set_config("--config", "", "INI/TOML file; keys under [run]");
  app.require_subcommand(1);
  RunConfig cfg;
  RawOptions raw;
  CLI::App* run = app.add_subcommand("run", "run an experiment");
  add_run_options(*run, cfg, raw);

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("mlmcfv");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    // Help requests carry exit code 0 and print the relevant subcommand help.
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  }

  try {
    finish_config(cfg, raw, *run);
    const RunReport report = mlmcfv::run(cfg, out);
    for (const auto& f : report.files) out << "wrote " << f.string() << '\n';
    return kSuccess;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }
}

}  // namespace mlmcfv::cli
