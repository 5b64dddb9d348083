#include "mlmcfv/run.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mlmcfv/mc.hpp"

#ifndef MLMCFV_VERSION
#define MLMCFV_VERSION "unknown"
#endif

namespace mlmcfv {

Experiment parse_experiment(const std::string& s) {
  if (s == "exp1") return Experiment::exp1;
  if (s == "exp2") return Experiment::exp2;
  if (s == "custom") return Experiment::custom;
  throw ConfigError("experiment: unknown value '" + s +
                    "' (expected exp1, exp2 or custom)");
}

RunMode parse_mode(const std::string& s) {
  if (s == "mlmc") return RunMode::mlmc;
  if (s == "mc") return RunMode::mc;
  if (s == "single_sample") return RunMode::single_sample;
  if (s == "reference") return RunMode::reference;
  if (s == "table") return RunMode::table;
  throw ConfigError("mode: unknown value '" + s +
                    "' (expected mlmc, mc, single_sample, reference or table)");
}

std::string to_string(Experiment e) {
  switch (e) {
    case Experiment::exp1: return "exp1";
    case Experiment::exp2: return "exp2";
    case Experiment::custom: return "custom";
  }
  return "custom";
}

std::string to_string(RunMode m) {
  switch (m) {
    case RunMode::mlmc: return "mlmc";
    case RunMode::mc: return "mc";
    case RunMode::single_sample: return "single_sample";
    case RunMode::reference: return "reference";
    case RunMode::table: return "table";
  }
  return "mlmc";
}

std::vector<std::size_t> parse_levels(const std::string& s) {
  auto to_index = [&](const std::string& t) -> std::size_t {
    std::size_t pos = 0;
    long v = -1;
    try {
      v = std::stol(t, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != t.size() || v < 0)
      throw ConfigError("levels: cannot parse '" + s + "'");
    return static_cast<std::size_t>(v);
  };
  std::vector<std::size_t> out;
  if (const auto dots = s.find(".."); dots != std::string::npos) {
    const std::size_t a = to_index(s.substr(0, dots));
    const std::size_t b = to_index(s.substr(dots + 2));
    if (b < a) throw ConfigError("levels: empty range '" + s + "'");
    for (std::size_t l = a; l <= b; ++l) out.push_back(l);
    return out;
  }
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_index(item));
  if (out.empty()) throw ConfigError("levels: empty list");
  return out;
}

namespace {

void require(bool ok, const std::string& field, const std::string& msg) {
  if (!ok) throw ConfigError(field + ": " + msg);
}

}  // namespace

void RunConfig::validate() const {
  require(lambda >= 0.0 && std::isfinite(lambda), "lambda", "must be >= 0");
  require(t_end >= 0.0 && std::isfinite(t_end), "t_end", "must be >= 0");
  require(t_end == 0.0 || lambda > 0.0, "lambda",
          "must be positive when t_end > 0");
  require(dx0_exponent >= 1 && dx0_exponent <= 20, "dx0_exponent",
          "must be in [1, 20]");
  require(dx_exponent >= 1 && dx_exponent <= 20, "dx_exponent",
          "must be in [1, 20]");
  require(dx_star_exponent >= 1 && dx_star_exponent <= 20, "dx_star_exponent",
          "must be in [1, 20]");
  require(!levels.empty(), "levels", "must list at least one level");
  for (std::size_t l : levels)
    require(dx0_exponent + static_cast<int>(l) <= 24, "levels",
            "finest level too fine");
  require(replicas >= 1, "replicas", "must be >= 1");
  require(mc_samples >= 1, "mc_samples", "must be >= 1");
  require(output_cells >= 1, "output_cells", "must be >= 1");
  require(bracket.hi > bracket.lo, "bracket", "needs lo < hi");
  if (k_range) require(k_range->hi >= k_range->lo, "k_range", "needs lo <= hi");
  require(rates.q > 1.0, "rates.q", "must exceed 1");
  require(rates.p > 0.0 && rates.s > 0.0 && rates.w > 0.0, "rates",
          "p, s and w must be positive");
  if (eps) require(*eps > 0.0, "eps", "must be positive");
  if (mode == RunMode::table || mode == RunMode::reference)
    require(effective_reference_nodes() >= 2, "nodes", "must be >= 2");
  if (experiment == Experiment::custom) {
    require(custom_k_lo.size() == custom_xi_lo.size() + 1,
            "custom_k_lo", "needs one more entry than custom_xi_lo");
    require(custom_xi_hi.size() == custom_xi_lo.size(), "custom_xi_hi",
            "must match custom_xi_lo in length");
    require(custom_k_hi.size() == custom_k_lo.size(), "custom_k_hi",
            "must match custom_k_lo in length");
  }
  if (mode == RunMode::single_sample) {
    const auto m = model();
    require(sample_parameters.size() == m.stochastic_dimension(), "xi",
            "expected " + std::to_string(m.stochastic_dimension()) +
                " value(s) for the stochastic parameters of " +
                to_string(experiment));
    const auto idx = m.stochastic_parameters();
    for (std::size_t i = 0; i < idx.size(); ++i) {
      const auto p = m.parameter(idx[i]);
      require(sample_parameters[i] >= p.lo && sample_parameters[i] <= p.hi,
              "xi", "value outside the parameter's support");
    }
  }
  (void)make_flux(flux);
  (void)model();
}

RandomDataModel RunConfig::model() const {
  switch (experiment) {
    case Experiment::exp1:
      return RandomDataModel::interface_position();
    case Experiment::exp2:
      return RandomDataModel::layer_permeability();
    case Experiment::custom: {
      std::vector<UniformParameter> ifs, layers;
      for (std::size_t i = 0; i < custom_xi_lo.size(); ++i)
        ifs.push_back({custom_xi_lo[i], custom_xi_hi.at(i)});
      for (std::size_t i = 0; i < custom_k_lo.size(); ++i)
        layers.push_back({custom_k_lo[i], custom_k_hi.at(i)});
      return RandomDataModel(ModelKind::custom, {-1.0, 1.0},
                             RandomDataModel::experiment_datum(), ifs, layers);
    }
  }
  throw ConfigError("experiment: unsupported");
}

std::size_t RunConfig::effective_reference_nodes() const {
  if (reference_nodes > 0) return reference_nodes;
  return experiment == Experiment::exp2 ? 60 : 200;
}

namespace {

using nlohmann::json;

json interval_json(Interval iv) { return json::array({iv.lo, iv.hi}); }

json config_json(const RunConfig& c) {
  json j;
  j["experiment"] = to_string(c.experiment);
  j["mode"] = to_string(c.mode);
  j["dx0_exponent"] = c.dx0_exponent;
  j["levels"] = c.levels;
  j["dx_exponent"] = c.dx_exponent;
  j["mc_samples"] = c.mc_samples;
  j["sample_parameters"] = c.sample_parameters;
  j["lambda"] = c.lambda;
  j["t_end"] = c.t_end;
  j["master_seed"] = c.master_seed;
  j["replicas"] = c.replicas;
  j["reference_nodes"] = c.effective_reference_nodes();
  j["dx_star_exponent"] = c.dx_star_exponent;
  j["output_cells"] = c.output_cells;
  j["flux"] = c.flux;
  j["bracket"] = interval_json(c.bracket);
  if (c.k_range) j["k_range"] = interval_json(*c.k_range);
  j["alignment"] = to_string(c.alignment);
  j["rates"] = {{"p", c.rates.p}, {"q", c.rates.q}, {"r", c.rates.r},
                {"s", c.rates.s}, {"w", c.rates.w}};
  if (c.eps) j["eps"] = *c.eps;
  if (c.experiment == Experiment::custom) {
    j["custom_xi_lo"] = c.custom_xi_lo;
    j["custom_xi_hi"] = c.custom_xi_hi;
    j["custom_k_lo"] = c.custom_k_lo;
    j["custom_k_hi"] = c.custom_k_hi;
  }
  j["threads"] = c.threads;
  return j;
}

json plan_json(const LevelPlan& p) {
  return {{"L", p.L},       {"dx0", p.dx0},         {"eps", p.eps},
          {"M", p.samples}, {"dxL", p.dx(p.L)}};
}

std::string utc_timestamp() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::ofstream open_output(const std::filesystem::path& file) {
  std::ofstream os(file);
  if (!os) throw ConfigError("output_dir: cannot write " + file.string());
  return os;
}

Interval model_k_range(const RunConfig& c, const RandomDataModel& m) {
  return c.k_range.value_or(m.coefficient_range());
}

ReferenceKey make_reference_key(const RunConfig& c, const RandomDataModel& m,
                                const SolverConfig& s) {
  ReferenceKey key;
  key.model = m.describe();
  key.flux = c.flux + " bracket=[" + format_double(c.bracket.lo) + "," +
             format_double(c.bracket.hi) + "]";
  key.nodes = c.effective_reference_nodes();
  key.dx_star = std::ldexp(1.0, -c.dx_star_exponent);
  key.lambda = s.lambda;
  key.t_end = s.t_end;
  key.alignment = to_string(c.alignment);
  key.output_cells = c.output_cells;
  return key;
}

}  // namespace

std::pair<ReferenceSolution, std::filesystem::path> cached_reference(
    const RunConfig& config, const SolverConfig& solver,
    const EstimatorContext& ctx, std::ostream& log) {
  const RandomDataModel model = config.model();
  const ReferenceKey key = make_reference_key(config, model, solver);
  const auto dir = config.cache_dir.empty() ? config.output_dir / "cache"
                                            : config.cache_dir;
  const auto file = reference_cache_path(dir, key);
  if (auto ref = load_reference(file, key, ctx.output_grid)) {
    log << "reference: loaded " << file.string() << '\n';
    return {std::move(*ref), file};
  }
  log << "reference: computing " << key.nodes << " nodes per dimension at dx*=2^-"
      << config.dx_star_exponent << '\n';
  ReferenceSolution ref =
      reference_solution(model, key.nodes, key.dx_star, solver, ctx);
  save_reference(file, key, ref);
  log << "reference: stored " << file.string() << '\n';
  return {std::move(ref), file};
}

RunReport run(const RunConfig& config, std::ostream& log) {
  config.validate();
  const RandomDataModel model = config.model();
  const Interval k_range = model_k_range(config, model);

  auto flux = std::make_shared<const FluxModel>(make_flux(config.flux), k_range,
                                                config.bracket);
  SolverConfig solver{config.lambda, config.t_end, flux};
  {
    Coefficient probe;
    constexpr int kProbe = 33;
    for (int i = 0; i < kProbe; ++i)
      probe.values.push_back(k_range.lo + k_range.width() * i / (kProbe - 1));
    cfl_check(solver, probe, config.bracket);
  }

  EstimatorContext ctx;
  ctx.output_grid = default_output_grid(model.domain(), config.output_cells);
  ctx.alignment = config.alignment;
  ctx.exec.threads = config.threads;

  std::filesystem::create_directories(config.output_dir);
  RunReport report;

  json manifest;
  manifest["tool"] = "mlmcfv";
  manifest["version"] = MLMCFV_VERSION;
  if (config.write_manifest_timestamp) manifest["timestamp"] = utc_timestamp();
  manifest["config"] = config_json(config);
  manifest["model"] = model.describe();
  manifest["flux_bounds"] = {{"alpha", flux->alpha()},
                             {"lip", flux->lip()},
                             {"k_range", interval_json(k_range)},
                             {"tol_f", flux->tol_f()}};
  manifest["rng"] = "mt19937_64 seeded by splitmix64(seed, level, index, replica)";
  manifest["output_grid_cells"] = config.output_cells;

  auto emit = [&](const std::string& name) {
    const auto path = config.output_dir / name;
    report.files.push_back(path);
    manifest["outputs"].push_back(name);
    return open_output(path);
  };

  const double dx0 = std::ldexp(1.0, -config.dx0_exponent);
  const KeyBase keys{config.master_seed, 0};

  switch (config.mode) {
    case RunMode::single_sample: {
      std::vector<double> params(model.parameter_count());
      for (std::size_t i = 0; i < params.size(); ++i)
        params[i] = model.parameter(i).lo;
      const auto idx = model.stochastic_parameters();
      for (std::size_t i = 0; i < idx.size(); ++i)
        params[idx[i]] = config.sample_parameters[i];
      const double dx = std::ldexp(1.0, -config.dx_exponent);
      const Solution sol = solve_sample(model.realize(params), model.domain(),
                                        dx, solver, config.alignment);
      auto os = emit("single_sample.csv");
      write_csv(os, sol.final);
      manifest["single_sample"] = {{"parameters", params},
                                   {"dx", dx},
                                   {"steps", sol.steps},
                                   {"cell_updates", sol.cell_updates}};
      log << "single_sample: " << sol.final.size() << " cells, " << sol.steps
          << " steps\n";
      break;
    }
    case RunMode::mc: {
      const double dx = std::ldexp(1.0, -config.dx_exponent);
      EstimatorResult r =
          mc_estimate(model, dx, config.mc_samples, solver, keys, ctx);
      auto os = emit("mc_profile.csv");
      write_estimator_csv(os, r);
      manifest["mc"] = {{"dx", dx},
                        {"M", config.mc_samples},
                        {"cell_updates", r.cell_updates},
                        {"runtime_s", r.runtime_s}};
      log << "mc: M=" << config.mc_samples << " in " << r.runtime_s << " s\n";
      report.estimate = std::move(r);
      break;
    }
    case RunMode::mlmc: {
      for (std::size_t L : config.levels) {
        const LevelPlan plan =
            LevelPlan::optimal(L, dx0, config.rates, config.eps);
        EstimatorResult r = mlmc_estimate(model, plan, solver, keys, ctx);
        auto os = emit("mlmc_profile_L" + std::to_string(L) + ".csv");
        write_estimator_csv(os, r);
        json entry = plan_json(plan);
        entry["cell_updates"] = r.cell_updates;
        entry["runtime_s"] = r.runtime_s;
        manifest["mlmc"].push_back(entry);
        log << "mlmc: L=" << L << " M=" << json(plan.samples).dump() << " in "
            << r.runtime_s << " s\n";
        report.estimate = std::move(r);
      }
      break;
    }
    case RunMode::reference: {
      auto [ref, file] = cached_reference(config, solver, ctx, log);
      auto os = emit("reference.csv");
      write_csv(os, ref.mean);
      manifest["reference"] = {{"cache_file", file.string()},
                               {"nodes", ref.nodes},
                               {"dx_star", ref.dx_star},
                               {"cell_updates", ref.cell_updates}};
      report.reference = std::move(ref);
      break;
    }
    case RunMode::table: {
      auto [ref, file] = cached_reference(config, solver, ctx, log);
      manifest["reference"] = {{"cache_file", file.string()},
                               {"nodes", ref.nodes},
                               {"dx_star", ref.dx_star}};
      std::ostringstream replica_rows;
      replica_rows << "L,replica,rms_percent\n";
      for (std::size_t L : config.levels) {
        const LevelPlan plan =
            LevelPlan::optimal(L, dx0, config.rates, config.eps);
        std::vector<GridFunction> runs;
        double runtime = 0.0;
        std::uint64_t work = 0;
        for (std::size_t k = 0; k < config.replicas; ++k) {
          const KeyBase rk{config.master_seed, static_cast<std::uint32_t>(k)};
          EstimatorResult r = mlmc_estimate(model, plan, solver, rk, ctx);
          runtime += r.runtime_s;
          work = r.cell_updates;
          runs.push_back(std::move(r.mean));
        }
        const RmsResult rms = rms_error(ref, runs);
        ConvergenceRow row{L, plan.dx(L), rms.rms,
                           runtime / static_cast<double>(config.replicas), work};
        report.rows.push_back(row);
        for (std::size_t k = 0; k < rms.per_replica.size(); ++k)
          replica_rows << L << ',' << k << ','
                       << format_double(rms.per_replica[k]) << '\n';
        json entry = plan_json(plan);
        entry["cell_updates_per_replica"] = work;
        entry["runtime_s_per_replica"] = row.runtime_s;
        manifest["table"].push_back(entry);
        log << "table: L=" << L << " dxL=" << row.dx_L << " RMS=" << row.rms
            << "% runtime/replica=" << row.runtime_s << " s work=" << work
            << '\n';
      }
      {
        auto os = emit("table.csv");
        write_table_csv(os, report.rows);
      }
      {
        auto os = emit("table_replicas.csv");
        os << replica_rows.str();
      }
      if (report.rows.size() >= 2) {
        std::vector<double> dx, work, rt, err;
        for (const auto& r : report.rows) {
          dx.push_back(r.dx_L);
          work.push_back(static_cast<double>(r.cell_updates));
          rt.push_back(r.runtime_s);
          err.push_back(r.rms);
        }
        manifest["ooc"] = {{"vs_dxL", ooc_fit(dx, err)},
                           {"vs_cell_updates", ooc_fit(work, err)}};
        if (std::all_of(rt.begin(), rt.end(), [](double t) { return t > 0; }))
          manifest["ooc"]["vs_runtime"] = ooc_fit(rt, err);
      }
      report.reference = std::move(ref);
      break;
    }
  }

  {
    std::ofstream os(config.output_dir / "manifest.json");
    if (!os) throw ConfigError("output_dir: cannot write manifest.json");
    os << manifest.dump(2) << '\n';
  }
  report.files.push_back(config.output_dir / "manifest.json");
  return report;
}

}  // namespace mlmcfv
