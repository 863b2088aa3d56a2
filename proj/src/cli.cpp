#include "haarvol/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>

#include <json.hpp>

#include "haarvol/csv_io.hpp"
#include "haarvol/errors.hpp"
#include "haarvol/regularity.hpp"
#include "haarvol/validation.hpp"
#include "haarvol/version.hpp"

namespace haarvol {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const std::set<std::string>& known,
                         const std::string& where) {
  for (const auto& [key, value] : obj.items())
    if (!known.count(key))
      throw ConfigError("unknown field in " + where + ": " + key);
}

HurstFunction parse_hurst_fn(const json& j) {
  if (!j.is_object()) throw ConfigError("sim.H_fn must be an object");
  reject_unknown_keys(j, {"type", "h", "h0", "h1"}, "sim.H_fn");
  const std::string type = j.value("type", "");
  if (type == "constant") {
    if (!j.contains("h")) throw ConfigError("missing field: sim.H_fn.h");
    return HurstFunction::constant(j["h"].get<double>());
  }
  if (type == "linear") {
    if (!j.contains("h0") || !j.contains("h1"))
      throw ConfigError("missing field: sim.H_fn.h0/h1");
    return HurstFunction::linear(j["h0"].get<double>(), j["h1"].get<double>());
  }
  throw ConfigError("sim.H_fn.type must be 'constant' or 'linear'; got '" + type + "'");
}

void parse_sim(const json& j, SimConfig& sim, bool& seed_explicit) {
  reject_unknown_keys(j,
                      {"J", "driver", "H", "H_fn", "phi", "seed", "replicas", "gammas",
                       "alpha_margin", "method"},
                      "sim");
  if (j.contains("J")) sim.output_level = j["J"].get<int>();
  if (j.contains("driver")) {
    const std::string d = j["driver"].get<std::string>();
    if (d == "bm")
      sim.driver = DriverKind::brownian_motion;
    else if (d == "fbm")
      sim.driver = DriverKind::fractional_bm;
    else if (d == "mbm")
      sim.driver = DriverKind::multifractional_bm;
    else
      throw ConfigError("sim.driver must be one of bm|fbm|mbm; got '" + d + "'");
  }
  if (j.contains("H")) sim.hurst = j["H"].get<double>();
  if (j.contains("H_fn")) sim.hurst_fn = parse_hurst_fn(j["H_fn"]);
  if (j.contains("phi")) sim.phi_name = j["phi"].get<std::string>();
  if (j.contains("seed")) {
    sim.master_seed = j["seed"].get<std::uint64_t>();
    seed_explicit = true;
  }
  if (j.contains("replicas")) sim.replicas = j["replicas"].get<int>();
  if (j.contains("gammas")) {
    sim.gamma_list.clear();
    for (const auto& g : j["gammas"]) sim.gamma_list.push_back(g.get<double>());
  }
  if (j.contains("alpha_margin"))
    sim.driver_options.alpha_margin = j["alpha_margin"].get<double>();
  if (j.contains("method")) {
    const std::string m = j["method"].get<std::string>();
    if (m == "auto")
      sim.driver_options.method = GaussMethod::automatic;
    else if (m == "cholesky")
      sim.driver_options.method = GaussMethod::cholesky;
    else if (m == "circulant")
      sim.driver_options.method = GaussMethod::circulant;
    else if (m == "hurst_interp")
      sim.driver_options.method = GaussMethod::hurst_interp;
    else
      throw ConfigError("sim.method must be auto|cholesky|circulant|hurst_interp");
  }
}

}  // namespace

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config file not readable: " + path.string());
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ConfigError("config file is not valid JSON: " + std::string(e.what()));
  }
  if (!j.is_object()) throw ConfigError("config file must hold a JSON object");
  reject_unknown_keys(j,
                      {"command", "output_dir", "format", "routes", "sim", "convergence",
                       "estimate", "constants"},
                      "config");

  ExperimentConfig config;
  if (j.contains("command")) config.command = j["command"].get<std::string>();
  if (j.contains("output_dir")) config.output_dir = j["output_dir"].get<std::string>();
  if (j.contains("format")) {
    config.format = j["format"].get<std::string>();
    if (config.format != "csv" && config.format != "json")
      throw ConfigError("format must be csv or json; got '" + config.format + "'");
  }
  if (j.contains("routes")) {
    config.routes.clear();
    for (const auto& r : j["routes"]) {
      const std::string name = r.get<std::string>();
      if (name != "fast" && name != "wavelet" && name != "oracle")
        throw ConfigError("routes entries must be fast|wavelet|oracle; got '" + name + "'");
      config.routes.push_back(name);
    }
    if (config.routes.empty()) throw ConfigError("routes must not be empty");
  }
  if (j.contains("sim")) parse_sim(j["sim"], config.sim, config.seed_explicit);
  if (j.contains("convergence")) {
    const json& conv = j["convergence"];
    reject_unknown_keys(conv, {"j_min", "j_max"}, "convergence");
    if (conv.contains("j_min")) config.j_min = conv["j_min"].get<int>();
    if (conv.contains("j_max")) config.j_max = conv["j_max"].get<int>();
  }
  if (j.contains("estimate")) {
    const json& est = j["estimate"];
    reject_unknown_keys(est, {"t0", "h_level_min", "h_level_max", "epsilon"}, "estimate");
    if (est.contains("t0")) {
      config.t0_list.clear();
      for (const auto& t : est["t0"]) config.t0_list.push_back(t.get<double>());
    }
    if (est.contains("h_level_min")) config.h_level_min = est["h_level_min"].get<int>();
    if (est.contains("h_level_max")) config.h_level_max = est["h_level_max"].get<int>();
    if (est.contains("epsilon")) config.divergence_epsilon = est["epsilon"].get<double>();
  }
  if (j.contains("constants")) config.constants_path = j["constants"].get<std::string>();
  return config;
}

namespace {

// CSV or JSON table with the shared metadata sidecar.
class TableWriter {
 public:
  TableWriter(const std::filesystem::path& dir, const std::string& stem,
              const std::string& format, std::vector<std::string> columns)
      : format_(format), columns_(std::move(columns)) {
    std::filesystem::create_directories(dir);
    if (format_ == "csv") {
      path_ = dir / (stem + ".csv");
      csv_.emplace(path_, columns_);
    } else {
      path_ = dir / (stem + ".json");
    }
  }

  TableWriter& field(double v) { return field_str(format_double(v)); }
  TableWriter& field(long long v) { return field_str(std::to_string(v)); }
  TableWriter& field(const std::string& v) { return field_str(v); }

  void end_row() {
    if (csv_) {
      csv_->end_row();
    } else {
      rows_.push_back(std::move(row_));
      row_ = json::array();
    }
  }

  void finish(std::uint64_t seed, std::uint64_t config_hash,
              const std::map<std::string, std::string>& extra) {
    if (csv_) {
      csv_->close();
    } else {
      json doc;
      doc["schema_version"] = kOutputSchemaVersion;
      doc["columns"] = columns_;
      doc["rows"] = std::move(rows_);
      std::ofstream out(path_, std::ios::binary);
      out << doc.dump(2) << '\n';
    }
    write_meta_sidecar(path_, seed, config_hash, extra);
  }

  const std::filesystem::path& path() const { return path_; }

 private:
  TableWriter& field_str(const std::string& v) {
    if (csv_)
      csv_->field(v);
    else
      row_.push_back(v);
    return *this;
  }

  std::string format_;
  std::vector<std::string> columns_;
  std::filesystem::path path_;
  std::optional<CsvFile> csv_;
  json rows_ = json::array();
  json row_ = json::array();
};

void emit_path_rows(TableWriter& table, long long replica, const SimulatedPath& path) {
  for (std::size_t m = 0; m < path.values.size(); ++m) {
    table.field(replica)
        .field(std::string(route_name(path.route)))
        .field(path.grid.point(m))
        .field(path.values[m]);
    table.end_row();
  }
}

}  // namespace

int run_simulate(const ExperimentConfig& config) {
  config.sim.validate();
  const bool want_fast = std::count(config.routes.begin(), config.routes.end(), "fast") > 0;
  const bool want_wavelet =
      std::count(config.routes.begin(), config.routes.end(), "wavelet") > 0;
  const bool want_oracle =
      std::count(config.routes.begin(), config.routes.end(), "oracle") > 0;

  TableWriter table(config.output_dir, "path", config.format,
                    {"replica", "route", "t", "value"});
  for (int r = 0; r < config.sim.replicas; ++r) {
    SimConfig replica = config.sim;
    replica.master_seed = config.sim.master_seed ^ static_cast<std::uint64_t>(r);
    replica.replicas = 1;
    const CoupledDraw draw = coupled_draw(replica);
    if (want_fast) emit_path_rows(table, r, simulate_fast(replica, draw));
    if (want_wavelet)
      emit_path_rows(table, r,
                     simulate_wavelet_partial(replica, draw, replica.output_level - 1));
    if (want_oracle) emit_path_rows(table, r, simulate_oracle(replica, draw));
  }
  table.finish(config.sim.master_seed, config.sim.hash(), {{"command", "simulate"}});
  return 0;
}

int run_convergence(const ExperimentConfig& config) {
  config.sim.validate();
  if (config.sim.gamma_list.empty()) throw ConfigError("missing field: sim.gammas");
  if (config.j_min > config.j_max)
    throw ConfigError("convergence: empty J range [" + std::to_string(config.j_min) + "," +
                      std::to_string(config.j_max) + "]");

  TableWriter table(config.output_dir, "rates", config.format,
                    {"gamma", "J", "mean_error", "fitted_slope", "predicted_slope", "r2"});
  for (double gamma : config.sim.gamma_list) {
    const RateFit fit = convergence_rate(config.sim, config.j_min, config.j_max, gamma);
    for (std::size_t i = 0; i < fit.levels.size(); ++i) {
      table.field(gamma)
          .field(static_cast<long long>(fit.levels[i]))
          .field(fit.mean_errors[i])
          .field(fit.slope)
          .field(fit.predicted_slope)
          .field(fit.r_squared);
      table.end_row();
    }
  }
  table.finish(config.sim.master_seed, config.sim.hash(), {{"command", "convergence"}});
  return 0;
}

int run_estimate(const ExperimentConfig& config) {
  config.sim.validate();
  if (config.sim.gamma_list.empty()) throw ConfigError("missing field: sim.gammas");

  TableWriter table(config.output_dir, "estimate", config.format,
                    {"replica", "statistic", "parameter", "value", "std_error"});
  const int level = 2 * config.sim.output_level;  // oracle grid
  std::vector<std::vector<double>> oracle_values;
  for (int r = 0; r < config.sim.replicas; ++r) {
    SimConfig replica = config.sim;
    replica.master_seed = config.sim.master_seed ^ static_cast<std::uint64_t>(r);
    replica.replicas = 1;
    oracle_values.push_back(simulate_coupled(replica, /*with_wavelet=*/false).oracle.values);
    const auto& values = oracle_values.back();

    bool first_gamma = true;
    for (double gamma : config.sim.gamma_list) {
      const RegularityReport report = make_regularity_report(
          values, level, gamma, config.t0_list, config.h_level_min, config.h_level_max,
          config.divergence_epsilon);
      table.field(static_cast<long long>(r))
          .field(std::string("holder_norm"))
          .field(gamma)
          .field(report.holder_norm)
          .field(0.0);
      table.end_row();
      if (first_gamma) {
        for (const PointwiseRecord& rec : report.pointwise) {
          table.field(static_cast<long long>(r))
              .field(std::string("pointwise_exponent"))
              .field(rec.t0)
              .field(rec.estimate)
              .field(rec.std_error);
          table.end_row();
        }
        table.field(static_cast<long long>(r))
            .field(std::string("divergence_indicator"))
            .field(config.divergence_epsilon)
            .field(report.diagnostics.at("divergence_indicator"))
            .field(0.0);
        table.end_row();
        first_gamma = false;
      }
    }
  }

  // Ensemble summaries (replica = -1).
  for (double t0 : config.t0_list) {
    double sum = 0.0, sum_sq = 0.0;
    for (const auto& values : oracle_values) {
      const ExponentEstimate est = pointwise_exponent(values, level, t0, config.h_level_min,
                                                      config.h_level_max);
      const double clamped = std::clamp(est.estimate, 0.0, 1.5);
      sum += clamped;
      sum_sq += clamped * clamped;
    }
    const double n = static_cast<double>(oracle_values.size());
    const double mean = sum / n;
    const double stderr_mean =
        (n > 1) ? std::sqrt(std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0)) / n) : 0.0;
    table.field(static_cast<long long>(-1))
        .field(std::string("mean_pointwise_exponent"))
        .field(t0)
        .field(mean)
        .field(stderr_mean);
    table.end_row();
  }
  if (!config.t0_list.empty()) {
    const double fraction = divergence_diagnostic(oracle_values, level, config.t0_list.front(),
                                                  config.divergence_epsilon,
                                                  config.h_level_min, config.h_level_max);
    table.field(static_cast<long long>(-1))
        .field(std::string("divergence_fraction"))
        .field(config.divergence_epsilon)
        .field(fraction)
        .field(0.0);
    table.end_row();
  }
  table.finish(config.sim.master_seed, config.sim.hash(), {{"command", "estimate"}});
  return 0;
}

void write_figure_files(const std::filesystem::path& dir, std::uint64_t seed) {
  std::filesystem::create_directories(dir);
  SimConfig sim;
  sim.output_level = 10;
  sim.driver = DriverKind::multifractional_bm;
  sim.hurst_fn = HurstFunction::linear(0.6, 0.8);
  sim.phi_name = "affine_paper";
  sim.master_seed = seed;
  const CoupledDraw draw = coupled_draw(sim);

  // Driver trajectory with its Hurst ramp, at level 12 for plotting density.
  {
    const int level = std::min(12, sim.fine_level());
    const DyadicGrid grid(level);
    const int shift = sim.fine_level() - level;
    CsvFile csv(dir / "figure1_driver.csv", {"t", "H", "X"});
    for (std::size_t m = 0; m < grid.size(); ++m) {
      const double t = grid.point(m);
      csv.field(t).field(sim.hurst_fn(t)).field(draw.x.values[m << shift]);
      csv.end_row();
    }
    csv.close();
    write_meta_sidecar(dir / "figure1_driver.csv", seed, sim.hash(),
                       {{"command", "reproduce-figures"}});
  }

  // Coupled log-price trajectories for the two volatility maps; both share
  // the driver sample restricted to the output grid.
  const int out_shift = sim.fine_level() - sim.output_level;
  for (const char* phi : {"affine_paper", "sine_paper"}) {
    SimConfig variant = sim;
    variant.phi_name = phi;
    const SimulatedPath z = simulate_fast(variant, draw);
    const std::string stem =
        (std::string(phi) == "affine_paper") ? "figure2_affine" : "figure2_sine";
    CsvFile csv(dir / (stem + ".csv"), {"t", "X", "Z"});
    for (std::size_t m = 0; m < z.values.size(); ++m) {
      csv.field(z.grid.point(m)).field(draw.x.values[m << out_shift]).field(z.values[m]);
      csv.end_row();
    }
    csv.close();
    write_meta_sidecar(dir / (stem + ".csv"), seed, variant.hash(),
                       {{"command", "reproduce-figures"}});
  }
}

int run_reproduce_figures(const ExperimentConfig& config) {
  write_figure_files(config.output_dir,
                     config.seed_explicit ? config.sim.master_seed : kFigureSeed);
  return 0;
}

int run_validate(const ExperimentConfig& config) {
  const ValidationConstants constants = config.constants_path
                                            ? ValidationConstants::from_json_file(
                                                  *config.constants_path)
                                            : ValidationConstants::defaults();
  if (config.quick)
    std::cout << "quick mode: reduced replica counts, results indicative only\n";
  const std::vector<CriterionResult> results =
      run_acceptance(constants, config.quick, &std::cout);
  int failed = 0;
  for (const CriterionResult& r : results)
    if (!r.passed) ++failed;
  std::cout << (config.quick ? "[quick mode] " : "") << (results.size() - failed) << "/"
            << results.size() << " acceptance criteria passed\n";
  return failed == 0 ? 0 : 1;
}

int run_command(const ExperimentConfig& config) {
  try {
    if (config.command == "simulate") return run_simulate(config);
    if (config.command == "convergence") return run_convergence(config);
    if (config.command == "estimate") return run_estimate(config);
    if (config.command == "reproduce-figures") return run_reproduce_figures(config);
    if (config.command == "validate") return run_validate(config);
    throw ConfigError("unknown command: '" + config.command + "'");
  } catch (const ResourceLimitError& e) {
    std::cerr << "resource limit: " << e.what() << '\n';
    return 3;
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace haarvol
