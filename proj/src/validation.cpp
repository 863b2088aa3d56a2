#include "haarvol/validation.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "haarvol/cli.hpp"
#include "haarvol/errors.hpp"
#include "haarvol/regularity.hpp"

namespace haarvol {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

double ols_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(xs.size());
  my /= static_cast<double>(xs.size());
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  return sxy / sxx;
}

SimConfig fbm_config(double hurst, int output_level, const std::string& phi,
                     std::uint64_t seed) {
  SimConfig config;
  config.driver = DriverKind::fractional_bm;
  config.hurst = hurst;
  config.output_level = output_level;
  config.phi_name = phi;
  config.master_seed = seed;
  return config;
}

CriterionResult criterion_1(const ValidationConstants& c, bool) {
  CriterionResult result{1, "exact degenerate identity (Phi==1 reproduces W)"};
  const auto start = std::chrono::steady_clock::now();

  SimConfig config;
  config.driver = DriverKind::brownian_motion;
  config.output_level = c.c1_output_level;
  config.phi_name = "constant_one";
  config.master_seed = c.base_seed;
  const CoupledDraw draw = coupled_draw(config);
  const SimulatedPath fast = simulate_fast(config);
  const int shift = config.fine_level() - config.output_level;
  double max_err = 0.0;
  for (std::size_t m = 0; m < fast.values.size(); ++m)
    max_err = std::max(max_err, std::abs(fast.values[m] - draw.w.values[m << shift]));

  result.seconds = seconds_since(start);
  result.passed = max_err <= c.c1_tol && result.seconds < c.c1_seconds;
  result.detail = "max |fast - W| = " + fmt(max_err) + " (tol " + fmt(c.c1_tol) + ")";
  return result;
}

CriterionResult criterion_2(const ValidationConstants& c, bool quick) {
  CriterionResult result{2, "projection equivalence (wavelet form vs scaling form)"};
  const auto start = std::chrono::steady_clock::now();

  const int seeds = quick ? 2 : c.c2_seeds;
  double max_err = 0.0;
  for (const char* phi : {"affine_paper", "sine_paper"}) {
    for (int i = 0; i < seeds; ++i) {
      SimConfig config = fbm_config(c.c2_hurst, c.c2_output_level, phi,
                                    c.base_seed + static_cast<std::uint64_t>(i));
      const PathTriple triple =
          simulate_coupled(config, /*with_wavelet=*/true, config.output_level - 1);
      for (std::size_t m = 0; m < triple.fast.values.size(); ++m)
        max_err =
            std::max(max_err, std::abs(triple.wavelet.values[m] - triple.fast.values[m]));
    }
  }

  result.seconds = seconds_since(start);
  result.passed = max_err <= c.c2_tol && result.seconds < c.c2_seconds;
  result.detail = "max grid discrepancy = " + fmt(max_err) + " (tol " + fmt(c.c2_tol) + ")";
  return result;
}

CriterionResult criterion_3(const ValidationConstants& c, bool quick) {
  CriterionResult result{3, "convergence rate of the iterative route"};
  const auto start = std::chrono::steady_clock::now();

  SimConfig base = fbm_config(c.c3_hurst, c.c3_j_min, "sine_paper", c.base_seed);
  base.replicas = quick ? 5 : c.c3_replicas;
  const RateFit fit = convergence_rate(base, c.c3_j_min, c.c3_j_max, c.c3_gamma);

  result.seconds = seconds_since(start);
  const double err = std::abs(fit.slope - c.c3_slope_center);
  result.passed = err <= c.c3_slope_tol && result.seconds < c.c3_seconds;
  result.detail = "fitted slope = " + fmt(fit.slope) + " (predicted " +
                  fmt(fit.predicted_slope) + " +- " + fmt(c.c3_slope_tol) +
                  ", r2 = " + fmt(fit.r_squared) + ")";
  return result;
}

CriterionResult criterion_4(const ValidationConstants& c, bool quick) {
  CriterionResult result{4, "pointwise Hoelder exponent of Z at t0=1/2"};
  const auto start = std::chrono::steady_clock::now();

  const int replicas = quick ? 10 : c.c4_replicas;
  double sum = 0.0;
  for (int r = 0; r < replicas; ++r) {
    SimConfig config = fbm_config(c.c4_hurst, c.c4_output_level, "sine_paper",
                                  c.base_seed ^ static_cast<std::uint64_t>(r));
    const PathTriple triple = simulate_coupled(config, /*with_wavelet=*/false);
    const ExponentEstimate est =
        pointwise_exponent(triple.oracle.values, triple.oracle.grid.level(), c.c4_t0,
                           c.c4_h_min, c.c4_h_max);
    sum += est.estimate;
  }
  const double mean = sum / replicas;

  result.seconds = seconds_since(start);
  result.passed = mean >= c.c4_lo && mean <= c.c4_hi && result.seconds < c.c4_seconds;
  result.detail = "mean exponent estimate = " + fmt(mean) + " (band [" + fmt(c.c4_lo) + "," +
                  fmt(c.c4_hi) + "])";
  return result;
}

CriterionResult criterion_5(const ValidationConstants& c, bool quick) {
  CriterionResult result{5, "conditional variance matches the quadrature"};
  const auto start = std::chrono::steady_clock::now();

  RngStream stream_x(c.base_seed, 0);
  const GaussianPath x = generate_fbm(c.c5_hurst, c.c5_x_level, stream_x);
  const VolatilityFunction phi = preset_phi("sine_paper");
  const int replicas = quick ? 10000 : c.c5_replicas;
  const double deviation = conditional_variance_check(x, phi, c.c5_t, replicas, c.base_seed);

  result.seconds = seconds_since(start);
  result.passed = deviation <= c.c5_rel_tol && result.seconds < c.c5_seconds;
  result.detail =
      "relative deviation = " + fmt(deviation) + " (tol " + fmt(c.c5_rel_tol) + ")";
  return result;
}

CriterionResult criterion_6(const ValidationConstants& c, bool quick) {
  CriterionResult result{6, "Gaussian moment constant c_tau"};
  const auto start = std::chrono::steady_clock::now();

  const double sqrt_2_over_pi = std::sqrt(2.0 / M_PI);
  const double e1 = std::abs(gaussian_moment_constant(1.0) - sqrt_2_over_pi);
  const double e2 = std::abs(gaussian_moment_constant(2.0) - 1.0);
  const double e4 = std::abs(gaussian_moment_constant(4.0) - 3.0);
  const double exact_err = std::max({e1, e2, e4});

  const int n = quick ? 100000 : c.c6_samples;
  std::vector<double> samples(static_cast<std::size_t>(n));
  RngStream stream(c.base_seed, 3);
  for (double& s : samples) s = stream.next_normal();
  const double deviation = moment_equivalence_check(samples, 1.0);

  result.seconds = seconds_since(start);
  result.passed =
      exact_err <= c.c6_exact_tol && deviation < c.c6_dev_tol && result.seconds < c.c6_seconds;
  result.detail = "max |c_tau - exact| = " + fmt(exact_err) + ", MC deviation = " +
                  fmt(deviation) + " (tol " + fmt(c.c6_dev_tol) + ")";
  return result;
}

CriterionResult criterion_7(const ValidationConstants& c, bool quick) {
  CriterionResult result{7, "wavelet detail bound |lambda| <= 2.5 sqrt(1+j)"};
  const auto start = std::chrono::steady_clock::now();

  const int seeds = quick ? 10 : c.c7_seeds;
  const int min_pass = quick ? seeds - 1 : c.c7_min_pass;
  int pass_count = 0;
  double slope_sum = 0.0;
  double worst = 0.0;
  for (int i = 0; i < seeds; ++i) {
    RngStream stream(c.base_seed + static_cast<std::uint64_t>(i), 1);
    const GaussianPath w = generate_brownian(c.c7_max_scale + 1, stream);
    const HaarCoefficients coeffs = wavelet_coeffs(w, c.c7_max_scale);
    const std::vector<double> stats = lambda_bound_statistic(coeffs);
    double max_stat = 0.0;
    for (double m : stats) max_stat = std::max(max_stat, m);
    worst = std::max(worst, max_stat);
    if (max_stat <= c.c7_bound) ++pass_count;
    std::vector<double> xs, ys;
    for (int j = c.c7_trend_j_min; j <= c.c7_max_scale; ++j) {
      xs.push_back(j);
      ys.push_back(stats[static_cast<std::size_t>(j)]);
    }
    slope_sum += ols_slope(xs, ys);
  }
  const double mean_slope = slope_sum / seeds;

  result.seconds = seconds_since(start);
  result.passed = pass_count >= min_pass && std::abs(mean_slope) <= c.c7_trend_band &&
                  result.seconds < c.c7_seconds;
  result.detail = std::to_string(pass_count) + "/" + std::to_string(seeds) +
                  " seeds within bound (worst " + fmt(worst) + "), trend slope = " +
                  fmt(mean_slope) + " (band +-" + fmt(c.c7_trend_band) + ")";
  return result;
}

CriterionResult criterion_8(const ValidationConstants& c, bool) {
  CriterionResult result{8, "decay of saturated coefficients a_{j,k}(1)"};
  const auto start = std::chrono::steady_clock::now();

  RngStream stream_x(c.base_seed, 0);
  const GaussianPath x = generate_fbm(c.c8_hurst, c.c8_fine_level, stream_x);
  const Antiderivative antider = antiderivative(x, preset_phi("sine_paper"));
  std::vector<double> xs, ys;
  for (int j = c.c8_j_min; j <= c.c8_j_max; ++j) {
    double max_abs = 0.0;
    for (int k = 0; k < (1 << j); ++k)
      max_abs = std::max(max_abs, std::abs(coeff_a(j, k, 1.0, antider)));
    xs.push_back(j);
    ys.push_back(std::log2(max_abs));
  }
  const double slope = ols_slope(xs, ys);

  result.seconds = seconds_since(start);
  result.passed = slope <= c.c8_slope_max && result.seconds < c.c8_seconds;
  result.detail = "fitted decay slope = " + fmt(slope) + " (must be <= " +
                  fmt(c.c8_slope_max) + ")";
  return result;
}

bool same_bytes(const std::filesystem::path& a, const std::filesystem::path& b) {
  std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
  if (!fa || !fb) return false;
  std::ostringstream sa, sb;
  sa << fa.rdbuf();
  sb << fb.rdbuf();
  return sa.str() == sb.str();
}

CriterionResult criterion_9(const ValidationConstants&, bool) {
  CriterionResult result{9, "figure reproduction is byte-identical"};
  const auto start = std::chrono::steady_clock::now();

  namespace fs = std::filesystem;
  const fs::path base = fs::temp_directory_path() / "haarvol_figure_check";
  const fs::path dir_a = base / "a";
  const fs::path dir_b = base / "b";
  fs::remove_all(base);
  fs::create_directories(dir_a);
  fs::create_directories(dir_b);
  write_figure_files(dir_a, kFigureSeed);
  write_figure_files(dir_b, kFigureSeed);

  bool all_same = true;
  int files = 0;
  for (const auto& entry : fs::directory_iterator(dir_a)) {
    ++files;
    if (!same_bytes(entry.path(), dir_b / entry.path().filename())) all_same = false;
  }
  fs::remove_all(base);

  result.seconds = seconds_since(start);
  result.passed = all_same && files >= 3 && result.seconds < 60.0;
  result.detail = std::to_string(files) + " files compared, " +
                  (all_same ? "all identical" : "MISMATCH");
  return result;
}

CriterionResult criterion_10(const ValidationConstants& c, bool quick) {
  CriterionResult result{10, "regularity dichotomy under grid refinement"};
  const auto start = std::chrono::steady_clock::now();

  const int replicas = quick ? 5 : c.c10_replicas;
  const int steps = (c.c10_level_hi - c.c10_level_lo) / 2;  // 2-level refinements
  std::map<double, double> growth_sum;  // per gamma, full-window factor
  double per_two_level_sum = 0.0;
  std::vector<double> gammas = c.c10_stable_gammas;
  gammas.push_back(c.c10_blowup_gamma);

  for (int r = 0; r < replicas; ++r) {
    SimConfig config = fbm_config(c.c10_hurst, c.c10_level_hi / 2, "sine_paper",
                                  c.base_seed ^ static_cast<std::uint64_t>(r));
    const PathTriple triple = simulate_coupled(config, /*with_wavelet=*/false);
    const HolderProfile profile_lo = increment_profile(
        restrict_values(triple.oracle, c.c10_level_lo), c.c10_level_lo);
    const HolderProfile profile_hi =
        increment_profile(triple.oracle.values, c.c10_level_hi);
    for (double gamma : gammas) {
      const double lo = holder_norm_from_profile(profile_lo, gamma);
      const double hi = holder_norm_from_profile(profile_hi, gamma);
      growth_sum[gamma] += hi / lo;
      if (gamma == c.c10_blowup_gamma)
        per_two_level_sum += std::pow(hi / lo, 1.0 / steps);
    }
  }

  bool stable_ok = true;
  std::string stable_detail;
  for (double gamma : c.c10_stable_gammas) {
    const double mean = growth_sum[gamma] / replicas;
    if (!(mean < c.c10_stable_max_growth)) stable_ok = false;
    stable_detail += " g" + fmt(gamma) + ":" + fmt(mean);
  }
  const double blowup_per_step = per_two_level_sum / replicas;
  const double blowup_total = growth_sum[c.c10_blowup_gamma] / replicas;
  const bool blowup_ok = blowup_per_step > c.c10_blowup_min_growth;

  result.seconds = seconds_since(start);
  result.passed = stable_ok && blowup_ok && result.seconds < c.c10_seconds;
  result.detail = "stable growth" + stable_detail + " (< " + fmt(c.c10_stable_max_growth) +
                  "); gamma=" + fmt(c.c10_blowup_gamma) +
                  " growth/2-levels = " + fmt(blowup_per_step) + " (total 10->16 " +
                  fmt(blowup_total) + ", must be > " + fmt(c.c10_blowup_min_growth) + ")";
  return result;
}

}  // namespace

ValidationConstants ValidationConstants::from_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("constants file not readable: " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ConfigError("constants file corrupted: " + std::string(e.what()));
  }
  if (!j.is_object()) throw ConfigError("constants file corrupted: not a JSON object");

  ValidationConstants c;
  std::map<std::string, std::function<void(const nlohmann::json&)>> setters;
  auto bind_double = [&](const char* key, double& field) {
    setters[key] = [&field, key](const nlohmann::json& v) {
      if (!v.is_number()) throw ConfigError(std::string("constants field not numeric: ") + key);
      field = v.get<double>();
    };
  };
  auto bind_int = [&](const char* key, int& field) {
    setters[key] = [&field, key](const nlohmann::json& v) {
      if (!v.is_number_integer())
        throw ConfigError(std::string("constants field not an integer: ") + key);
      field = v.get<int>();
    };
  };
  setters["schema_version"] = [&c](const nlohmann::json& v) {
    if (!v.is_string() || v.get<std::string>() != c.schema_version)
      throw ConfigError("constants schema_version mismatch (expected " + c.schema_version + ")");
  };
  setters["base_seed"] = [&c](const nlohmann::json& v) {
    if (!v.is_number_unsigned() && !v.is_number_integer())
      throw ConfigError("constants field not an integer: base_seed");
    c.base_seed = v.get<std::uint64_t>();
  };
  setters["c10_stable_gammas"] = [&c](const nlohmann::json& v) {
    if (!v.is_array()) throw ConfigError("constants field not an array: c10_stable_gammas");
    c.c10_stable_gammas.clear();
    for (const auto& g : v) c.c10_stable_gammas.push_back(g.get<double>());
  };

  bind_int("c1_output_level", c.c1_output_level);
  bind_double("c1_tol", c.c1_tol);
  bind_double("c1_seconds", c.c1_seconds);
  bind_int("c2_output_level", c.c2_output_level);
  bind_int("c2_seeds", c.c2_seeds);
  bind_double("c2_hurst", c.c2_hurst);
  bind_double("c2_tol", c.c2_tol);
  bind_double("c2_seconds", c.c2_seconds);
  bind_double("c3_hurst", c.c3_hurst);
  bind_double("c3_gamma", c.c3_gamma);
  bind_int("c3_j_min", c.c3_j_min);
  bind_int("c3_j_max", c.c3_j_max);
  bind_int("c3_replicas", c.c3_replicas);
  bind_double("c3_slope_center", c.c3_slope_center);
  bind_double("c3_slope_tol", c.c3_slope_tol);
  bind_double("c3_seconds", c.c3_seconds);
  bind_double("c4_hurst", c.c4_hurst);
  bind_int("c4_output_level", c.c4_output_level);
  bind_int("c4_replicas", c.c4_replicas);
  bind_double("c4_t0", c.c4_t0);
  bind_int("c4_h_min", c.c4_h_min);
  bind_int("c4_h_max", c.c4_h_max);
  bind_double("c4_lo", c.c4_lo);
  bind_double("c4_hi", c.c4_hi);
  bind_double("c4_seconds", c.c4_seconds);
  bind_double("c5_hurst", c.c5_hurst);
  bind_int("c5_x_level", c.c5_x_level);
  bind_double("c5_t", c.c5_t);
  bind_int("c5_replicas", c.c5_replicas);
  bind_double("c5_rel_tol", c.c5_rel_tol);
  bind_double("c5_seconds", c.c5_seconds);
  bind_double("c6_exact_tol", c.c6_exact_tol);
  bind_int("c6_samples", c.c6_samples);
  bind_double("c6_dev_tol", c.c6_dev_tol);
  bind_double("c6_seconds", c.c6_seconds);
  bind_int("c7_seeds", c.c7_seeds);
  bind_int("c7_max_scale", c.c7_max_scale);
  bind_double("c7_bound", c.c7_bound);
  bind_int("c7_min_pass", c.c7_min_pass);
  bind_int("c7_trend_j_min", c.c7_trend_j_min);
  bind_double("c7_trend_band", c.c7_trend_band);
  bind_double("c7_seconds", c.c7_seconds);
  bind_double("c8_hurst", c.c8_hurst);
  bind_int("c8_fine_level", c.c8_fine_level);
  bind_int("c8_j_min", c.c8_j_min);
  bind_int("c8_j_max", c.c8_j_max);
  bind_double("c8_slope_max", c.c8_slope_max);
  bind_double("c8_seconds", c.c8_seconds);
  bind_double("c9_seconds", c.c9_seconds);
  bind_double("c10_hurst", c.c10_hurst);
  bind_int("c10_level_lo", c.c10_level_lo);
  bind_int("c10_level_hi", c.c10_level_hi);
  bind_int("c10_replicas", c.c10_replicas);
  bind_double("c10_stable_max_growth", c.c10_stable_max_growth);
  bind_double("c10_blowup_gamma", c.c10_blowup_gamma);
  bind_double("c10_blowup_min_growth", c.c10_blowup_min_growth);
  bind_double("c10_seconds", c.c10_seconds);

  for (const auto& [key, value] : j.items()) {
    auto it = setters.find(key);
    if (it == setters.end()) throw ConfigError("constants file has unknown field: " + key);
    it->second(value);
  }
  return c;
}

std::string format_criterion_line(const CriterionResult& r) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "[%s] criterion %2d: %s — %s (%.1fs)",
                r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(), r.detail.c_str(),
                r.seconds);
  return buf;
}

std::vector<CriterionResult> run_acceptance(const ValidationConstants& constants, bool quick,
                                            std::ostream* progress) {
  using Runner = CriterionResult (*)(const ValidationConstants&, bool);
  const Runner runners[] = {criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
                            criterion_6, criterion_7, criterion_8, criterion_9, criterion_10};
  std::vector<CriterionResult> results;
  for (Runner runner : runners) {
    results.push_back(runner(constants, quick));
    if (progress) (*progress) << format_criterion_line(results.back()) << std::endl;
  }
  return results;
}

}  // namespace haarvol
