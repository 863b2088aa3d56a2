#include "haarvol/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "haarvol/errors.hpp"

namespace haarvol {

namespace {

struct OlsFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 1.0;
  double slope_stderr = 0.0;
};

OlsFit ols_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  OlsFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = y[i] - (fit.intercept + fit.slope * x[i]);
    rss += e * e;
  }
  fit.r_squared = (syy > 0.0) ? std::max(0.0, 1.0 - rss / syy) : 1.0;
  fit.slope_stderr = (n > 2) ? std::sqrt((rss / static_cast<double>(n - 2)) / sxx) : 0.0;
  return fit;
}

double median3(double a, double b, double c) {
  return std::max(std::min(a, b), std::min(std::max(a, b), c));
}

void check_gamma(double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0))
    throw std::invalid_argument("holder_norm: gamma=" + std::to_string(gamma) +
                                " outside [0,1]");
}

// Mean |R| over the admissible signs at separation 2^-j; any_nonzero reports
// whether some increment was nonzero.
std::vector<double> abs_increment_ratios(std::span<const double> values, int level, double t0,
                                         double exponent, int j_min, int j_max,
                                         bool* any_nonzero) {
  const DyadicGrid grid(level);
  const std::size_t m0 = grid.index_of(t0);
  if (j_min < 0 || j_max < j_min || j_max > level)
    throw std::invalid_argument("h levels [" + std::to_string(j_min) + "," +
                                std::to_string(j_max) + "] invalid for grid level " +
                                std::to_string(level));
  std::vector<double> ratios;
  ratios.reserve(static_cast<std::size_t>(j_max - j_min) + 1);
  *any_nonzero = false;
  for (int j = j_min; j <= j_max; ++j) {
    const std::size_t step = std::size_t{1} << (level - j);
    const double h = std::ldexp(1.0, -j);
    double acc = 0.0;
    int used = 0;
    if (m0 + step < values.size()) {
      acc += std::abs(values[m0 + step] - values[m0]);
      ++used;
    }
    if (m0 >= step) {
      acc += std::abs(values[m0 - step] - values[m0]);
      ++used;
    }
    if (used == 0) continue;
    const double mean_abs = acc / used;
    if (mean_abs > 0.0) *any_nonzero = true;
    ratios.push_back(mean_abs / std::pow(h, exponent));
  }
  return ratios;
}

}  // namespace

HolderProfile increment_profile(std::span<const double> values, int level) {
  if (values.size() != (std::size_t{1} << level) + 1)
    throw std::invalid_argument("increment_profile: value count " +
                                std::to_string(values.size()) + " does not match level " +
                                std::to_string(level));
  if (values.size() < 2)
    throw std::invalid_argument("increment_profile: need at least 2 grid points");

  HolderProfile profile;
  profile.level = level;
  profile.pruned = values.size() > kFullScanMaxPoints;
  for (double v : values) profile.sup_abs = std::max(profile.sup_abs, std::abs(v));

  const std::size_t n = values.size();
  auto scan_distance = [&](std::size_t d) {
    double best = 0.0;
    for (std::size_t m = 0; m + d < n; ++m)
      best = std::max(best, std::abs(values[m + d] - values[m]));
    profile.distances.push_back(d);
    profile.max_diff.push_back(best);
  };

  if (!profile.pruned) {
    for (std::size_t d = 1; d < n; ++d) scan_distance(d);
  } else {
    const std::size_t window = std::size_t{1} << (level - 7);  // time distance 2^-7
    for (std::size_t d = 1; d <= window; ++d) scan_distance(d);
    for (int p = level - 6; p <= level; ++p) scan_distance(std::size_t{1} << p);
  }
  return profile;
}

double holder_norm_from_profile(const HolderProfile& profile, double gamma) {
  check_gamma(gamma);
  const double dt = std::ldexp(1.0, -profile.level);
  double quotient = 0.0;
  for (std::size_t i = 0; i < profile.distances.size(); ++i) {
    const double sep = static_cast<double>(profile.distances[i]) * dt;
    quotient = std::max(quotient, profile.max_diff[i] * std::pow(sep, -gamma));
  }
  return profile.sup_abs + quotient;
}

double holder_norm(std::span<const double> values, int level, double gamma) {
  check_gamma(gamma);
  return holder_norm_from_profile(increment_profile(values, level), gamma);
}

double holder_norm(const SimulatedPath& path, double gamma) {
  return holder_norm(path.values, path.grid.level(), gamma);
}

ExponentEstimate pointwise_exponent(std::span<const double> values, int level, double t0,
                                    int h_level_min, int h_level_max) {
  const DyadicGrid grid(level);
  const std::size_t m0 = grid.index_of(t0);
  if (h_level_min < 0 || h_level_max < h_level_min || h_level_max > level)
    throw std::invalid_argument("pointwise_exponent: h levels [" +
                                std::to_string(h_level_min) + "," +
                                std::to_string(h_level_max) + "] invalid for grid level " +
                                std::to_string(level));
  std::vector<double> xs, ys;
  for (int j = h_level_min; j <= h_level_max; ++j) {
    const std::size_t step = std::size_t{1} << (level - j);
    for (int sign = 0; sign < 2; ++sign) {
      std::size_t m;
      if (sign == 0) {
        if (m0 + step >= values.size()) continue;
        m = m0 + step;
      } else {
        if (m0 < step) continue;
        m = m0 - step;
      }
      const double inc = std::abs(values[m] - values[m0]);
      if (inc == 0.0) continue;  // log undefined; drop the point
      xs.push_back(-static_cast<double>(j));
      ys.push_back(std::log2(inc));
    }
  }
  if (xs.size() < 3)
    throw DegenerateDataError("pointwise_exponent: fewer than 3 nonzero increments at t0=" +
                              std::to_string(t0));
  const OlsFit fit = ols_fit(xs, ys);
  return ExponentEstimate{fit.slope, fit.slope_stderr, static_cast<int>(xs.size())};
}

int divergence_indicator(std::span<const double> values, int level, double t0, double epsilon,
                         int h_level_min, int h_level_max) {
  if (!(epsilon >= 0.0))
    throw std::invalid_argument("divergence_indicator: epsilon must be >= 0");
  if (h_level_max - h_level_min < 5)
    throw std::invalid_argument("divergence_indicator: need at least 6 h levels");
  bool any_nonzero = false;
  const std::vector<double> ratios = abs_increment_ratios(values, level, t0, 0.5 + epsilon,
                                                          h_level_min, h_level_max,
                                                          &any_nonzero);
  if (!any_nonzero)
    throw DegenerateDataError("divergence_indicator: all increments vanish at t0=" +
                              std::to_string(t0));
  if (ratios.size() < 6)
    throw std::invalid_argument("divergence_indicator: fewer than 6 usable h levels");
  const std::size_t n = ratios.size();
  const double coarse = median3(ratios[0], ratios[1], ratios[2]);
  const double fine = median3(ratios[n - 3], ratios[n - 2], ratios[n - 1]);
  const double tol = 1e-9 * std::max(std::abs(coarse), std::abs(fine));
  if (fine > coarse + tol) return 1;
  if (fine < coarse - tol) return -1;
  return 0;
}

double divergence_diagnostic(const std::vector<std::vector<double>>& replicas, int level,
                             double t0, double epsilon, int h_level_min, int h_level_max) {
  if (replicas.empty())
    throw std::invalid_argument("divergence_diagnostic: no replicas");
  double score = 0.0;
  for (const auto& values : replicas) {
    const int ind = divergence_indicator(values, level, t0, epsilon, h_level_min, h_level_max);
    if (ind > 0)
      score += 1.0;
    else if (ind == 0)
      score += 0.5;
  }
  return score / static_cast<double>(replicas.size());
}

double declared_alpha(const SimConfig& config) {
  switch (config.driver) {
    case DriverKind::brownian_motion:
      return 0.5 - config.driver_options.alpha_margin;
    case DriverKind::fractional_bm:
      return config.hurst - config.driver_options.alpha_margin;
    case DriverKind::multifractional_bm: {
      double h_min = 1.0;
      for (int i = 0; i <= 1024; ++i) h_min = std::min(h_min, config.hurst_fn(i / 1024.0));
      return h_min - config.driver_options.alpha_margin;
    }
  }
  return 0.5;
}

RateFit fit_rate_sequence(const std::vector<int>& levels, const std::vector<double>& errors) {
  if (levels.size() != errors.size() || levels.size() < 2)
    throw std::invalid_argument("fit_rate_sequence: need matching levels/errors, >= 2 points");
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    xs.push_back(static_cast<double>(levels[i]));
    ys.push_back(std::log2(errors[i] / std::sqrt(1.0 + levels[i])));
  }
  const OlsFit ols = ols_fit(xs, ys);
  RateFit fit;
  fit.slope = ols.slope;
  fit.intercept = ols.intercept;
  fit.r_squared = ols.r_squared;
  fit.levels = levels;
  fit.mean_errors = errors;
  return fit;
}

RateFit convergence_rate(const SimConfig& base, int j_min, int j_max, double gamma) {
  if (!(gamma >= 0.0 && gamma < 0.5))
    throw std::invalid_argument("convergence_rate: gamma must lie in [0,1/2)");
  if (j_min < 3 || j_max > 10 || j_min >= j_max)
    throw std::invalid_argument("convergence_rate: J range must satisfy 3 <= j_min < j_max <= 10");
  if (base.replicas < 5)
    throw ConfigError("convergence_rate: needs at least 5 replicas; got " +
                      std::to_string(base.replicas));

  std::vector<int> levels;
  std::vector<double> errors;
  for (int j = j_min; j <= j_max; ++j) {
    SimConfig config = base;
    config.output_level = j;
    double err_sum = 0.0;
    for (int r = 0; r < base.replicas; ++r) {
      SimConfig replica = config;
      replica.master_seed = base.master_seed ^ static_cast<std::uint64_t>(r);
      replica.replicas = 1;
      const PathTriple triple = simulate_coupled(replica, /*with_wavelet=*/false);
      std::vector<double> diff = interpolate_values(triple.fast, 2 * j);
      for (std::size_t m = 0; m < diff.size(); ++m)
        diff[m] = triple.oracle.values[m] - diff[m];
      err_sum += holder_norm(diff, 2 * j, gamma);
    }
    levels.push_back(j);
    errors.push_back(err_sum / base.replicas);
  }
  RateFit fit = fit_rate_sequence(levels, errors);
  fit.predicted_slope = -std::min(0.5 - gamma, declared_alpha(base) - 0.5);
  return fit;
}

double gaussian_moment_constant(double tau) {
  if (!(tau > 0.0))
    throw std::invalid_argument("gaussian_moment_constant: tau must be > 0");
  return std::exp2(0.5 * tau) * std::tgamma(0.5 * (tau + 1.0)) / std::tgamma(0.5);
}

double moment_equivalence_check(std::span<const double> samples, double tau) {
  if (samples.empty()) throw std::invalid_argument("moment_equivalence_check: empty input");
  if (samples.size() < 10000)
    throw std::invalid_argument("moment_equivalence_check: needs at least 10^4 samples; got " +
                                std::to_string(samples.size()));
  double m_tau = 0.0, m_2 = 0.0;
  for (double g : samples) {
    m_tau += std::pow(std::abs(g), tau);
    m_2 += g * g;
  }
  m_tau /= static_cast<double>(samples.size());
  m_2 /= static_cast<double>(samples.size());
  if (m_2 == 0.0)
    throw DegenerateDataError("moment_equivalence_check: all samples are zero");
  const double reference = gaussian_moment_constant(tau) * std::pow(m_2, 0.5 * tau);
  return std::abs(m_tau - reference) / reference;
}

double conditional_variance_check(const GaussianPath& x, const VolatilityFunction& phi,
                                  double t, int n_replicas, std::uint64_t seed) {
  if (n_replicas < 10000)
    throw std::invalid_argument("conditional_variance_check: needs at least 10^4 replicas");
  const std::size_t m_end = x.grid.index_of(t);
  const double dt = x.grid.spacing();
  std::vector<double> phi_values(m_end);
  double quadrature = 0.0;
  for (std::size_t q = 0; q < m_end; ++q) {
    phi_values[q] = phi(x.values[q]);
    quadrature += dt * phi_values[q] * phi_values[q];
  }
  if (quadrature == 0.0)
    throw DegenerateDataError("conditional_variance_check: Phi vanishes along the path on [0,t]");

  RngStream stream(seed, 2);
  const double step_sd = std::sqrt(dt);
  double sum = 0.0, sum_sq = 0.0;
  for (int r = 0; r < n_replicas; ++r) {
    double z = 0.0;
    for (std::size_t q = 0; q < m_end; ++q)
      z += phi_values[q] * step_sd * stream.next_normal();
    sum += z;
    sum_sq += z * z;
  }
  const double n = static_cast<double>(n_replicas);
  const double mean = sum / n;
  const double variance = (sum_sq - n * mean * mean) / (n - 1.0);
  return std::abs(variance - quadrature) / quadrature;
}

RegularityReport make_regularity_report(std::span<const double> values, int level,
                                        double gamma, std::span<const double> t0_list,
                                        int h_level_min, int h_level_max, double epsilon) {
  RegularityReport report;
  report.gamma = gamma;
  const HolderProfile profile = increment_profile(values, level);
  report.holder_norm = holder_norm_from_profile(profile, gamma);
  report.diagnostics["sup_norm"] = profile.sup_abs;
  report.diagnostics["grid_level"] = level;
  for (double t0 : t0_list) {
    const ExponentEstimate est = pointwise_exponent(values, level, t0, h_level_min, h_level_max);
    report.pointwise.push_back(
        PointwiseRecord{t0, std::clamp(est.estimate, 0.0, 1.5), est.std_error});
  }
  if (!t0_list.empty())
    report.diagnostics["divergence_indicator"] = divergence_indicator(
        values, level, t0_list.front(), epsilon, h_level_min, h_level_max);
  return report;
}

std::vector<double> lambda_bound_statistic(const HaarCoefficients& coeffs) {
  std::vector<double> stats;
  stats.reserve(coeffs.lambdas.size());
  for (std::size_t j = 0; j < coeffs.lambdas.size(); ++j) {
    double max_abs = 0.0;
    for (double lambda : coeffs.lambdas[j]) max_abs = std::max(max_abs, std::abs(lambda));
    stats.push_back(max_abs / std::sqrt(1.0 + static_cast<double>(j)));
  }
  return stats;
}

}  // namespace haarvol
