#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "haarvol/gp_driver.hpp"
#include "haarvol/haar_basis.hpp"
#include "haarvol/simulator.hpp"
#include "haarvol/vol_kernel.hpp"

namespace haarvol {

// Largest grid for which the discrete Hoelder norm scans every pair; above it
// a two-scale scheme is used (all pairs within time distance 2^-7 plus
// dyadic separations), which lower-bounds the full discrete norm.
inline constexpr std::size_t kFullScanMaxPoints = 4097;

// Maximum |u(t+d)-u(t)| per separation class d, plus the sup norm. A profile
// prices any gamma in O(#classes), so norms over several gammas share one scan.
struct HolderProfile {
  int level = 0;
  bool pruned = false;
  double sup_abs = 0.0;
  std::vector<std::size_t> distances;
  std::vector<double> max_diff;
};

HolderProfile increment_profile(std::span<const double> values, int level);
double holder_norm_from_profile(const HolderProfile& profile, double gamma);

// Discrete Hoelder norm max_m |u| + max_pairs |u(t1)-u(t2)| / (t2-t1)^gamma
// over the dyadic grid of the given level.
double holder_norm(std::span<const double> values, int level, double gamma);
double holder_norm(const SimulatedPath& path, double gamma);

struct ExponentEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  int points_used = 0;
};

// OLS slope of log2|u(t0+h)-u(t0)| against log2|h| over h = +-2^-j,
// j = h_level_min..h_level_max (signs kept inside [0,1]). Zero increments are
// excluded; fewer than three usable points raises DegenerateDataError.
ExponentEstimate pointwise_exponent(std::span<const double> values, int level, double t0,
                                    int h_level_min, int h_level_max);

// Per-path indicator for the small-scale divergence of
// |R_{t0,h}| = |u(t0+h)-u(t0)| / h^{1/2+eps}: +1 if the median over the three
// finest levels strictly exceeds the median over the three coarsest, -1 if it
// is strictly smaller, 0 on a tie (exact power laws).
int divergence_indicator(std::span<const double> values, int level, double t0, double epsilon,
                         int h_level_min, int h_level_max);

// Fraction of replicas whose indicator is +1, counting ties as 1/2.
double divergence_diagnostic(const std::vector<std::vector<double>>& replicas, int level,
                             double t0, double epsilon, int h_level_min, int h_level_max);

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double predicted_slope = 0.0;
  std::vector<int> levels;
  std::vector<double> mean_errors;  // e_J per level, replica-averaged
};

// Declared Hoelder order of the configured driver (used for predictions).
double declared_alpha(const SimConfig& config);

// OLS of log2(e_J / sqrt(1+J)) against J; the regression behind convergence_rate.
RateFit fit_rate_sequence(const std::vector<int>& levels, const std::vector<double>& errors);

// Convergence of the iterative scheme toward the oracle: for each J the
// error e_J is the C^gamma norm, on the level-2J grid, of
// (oracle - linear interpolation of the fast route), averaged over replicas;
// fits log2(e_J / sqrt(1+J)) against J. The expected slope is
// -min(1/2-gamma, alpha-1/2).
RateFit convergence_rate(const SimConfig& base, int j_min, int j_max, double gamma);

// c_tau = 2^{tau/2} Gamma((tau+1)/2) / Gamma(1/2); E|G|^tau = c_tau (E G^2)^{tau/2}.
double gaussian_moment_constant(double tau);

// Relative deviation |mean|G|^tau - c_tau (mean G^2)^{tau/2}| / reference.
double moment_equivalence_check(std::span<const double> samples, double tau);

// Relative deviation between the empirical variance of the Ito sum Z(t) over
// fresh W replicas (X held fixed) and the left-point quadrature of
// int_0^t Phi(X)^2 ds.
double conditional_variance_check(const GaussianPath& x, const VolatilityFunction& phi,
                                  double t, int n_replicas, std::uint64_t seed = 0);

// M_j = max_k |lambda_{j,k}| / sqrt(1+j) per scale.
std::vector<double> lambda_bound_statistic(const HaarCoefficients& coeffs);

struct PointwiseRecord {
  double t0 = 0.0;
  double estimate = 0.0;
  double std_error = 0.0;
};

struct RegularityReport {
  double gamma = 0.0;
  double holder_norm = 0.0;
  std::vector<PointwiseRecord> pointwise;  // estimates clamped to [0, 1.5]
  RateFit rate_fit;
  std::map<std::string, double> diagnostics;
};

// Norm, exponent estimates (clamped to the [0,1.5] reporting range) and the
// divergence indicator for one sampled path.
RegularityReport make_regularity_report(std::span<const double> values, int level,
                                        double gamma, std::span<const double> t0_list,
                                        int h_level_min, int h_level_max, double epsilon);

}  // namespace haarvol
