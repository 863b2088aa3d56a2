#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "haarvol/dyadic_grid.hpp"
#include "haarvol/rng.hpp"

namespace haarvol {

enum class DriverKind { brownian_motion, fractional_bm, multifractional_bm };

// Time-varying Hurst parameter H : [0,1] -> (1/2,1).
struct HurstFunction {
  std::function<double(double)> h;
  std::string label;

  double operator()(double s) const { return h(s); }

  static HurstFunction constant(double value);
  static HurstFunction linear(double h0, double h1);  // s -> h0 + (h1-h0)*s
};

// A sampled trajectory of the centered Gaussian driver (or of the Brownian
// integrator) on a dyadic grid. `alpha` is the declared Hoelder order used by
// the convergence-rate predictions; for (multi)fractional drivers it sits an
// alpha_margin below (the minimum of) H, because trajectories are Hoelder of
// every order strictly below H but not of order H itself.
struct GaussianPath {
  DyadicGrid grid{0};
  std::vector<double> values;
  DriverKind kind = DriverKind::brownian_motion;
  double hurst = 0.5;                  // fractional_bm only
  std::vector<double> hurst_samples;   // multifractional_bm: H at grid points
  double alpha = 1.0;
  std::uint64_t seed = 0;

  double value_at_index(std::size_t m) const { return values[m]; }
};

enum class GaussMethod {
  automatic,   // Cholesky at desk scale, spectral/interpolated above
  cholesky,    // dense Cholesky of the exact covariance
  circulant,   // circulant embedding (fBm; exact in distribution)
  hurst_interp // mBm only: interpolation across an fBm family in H
};

struct DriverOptions {
  GaussMethod method = GaussMethod::automatic;
  double alpha_margin = 0.01;
  // Spacing of the H-grid for GaussMethod::hurst_interp.
  double hurst_interp_spacing = 0.02;
};

inline constexpr int kMaxCholeskyFbmLevel = 14;
inline constexpr int kMaxCholeskyMbmLevel = 12;
// automatic switches from Cholesky to the scalable method above this level
inline constexpr int kAutoCholeskyLevel = 11;

// Standard Brownian motion: cumulative sums of N(0, 2^-level) increments,
// W(0) = 0 exactly.
GaussianPath generate_brownian(int level, RngStream& stream);

// Fractional Brownian motion with covariance (t^2H + s^2H - |t-s|^2H)/2.
GaussianPath generate_fbm(double hurst, int level, RngStream& stream,
                          const DriverOptions& opts = {});

// Multifractional Brownian motion with the normalized covariance
//   E[X(t)X(s)] = D(H(t),H(s)) * (t^h + s^h - |t-s|^h),  h = H(t)+H(s),
// where D is the Gamma/sine normalization making Var X(t) = t^(2 H(t)).
GaussianPath generate_mbm(const HurstFunction& hurst, int level, RngStream& stream,
                          const DriverOptions& opts = {});

// Covariance matrices over the positive grid points t_1..t_2^n (t_0 = 0 is
// pinned to zero and excluded). Exposed for distribution-level tests.
Eigen::MatrixXd fbm_covariance(double hurst, int level);
Eigen::MatrixXd mbm_covariance(const HurstFunction& hurst, int level);

// The mBm normalization factor D(x,y); D(H,H) = 1/2.
double mbm_covariance_scale(double x, double y);

}  // namespace haarvol
