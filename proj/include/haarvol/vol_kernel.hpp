#pragma once

#include <functional>
#include <string>
#include <vector>

#include "haarvol/gp_driver.hpp"

namespace haarvol {

// The deterministic C^1 volatility map Phi with its derivative and the
// declared polynomial bound |Phi(x)| + |Phi'(x)| <= c (1+|x|)^L. The bound is
// trusted after a sampled spot check, not verified symbolically.
class VolatilityFunction {
 public:
  VolatilityFunction(std::function<double(double)> eval, std::function<double(double)> deriv,
                     double bound_c, double bound_l, std::string name);

  double operator()(double x) const { return eval_(x); }
  double deriv(double x) const { return deriv_(x); }
  double bound_c() const { return bound_c_; }
  double bound_l() const { return bound_l_; }
  const std::string& name() const { return name_; }

  // Samples [-radius, radius]; throws std::invalid_argument if the declared
  // bound fails at any sample point or if deriv disagrees with a central
  // finite difference of eval.
  void spot_check(double radius = 10.0, int samples = 10000) const;

 private:
  std::function<double(double)> eval_;
  std::function<double(double)> deriv_;
  double bound_c_;
  double bound_l_;
  std::string name_;
};

// Presets: "constant_one", "affine_paper" (0.5 + 0.5x), "sine_paper" (sin x),
// and "custom_poly(c0,c1,...)" for sum c_k x^k. Unknown names -> ConfigError.
VolatilityFunction preset_phi(const std::string& name);
VolatilityFunction custom_poly(const std::vector<double>& coeffs);

// Left-point Riemann cumulative sums of Phi(X(.)) over the grid of X:
//   values[m] = 2^-n * sum_{q<m} Phi(X(q/2^n)).
struct Antiderivative {
  DyadicGrid grid{0};
  std::vector<double> values;

  // Value at t snapped to the nearest grid point.
  double at(double t) const { return values[grid.snap_index(t)]; }
};

Antiderivative antiderivative(const GaussianPath& x, const VolatilityFunction& phi);

// Wavelet coefficient process a_{j,k}(t) = int K(t,s) psi_{j,k}(s) ds evaluated
// through the antiderivative: zero for t <= k/2^j, a truncated integral with a
// sign flip at the midpoint for interior t (t snapped to the fine grid), and
// the t-independent second increment once t >= (k+1)/2^j.
double coeff_a(int scale, int position, double t, const Antiderivative& antider);

// Scaling coefficient process b_{J,l}(t) = int K(t,s) phi_{J,l}(s) ds.
double coeff_b(int level, int shift, double t, const Antiderivative& antider);

// Direct Riemann sum for the saturated scaling coefficient on a fine grid of
// exactly level 2J: 2^{-3J/2} sum_q Phi(X(l/2^J + q/2^{2J})). Coincides with
// coeff_b at t >= (l+1)/2^J computed from the left-point antiderivative.
double riemann_b_hat(int level, int shift, const GaussianPath& x,
                     const VolatilityFunction& phi);

}  // namespace haarvol
