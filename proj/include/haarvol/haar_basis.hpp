#pragma once

#include <map>
#include <vector>

#include "haarvol/gp_driver.hpp"

namespace haarvol {

// Index of the Haar wavelet psi_{j,k}: scale j >= 0, position k in 0..2^j-1.
struct HaarIndex {
  int scale = 0;
  int position = 0;
};

// Haar wavelet psi_{j,k} = 2^{j/2} (1_[k/2^j, (2k+1)/2^{j+1}) - 1_[(2k+1)/2^{j+1}, (k+1)/2^j)).
// All supports are half-open, so every basis function evaluates to 0 at s = 1.
double eval_psi(const HaarIndex& idx, double s);

// Scaling function phi_{J,l} = 2^{J/2} 1_[l/2^J, (l+1)/2^J).
double eval_scaling(int level, int shift, double s);

// Gaussian coefficients of a sampled Brownian path:
//   delta00       = W(1)
//   lambdas[j][k] = -2^{j/2} (W((k+1)/2^j) - 2 W((2k+1)/2^{j+1}) + W(k/2^j))
//   scaling[J][l] = 2^{J/2} (W((l+1)/2^J) - W(l/2^J))
// computed exactly from grid values, never by quadrature.
struct HaarCoefficients {
  double delta00 = 0.0;
  std::vector<std::vector<double>> lambdas;  // lambdas[j] has 2^j entries
  std::map<int, std::vector<double>> scaling;
  int source_level = 0;

  int max_scale() const { return static_cast<int>(lambdas.size()) - 1; }
};

// Details up to scale max_scale (inclusive); requires w.grid.level >= max_scale+1.
// Scaling coefficient arrays are attached for each level in scaling_levels.
HaarCoefficients wavelet_coeffs(const GaussianPath& w, int max_scale,
                                const std::vector<int>& scaling_levels = {});

// delta_{J,l} for l = 0..2^J-1; requires w.grid.level >= J.
std::vector<double> scaling_coeffs(const GaussianPath& w, int level);

}  // namespace haarvol
