#include "haarvol/haar_basis.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace haarvol {

namespace {

void check_unit_interval(double s, const char* who) {
  if (!(s >= 0.0 && s <= 1.0))
    throw std::invalid_argument(std::string(who) + ": s=" + std::to_string(s) +
                                " outside [0,1]");
}

double sqrt_pow2(int j) { return std::sqrt(std::ldexp(1.0, j)); }

}  // namespace

double eval_psi(const HaarIndex& idx, double s) {
  check_unit_interval(s, "eval_psi");
  if (idx.scale < 0 || idx.position < 0 ||
      static_cast<unsigned long long>(idx.position) >= (1ull << idx.scale))
    throw std::invalid_argument("eval_psi: position " + std::to_string(idx.position) +
                                " out of range for scale " + std::to_string(idx.scale));
  const double left = std::ldexp(static_cast<double>(idx.position), -idx.scale);
  const double mid = std::ldexp(static_cast<double>(2 * idx.position + 1), -(idx.scale + 1));
  const double right = std::ldexp(static_cast<double>(idx.position + 1), -idx.scale);
  if (s < left || s >= right) return 0.0;
  return (s < mid) ? sqrt_pow2(idx.scale) : -sqrt_pow2(idx.scale);
}

double eval_scaling(int level, int shift, double s) {
  check_unit_interval(s, "eval_scaling");
  if (level < 0 || shift < 0 || static_cast<unsigned long long>(shift) >= (1ull << level))
    throw std::invalid_argument("eval_scaling: shift " + std::to_string(shift) +
                                " out of range for level " + std::to_string(level));
  const double left = std::ldexp(static_cast<double>(shift), -level);
  const double right = std::ldexp(static_cast<double>(shift + 1), -level);
  if (s < left || s >= right) return 0.0;
  return sqrt_pow2(level);
}

std::vector<double> scaling_coeffs(const GaussianPath& w, int level) {
  if (level < 0) throw std::invalid_argument("scaling_coeffs: level must be >= 0");
  if (w.grid.level() < level)
    throw std::invalid_argument("scaling_coeffs: path grid level " +
                                std::to_string(w.grid.level()) +
                                " too coarse; requires level >= " + std::to_string(level));
  const int shift = w.grid.level() - level;
  const std::size_t stride = std::size_t{1} << shift;
  const std::size_t count = std::size_t{1} << level;
  const double scale = sqrt_pow2(level);
  std::vector<double> delta(count);
  for (std::size_t l = 0; l < count; ++l)
    delta[l] = scale * (w.values[(l + 1) * stride] - w.values[l * stride]);
  return delta;
}

HaarCoefficients wavelet_coeffs(const GaussianPath& w, int max_scale,
                                const std::vector<int>& scaling_levels) {
  if (max_scale < 0) throw std::invalid_argument("wavelet_coeffs: max_scale must be >= 0");
  if (w.grid.level() < max_scale + 1)
    throw std::invalid_argument("wavelet_coeffs: path grid level " +
                                std::to_string(w.grid.level()) +
                                " too coarse for max_scale " + std::to_string(max_scale) +
                                "; requires level >= " + std::to_string(max_scale + 1));

  HaarCoefficients coeffs;
  coeffs.source_level = w.grid.level();
  coeffs.delta00 = w.values.back();  // W(1)
  coeffs.lambdas.resize(static_cast<std::size_t>(max_scale) + 1);
  const int n = w.grid.level();
  for (int j = 0; j <= max_scale; ++j) {
    const std::size_t count = std::size_t{1} << j;
    const std::size_t stride = std::size_t{1} << (n - j);      // cell width in grid steps
    const std::size_t half = std::size_t{1} << (n - j - 1);    // half cell
    const double scale = sqrt_pow2(j);
    auto& row = coeffs.lambdas[static_cast<std::size_t>(j)];
    row.resize(count);
    for (std::size_t k = 0; k < count; ++k) {
      const double w_left = w.values[k * stride];
      const double w_mid = w.values[k * stride + half];
      const double w_right = w.values[(k + 1) * stride];
      row[k] = -scale * (w_right - 2.0 * w_mid + w_left);
    }
  }
  for (int level : scaling_levels) coeffs.scaling[level] = scaling_coeffs(w, level);
  return coeffs;
}

}  // namespace haarvol
