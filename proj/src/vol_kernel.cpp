#include "haarvol/vol_kernel.hpp"

#include <cmath>
#include <stdexcept>

#include "haarvol/errors.hpp"

namespace haarvol {

VolatilityFunction::VolatilityFunction(std::function<double(double)> eval,
                                       std::function<double(double)> deriv, double bound_c,
                                       double bound_l, std::string name)
    : eval_(std::move(eval)),
      deriv_(std::move(deriv)),
      bound_c_(bound_c),
      bound_l_(bound_l),
      name_(std::move(name)) {
  if (!(bound_c_ > 0.0) || !(bound_l_ >= 0.0))
    throw std::invalid_argument("VolatilityFunction: requires c > 0 and L >= 0");
}

void VolatilityFunction::spot_check(double radius, int samples) const {
  const double fd_step = 1e-5;
  for (int i = 0; i < samples; ++i) {
    const double x = -radius + 2.0 * radius * i / (samples - 1);
    const double fx = eval_(x);
    const double dfx = deriv_(x);
    const double bound = bound_c_ * std::pow(1.0 + std::abs(x), bound_l_);
    if (!(std::abs(fx) + std::abs(dfx) <= bound * (1.0 + 1e-12)))
      throw std::invalid_argument("VolatilityFunction '" + name_ +
                                  "': polynomial bound violated at x=" + std::to_string(x));
    const double fd = (eval_(x + fd_step) - eval_(x - fd_step)) / (2.0 * fd_step);
    const double scale = std::max({1.0, std::abs(dfx), std::abs(fd)});
    if (std::abs(fd - dfx) > 1e-6 * scale)
      throw std::invalid_argument("VolatilityFunction '" + name_ +
                                  "': derivative mismatch at x=" + std::to_string(x));
  }
}

VolatilityFunction custom_poly(const std::vector<double>& coeffs) {
  if (coeffs.empty()) throw ConfigError("custom_poly: empty coefficient list");
  auto eval = [coeffs](double x) {
    double acc = 0.0;
    for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * x + coeffs[k];
    return acc;
  };
  auto deriv = [coeffs](double x) {
    double acc = 0.0;
    for (std::size_t k = coeffs.size(); k-- > 1;)
      acc = acc * x + static_cast<double>(k) * coeffs[k];
    return acc;
  };
  double c = 0.0;
  for (std::size_t k = 0; k < coeffs.size(); ++k)
    c += std::abs(coeffs[k]) * (1.0 + static_cast<double>(k));
  const double l = static_cast<double>(std::max<std::size_t>(coeffs.size() - 1, 1));
  std::string name = "custom_poly(";
  for (std::size_t k = 0; k < coeffs.size(); ++k)
    name += (k ? "," : "") + std::to_string(coeffs[k]);
  name += ")";
  return VolatilityFunction(eval, deriv, std::max(c, 1e-12), l, name);
}

VolatilityFunction preset_phi(const std::string& name) {
  if (name == "constant_one")
    return VolatilityFunction([](double) { return 1.0; }, [](double) { return 0.0; }, 1.0,
                              0.0, name);
  if (name == "affine_paper")
    return VolatilityFunction([](double x) { return 0.5 + 0.5 * x; },
                              [](double) { return 0.5; }, 1.0, 1.0, name);
  if (name == "sine_paper")
    return VolatilityFunction([](double x) { return std::sin(x); },
                              [](double x) { return std::cos(x); }, 2.0, 0.0, name);
  if (name.rfind("custom_poly(", 0) == 0 && name.back() == ')') {
    std::vector<double> coeffs;
    std::size_t pos = std::string("custom_poly(").size();
    const std::size_t end = name.size() - 1;
    while (pos < end) {
      std::size_t next = name.find(',', pos);
      if (next == std::string::npos || next > end) next = end;
      try {
        coeffs.push_back(std::stod(name.substr(pos, next - pos)));
      } catch (const std::exception&) {
        throw ConfigError("preset_phi: bad coefficient in '" + name + "'");
      }
      pos = next + 1;
    }
    return custom_poly(coeffs);
  }
  throw ConfigError("preset_phi: unknown volatility function '" + name + "'");
}

Antiderivative antiderivative(const GaussianPath& x, const VolatilityFunction& phi) {
  Antiderivative result;
  result.grid = x.grid;
  result.values.resize(x.grid.size());
  result.values[0] = 0.0;
  const double dt = x.grid.spacing();
  double acc = 0.0;
  for (std::size_t m = 1; m < result.values.size(); ++m) {
    acc += dt * phi(x.values[m - 1]);
    result.values[m] = acc;
  }
  return result;
}

namespace {

// Grid index of the dyadic point num/2^den_level, which must be on the grid.
std::size_t dyadic_index(const DyadicGrid& grid, std::size_t num, int den_level,
                         const char* who) {
  if (grid.level() < den_level)
    throw std::invalid_argument(std::string(who) + ": antiderivative grid level " +
                                std::to_string(grid.level()) +
                                " too coarse; requires level >= " + std::to_string(den_level));
  return num << (grid.level() - den_level);
}

void check_t(double t, const char* who) {
  if (!(t >= 0.0 && t <= 1.0))
    throw std::invalid_argument(std::string(who) + ": t=" + std::to_string(t) +
                                " outside [0,1]");
}

double sqrt_pow2(int j) { return std::sqrt(std::ldexp(1.0, j)); }

}  // namespace

double coeff_a(int scale, int position, double t, const Antiderivative& antider) {
  check_t(t, "coeff_a");
  if (scale < 0 || position < 0 ||
      static_cast<unsigned long long>(position) >= (1ull << scale))
    throw std::invalid_argument("coeff_a: position " + std::to_string(position) +
                                " out of range for scale " + std::to_string(scale));
  const double left = std::ldexp(static_cast<double>(position), -scale);
  const double right = std::ldexp(static_cast<double>(position + 1), -scale);
  if (t <= left) return 0.0;

  const std::size_t i_left =
      dyadic_index(antider.grid, static_cast<std::size_t>(position), scale, "coeff_a");
  const std::size_t i_mid = dyadic_index(
      antider.grid, static_cast<std::size_t>(2 * position + 1), scale + 1, "coeff_a");
  const std::size_t i_right =
      dyadic_index(antider.grid, static_cast<std::size_t>(position) + 1, scale, "coeff_a");
  const double f_left = antider.values[i_left];
  const double f_mid = antider.values[i_mid];
  const double scale_factor = sqrt_pow2(scale);

  if (t >= right) {
    const double f_right = antider.values[i_right];
    return scale_factor * (2.0 * f_mid - f_left - f_right);
  }
  // Interior: integrate up to t with the sign flip at the midpoint.
  const std::size_t i_t = antider.grid.snap_index(t);
  const double f_t = antider.values[i_t];
  if (i_t <= i_mid) return scale_factor * (f_t - f_left);
  return scale_factor * ((f_mid - f_left) - (f_t - f_mid));
}

double coeff_b(int level, int shift, double t, const Antiderivative& antider) {
  check_t(t, "coeff_b");
  if (level < 0 || shift < 0 || static_cast<unsigned long long>(shift) >= (1ull << level))
    throw std::invalid_argument("coeff_b: shift " + std::to_string(shift) +
                                " out of range for level " + std::to_string(level));
  const double left = std::ldexp(static_cast<double>(shift), -level);
  const double right = std::ldexp(static_cast<double>(shift + 1), -level);
  if (t <= left) return 0.0;

  const std::size_t i_left =
      dyadic_index(antider.grid, static_cast<std::size_t>(shift), level, "coeff_b");
  const double f_left = antider.values[i_left];
  const double scale_factor = sqrt_pow2(level);
  if (t >= right) {
    const std::size_t i_right =
        dyadic_index(antider.grid, static_cast<std::size_t>(shift) + 1, level, "coeff_b");
    return scale_factor * (antider.values[i_right] - f_left);
  }
  return scale_factor * (antider.values[antider.grid.snap_index(t)] - f_left);
}

double riemann_b_hat(int level, int shift, const GaussianPath& x,
                     const VolatilityFunction& phi) {
  if (level < 0 || shift < 0 || static_cast<unsigned long long>(shift) >= (1ull << level))
    throw std::invalid_argument("riemann_b_hat: shift " + std::to_string(shift) +
                                " out of range for level " + std::to_string(level));
  if (x.grid.level() != 2 * level)
    throw std::invalid_argument("riemann_b_hat: driver grid level " +
                                std::to_string(x.grid.level()) + " must equal 2J = " +
                                std::to_string(2 * level));
  const std::size_t cells = std::size_t{1} << level;  // fine cells per coarse cell
  const std::size_t base = static_cast<std::size_t>(shift) * cells;
  double acc = 0.0;
  for (std::size_t q = 0; q < cells; ++q) acc += phi(x.values[base + q]);
  return std::ldexp(acc, -level) / sqrt_pow2(level);  // 2^{-3J/2} * sum
}

}  // namespace haarvol
