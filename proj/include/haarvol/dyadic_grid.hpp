#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "haarvol/errors.hpp"

namespace haarvol {

// Uniform grid t_m = m / 2^n on [0,1], m = 0..2^n. All simulation and
// coefficient indices in this library live on such grids; point() is exact
// in IEEE arithmetic (ldexp of an integer).
class DyadicGrid {
 public:
  static constexpr int kMaxLevel = 30;  // 2^30 + 1 points is the hard cap

  explicit DyadicGrid(int level) : level_(level) {
    if (level < 0) throw std::invalid_argument("DyadicGrid: level must be >= 0");
    if (level > kMaxLevel)
      throw ResourceLimitError("DyadicGrid: level " + std::to_string(level) +
                               " exceeds max level " + std::to_string(kMaxLevel) +
                               " (grid would exceed ~10^9 points)");
  }

  int level() const { return level_; }
  std::size_t num_cells() const { return std::size_t{1} << level_; }
  std::size_t size() const { return num_cells() + 1; }
  double spacing() const { return std::ldexp(1.0, -level_); }
  double point(std::size_t m) const { return std::ldexp(static_cast<double>(m), -level_); }

  std::vector<double> points() const {
    std::vector<double> p(size());
    for (std::size_t m = 0; m < p.size(); ++m) p[m] = point(m);
    return p;
  }

  // Index of the grid point equal to t, or throws if t is not a grid point
  // (within one ulp of m/2^n).
  std::size_t index_of(double t) const {
    const double scaled = std::ldexp(t, level_);
    const double rounded = std::round(scaled);
    if (rounded < 0.0 || rounded > static_cast<double>(num_cells()) ||
        std::abs(scaled - rounded) > 1e-9)
      throw std::invalid_argument("DyadicGrid: t=" + std::to_string(t) +
                                  " is not a level-" + std::to_string(level_) +
                                  " dyadic point");
    return static_cast<std::size_t>(rounded);
  }

  // Nearest grid index to an arbitrary t in [0,1] (ties round half away from zero).
  std::size_t snap_index(double t) const {
    double m = std::round(std::ldexp(t, level_));
    if (m < 0.0) m = 0.0;
    const double last = static_cast<double>(num_cells());
    if (m > last) m = last;
    return static_cast<std::size_t>(m);
  }

  bool operator==(const DyadicGrid& other) const { return level_ == other.level_; }

 private:
  int level_;
};

}  // namespace haarvol
