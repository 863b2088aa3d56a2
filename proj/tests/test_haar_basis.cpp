#include <cmath>
#include <functional>
#include <vector>

#include <doctest.h>

#include "haarvol/haar_basis.hpp"

using namespace haarvol;

namespace {

GaussianPath path_from_values(int level, std::vector<double> values) {
  GaussianPath p;
  p.grid = DyadicGrid(level);
  p.values = std::move(values);
  return p;
}

// Midpoint quadrature on a dyadic grid; the independent oracle for the
// orthonormality checks.
double midpoint_quadrature(const std::function<double(double)>& f, int level) {
  const std::size_t n = std::size_t{1} << level;
  double acc = 0.0;
  for (std::size_t q = 0; q < n; ++q)
    acc += f((static_cast<double>(q) + 0.5) / static_cast<double>(n));
  return acc / static_cast<double>(n);
}

}  // namespace

TEST_CASE("psi evaluates the half-open step pattern") {
  CHECK(eval_psi({0, 0}, 0.25) == 1.0);
  CHECK(eval_psi({0, 0}, 0.5) == -1.0);
  CHECK(eval_psi({1, 1}, 0.625) == doctest::Approx(std::sqrt(2.0)));
  CHECK(eval_psi({2, 0}, 0.9) == 0.0);
  CHECK(eval_psi({3, 5}, 1.0) == 0.0);
  CHECK_THROWS_AS(eval_psi({0, 0}, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(eval_psi({1, 2}, 0.5), std::invalid_argument);
}

TEST_CASE("scaling function evaluates the half-open indicator") {
  CHECK(eval_scaling(1, 0, 0.25) == doctest::Approx(std::sqrt(2.0)));
  CHECK(eval_scaling(0, 0, 1.0) == 0.0);
  CHECK(eval_scaling(2, 3, 0.8) == 2.0);
  CHECK_THROWS_AS(eval_scaling(1, 2, 0.5), std::invalid_argument);
}

TEST_CASE("basis is orthonormal under midpoint quadrature") {
  struct Entry {
    std::function<double(double)> f;
  };
  std::vector<Entry> basis;
  basis.push_back({[](double s) { return (s < 1.0) ? 1.0 : 0.0; }});  // phi_00
  const int max_scale = 3;
  for (int j = 0; j <= max_scale; ++j)
    for (int k = 0; k < (1 << j); ++k)
      basis.push_back({[j, k](double s) { return eval_psi({j, k}, s); }});

  const int quad_level = max_scale + 6;
  for (std::size_t a = 0; a < basis.size(); ++a) {
    for (std::size_t b = a; b < basis.size(); ++b) {
      const double ip = midpoint_quadrature(
          [&](double s) { return basis[a].f(s) * basis[b].f(s); }, quad_level);
      if (a == b)
        CHECK(ip == doctest::Approx(1.0).epsilon(1e-10));
      else
        CHECK(std::abs(ip) < 1e-10);
    }
  }
  // phi_{J,l} normalization at a finer quadrature level
  const double ip = midpoint_quadrature(
      [](double s) {
        const double v = eval_scaling(3, 5, s);
        return v * v;
      },
      3 + 6);
  CHECK(ip == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("coefficients of the short reference path") {
  const GaussianPath w = path_from_values(1, {0.0, 0.3, 0.1});
  const HaarCoefficients coeffs = wavelet_coeffs(w, 0, {0, 1});
  CHECK(coeffs.delta00 == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(coeffs.lambdas[0][0] == doctest::Approx(0.5).epsilon(1e-14));

  const std::vector<double> delta1 = scaling_coeffs(w, 1);
  CHECK(delta1[0] == doctest::Approx(0.3 * std::sqrt(2.0)).epsilon(1e-12));
  CHECK(delta1[1] == doctest::Approx(-0.2 * std::sqrt(2.0)).epsilon(1e-12));
  CHECK((delta1[0] + delta1[1]) / std::sqrt(2.0) == doctest::Approx(0.1).epsilon(1e-12));

  const std::vector<double> delta0 = scaling_coeffs(w, 0);
  CHECK(delta0.size() == 1);
  CHECK(delta0[0] == doctest::Approx(0.1).epsilon(1e-14));

  // requested scaling levels are attached to the coefficient set
  REQUIRE(coeffs.scaling.count(1) == 1);
  CHECK(coeffs.scaling.at(1) == delta1);
  CHECK(coeffs.scaling.at(0) == delta0);
}

TEST_CASE("zero path gives zero coefficients") {
  const GaussianPath w = path_from_values(4, std::vector<double>(17, 0.0));
  const HaarCoefficients coeffs = wavelet_coeffs(w, 3);
  CHECK(coeffs.delta00 == 0.0);
  for (const auto& row : coeffs.lambdas)
    for (double v : row) CHECK(v == 0.0);
}

TEST_CASE("refinement identities hold on random paths") {
  RngStream stream(314, 1);
  const GaussianPath w = generate_brownian(8, stream);
  const HaarCoefficients coeffs = wavelet_coeffs(w, 6);
  for (int j = 0; j <= 6; ++j) {
    const std::vector<double> coarse = scaling_coeffs(w, j);
    const std::vector<double> fine = scaling_coeffs(w, j + 1);
    for (std::size_t l = 0; l < coarse.size(); ++l) {
      CHECK(std::abs(coarse[l] - (fine[2 * l] + fine[2 * l + 1]) / std::sqrt(2.0)) <= 1e-12);
      CHECK(std::abs(coeffs.lambdas[static_cast<std::size_t>(j)][l] -
                     (fine[2 * l] - fine[2 * l + 1]) / std::sqrt(2.0)) <= 1e-12);
    }
  }
}

TEST_CASE("coefficient extraction demands enough resolution") {
  RngStream stream(1, 1);
  const GaussianPath w = generate_brownian(3, stream);
  CHECK_THROWS_WITH_AS(wavelet_coeffs(w, 3), doctest::Contains("level >= 4"),
                       std::invalid_argument);
  CHECK_THROWS_AS(scaling_coeffs(w, 4), std::invalid_argument);
  CHECK(wavelet_coeffs(w, 2).lambdas.size() == 3);
}

TEST_CASE("lambda rows have 2^j entries") {
  RngStream stream(8, 1);
  const GaussianPath w = generate_brownian(7, stream);
  const HaarCoefficients coeffs = wavelet_coeffs(w, 5);
  for (int j = 0; j <= 5; ++j)
    CHECK(coeffs.lambdas[static_cast<std::size_t>(j)].size() == (std::size_t{1} << j));
}

TEST_CASE("lambda coefficients have unit variance across seeds") {
  const int seeds = 10000;
  const int max_scale = 4;
  std::vector<std::vector<double>> sum_sq(max_scale + 1);
  for (int j = 0; j <= max_scale; ++j) sum_sq[j].assign(std::size_t{1} << j, 0.0);
  for (int seed = 0; seed < seeds; ++seed) {
    RngStream stream(static_cast<std::uint64_t>(seed), 1);
    const GaussianPath w = generate_brownian(max_scale + 1, stream);
    const HaarCoefficients coeffs = wavelet_coeffs(w, max_scale);
    for (int j = 0; j <= max_scale; ++j)
      for (std::size_t k = 0; k < sum_sq[j].size(); ++k)
        sum_sq[j][k] += coeffs.lambdas[j][k] * coeffs.lambdas[j][k];
  }
  for (int j = 0; j <= max_scale; ++j)
    for (std::size_t k = 0; k < sum_sq[j].size(); ++k) {
      const double var = sum_sq[j][k] / seeds;
      CHECK(var >= 0.95);
      CHECK(var <= 1.05);
    }
}
