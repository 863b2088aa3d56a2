#include <cmath>
#include <vector>

#include <doctest.h>

#include "haarvol/errors.hpp"
#include "haarvol/regularity.hpp"
#include "haarvol/simulator.hpp"

using namespace haarvol;

namespace {

SimConfig bm_config(int j, const std::string& phi, std::uint64_t seed) {
  SimConfig c;
  c.driver = DriverKind::brownian_motion;
  c.output_level = j;
  c.phi_name = phi;
  c.master_seed = seed;
  return c;
}

SimConfig fbm_config(int j, const std::string& phi, std::uint64_t seed, double hurst = 0.8) {
  SimConfig c;
  c.driver = DriverKind::fractional_bm;
  c.hurst = hurst;
  c.output_level = j;
  c.phi_name = phi;
  c.master_seed = seed;
  return c;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  REQUIRE(a.size() == b.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

}  // namespace

TEST_CASE("fast route with Phi==1 telescopes to W") {
  const SimConfig config = bm_config(6, "constant_one", 77);
  const CoupledDraw draw = coupled_draw(config);
  const SimulatedPath fast = simulate_fast(config);
  CHECK(fast.values[0] == 0.0);
  const int shift = config.fine_level() - config.output_level;
  for (std::size_t m = 0; m < fast.values.size(); ++m)
    CHECK(std::abs(fast.values[m] - draw.w.values[m << shift]) <= 1e-12);
}

TEST_CASE("zero volatility gives the zero path") {
  const SimConfig config = fbm_config(5, "custom_poly(0)", 3);
  CHECK(max_abs_diff(simulate_fast(config).values,
                     std::vector<double>(33, 0.0)) == 0.0);
  CHECK(max_abs_diff(simulate_wavelet_partial(config, 4).values,
                     std::vector<double>(33, 0.0)) == 0.0);
}

TEST_CASE("all routes start at zero") {
  const SimConfig config = fbm_config(4, "sine_paper", 9);
  const PathTriple triple = simulate_coupled(config);
  CHECK(triple.fast.values[0] == 0.0);
  CHECK(triple.wavelet.values[0] == 0.0);
  CHECK(triple.oracle.values[0] == 0.0);
}

TEST_CASE("with Phi==1 the three routes coincide with W on shared grids") {
  const SimConfig config = fbm_config(5, "constant_one", 41);
  const CoupledDraw draw = coupled_draw(config);
  const PathTriple triple = simulate_coupled(config);
  const int shift = config.fine_level() - config.output_level;
  for (std::size_t m = 0; m < triple.fast.values.size(); ++m) {
    const double w = draw.w.values[m << shift];
    CHECK(std::abs(triple.fast.values[m] - w) <= 1e-12);
    CHECK(std::abs(triple.wavelet.values[m] - w) <= 1e-12);
    CHECK(std::abs(triple.oracle.values[m << shift] - w) <= 1e-12);
  }
}

TEST_CASE("wavelet partial sum at dyadic points of level P+1 reproduces W when Phi==1") {
  const SimConfig config = bm_config(4, "constant_one", 13);
  const CoupledDraw draw = coupled_draw(config);
  // partial level 3: output grid points are level-4 dyadics = level P+1 points
  const SimulatedPath z = simulate_wavelet_partial(config, 3);
  const int shift = config.fine_level() - config.output_level;
  for (std::size_t m = 0; m < z.values.size(); ++m)
    CHECK(std::abs(z.values[m] - draw.w.values[m << shift]) <= 1e-12);
}

TEST_CASE("projection identity: wavelet form at J-1 equals the scaling form at J") {
  for (const char* phi : {"affine_paper", "sine_paper"}) {
    const SimConfig config = fbm_config(5, phi, 1234);
    const PathTriple triple = simulate_coupled(config, true, config.output_level - 1);
    CHECK(max_abs_diff(triple.wavelet.values, triple.fast.values) <= 1e-10);
  }
}

TEST_CASE("wavelet partial level 0 is the two-term sum") {
  const SimConfig config = fbm_config(3, "sine_paper", 5);
  const CoupledDraw draw = coupled_draw(config);
  const Antiderivative f = antiderivative(draw.x, preset_phi("sine_paper"));
  const HaarCoefficients coeffs = wavelet_coeffs(draw.w, 0);
  const SimulatedPath z = simulate_wavelet_partial(config, 0);
  for (std::size_t m = 0; m < z.values.size(); ++m) {
    const double t = z.grid.point(m);
    const double expected =
        coeff_b(0, 0, t, f) * coeffs.delta00 + coeff_a(0, 0, t, f) * coeffs.lambdas[0][0];
    CHECK(z.values[m] == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("wavelet partial sum needs enough fine resolution") {
  const SimConfig config = fbm_config(2, "sine_paper", 5);  // fine level 4
  CHECK_THROWS_AS(simulate_wavelet_partial(config, 4), std::invalid_argument);
}

TEST_CASE("resource limit on the fine grid") {
  SimConfig config = bm_config(14, "constant_one", 1);  // fine level 28
  CHECK_THROWS_AS(config.validate(), ResourceLimitError);
  CHECK_THROWS_AS(simulate_fast(config), ResourceLimitError);
}

TEST_CASE("config validation catches bad fields") {
  SimConfig config = fbm_config(0, "sine_paper", 1);
  CHECK_THROWS_AS(config.validate(), ConfigError);
  config = fbm_config(4, "", 1);
  CHECK_THROWS_AS(config.validate(), ConfigError);
  config = fbm_config(4, "sine_paper", 1);
  config.gamma_list = {0.7};
  CHECK_THROWS_AS(config.validate(), ConfigError);
  config.gamma_list = {0.3};
  config.replicas = 0;
  CHECK_THROWS_AS(config.validate(), ConfigError);
}

TEST_CASE("ensembles are deterministic and replica 0 matches the direct routes") {
  SimConfig config = fbm_config(4, "sine_paper", 2718);
  config.replicas = 2;
  const std::vector<PathTriple> run1 = run_ensemble(config);
  const std::vector<PathTriple> run2 = run_ensemble(config);
  REQUIRE(run1.size() == 2);
  for (std::size_t r = 0; r < run1.size(); ++r) {
    CHECK(max_abs_diff(run1[r].fast.values, run2[r].fast.values) == 0.0);
    CHECK(max_abs_diff(run1[r].oracle.values, run2[r].oracle.values) == 0.0);
    CHECK(max_abs_diff(run1[r].wavelet.values, run2[r].wavelet.values) == 0.0);
  }

  SimConfig single = config;
  single.replicas = 1;
  const std::vector<PathTriple> once = run_ensemble(single);
  CHECK(max_abs_diff(once[0].fast.values, simulate_fast(single).values) == 0.0);
  CHECK(max_abs_diff(once[0].oracle.values, simulate_oracle(single).values) == 0.0);
}

TEST_CASE("ensemble mean of Z(1) is centered") {
  SimConfig config = fbm_config(4, "sine_paper", 99);
  config.replicas = 100;
  const std::vector<PathTriple> ensemble = run_ensemble(config);
  double sum = 0.0, sum_sq = 0.0;
  for (const PathTriple& triple : ensemble) {
    const double z1 = triple.oracle.values.back();
    sum += z1;
    sum_sq += z1 * z1;
  }
  const double n = 100.0;
  const double mean = sum / n;
  const double sd = std::sqrt((sum_sq - n * mean * mean) / (n - 1.0));
  CHECK(std::abs(mean) <= 3.0 * sd / std::sqrt(n));
}

TEST_CASE("conditional on X, Z(1) is Gaussian (kurtosis check)") {
  RngStream stream_x(31415, 0);
  const GaussianPath x = generate_fbm(0.8, 6, stream_x);
  const VolatilityFunction phi = preset_phi("sine_paper");
  std::vector<double> phi_vals(x.values.size() - 1);
  for (std::size_t q = 0; q + 1 < x.values.size(); ++q) phi_vals[q] = phi(x.values[q]);

  RngStream stream_w(31415, 2);
  const double step_sd = std::sqrt(x.grid.spacing());
  const int n = 10000;
  double m2 = 0.0, m4 = 0.0;
  for (int r = 0; r < n; ++r) {
    double z = 0.0;
    for (double pv : phi_vals) z += pv * step_sd * stream_w.next_normal();
    m2 += z * z;
    m4 += z * z * z * z;
  }
  m2 /= n;
  m4 /= n;
  const double kurtosis = m4 / (m2 * m2);
  CHECK(std::abs(kurtosis - 3.0) <= 0.15);
}

TEST_CASE("linear interpolation is exact on linear paths and restriction inverts it") {
  SimulatedPath coarse;
  coarse.grid = DyadicGrid(3);
  coarse.values.resize(9);
  for (std::size_t m = 0; m < 9; ++m) coarse.values[m] = 3.0 * coarse.grid.point(m) - 1.0;
  const std::vector<double> fine = interpolate_values(coarse, 7);
  const DyadicGrid fine_grid(7);
  for (std::size_t q = 0; q < fine.size(); ++q)
    CHECK(fine[q] == doctest::Approx(3.0 * fine_grid.point(q) - 1.0).epsilon(1e-14));

  SimulatedPath fine_path;
  fine_path.grid = fine_grid;
  fine_path.values = fine;
  const std::vector<double> back = restrict_values(fine_path, 3);
  CHECK(max_abs_diff(back, coarse.values) == 0.0);
}

TEST_CASE("oracle variance obeys the Ito isometry at grid level") {
  // fixed X, many W replicas; empirical Var Z(1) vs the quadrature
  RngStream stream_x(555, 0);
  const GaussianPath x = generate_fbm(0.8, 6, stream_x);
  const VolatilityFunction phi = preset_phi("affine_paper");
  double quadrature = 0.0;
  for (std::size_t q = 0; q + 1 < x.values.size(); ++q) {
    const double v = phi(x.values[q]);
    quadrature += x.grid.spacing() * v * v;
  }
  RngStream stream_w(555, 2);
  const double step_sd = std::sqrt(x.grid.spacing());
  const int n = 100000;
  double sum = 0.0, sum_sq = 0.0;
  for (int r = 0; r < n; ++r) {
    double z = 0.0;
    for (std::size_t q = 0; q + 1 < x.values.size(); ++q)
      z += phi(x.values[q]) * step_sd * stream_w.next_normal();
    sum += z;
    sum_sq += z * z;
  }
  const double var = (sum_sq - sum * sum / n) / (n - 1);
  CHECK(std::abs(var - quadrature) / quadrature < 0.02);
}
