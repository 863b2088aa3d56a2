#include <cmath>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "haarvol/rng.hpp"

using namespace haarvol;

TEST_CASE("streams are reproducible and substream-independent") {
  RngStream a(42, 0);
  RngStream b(42, 0);
  for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());

  RngStream c(42, 1);
  RngStream d(43, 0);
  int equal_c = 0, equal_d = 0;
  RngStream a2(42, 0);
  for (int i = 0; i < 1000; ++i) {
    const std::uint64_t ref = a2.next_u64();
    if (ref == c.next_u64()) ++equal_c;
    if (ref == d.next_u64()) ++equal_d;
  }
  CHECK(equal_c == 0);
  CHECK(equal_d == 0);
}

TEST_CASE("uniforms live strictly inside (0,1)") {
  RngStream stream(7, 5);
  for (int i = 0; i < 100000; ++i) {
    const double u = stream.next_uniform();
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("inverse normal CDF hits reference quantiles") {
  CHECK(inverse_normal_cdf(0.5) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(inverse_normal_cdf(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-12));
  CHECK(inverse_normal_cdf(0.3) == -inverse_normal_cdf(0.7));
  CHECK_THROWS_AS(inverse_normal_cdf(0.0), std::invalid_argument);
  CHECK_THROWS_AS(inverse_normal_cdf(1.0), std::invalid_argument);

  // Round trip against the erfc-based normal CDF.
  auto normal_cdf = [](double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); };
  for (double p : {1e-12, 1e-6, 0.01, 0.2, 0.5, 0.8, 0.99, 1.0 - 1e-6}) {
    const double x = inverse_normal_cdf(p);
    CHECK(normal_cdf(x) == doctest::Approx(p).epsilon(1e-10));
  }
}

TEST_CASE("normal draws have the right low moments") {
  RngStream stream(2024, 9);
  const int n = 1000000;
  double sum = 0.0, sum2 = 0.0, sum3 = 0.0, sum4 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double g = stream.next_normal();
    sum += g;
    sum2 += g * g;
    sum3 += g * g * g;
    sum4 += g * g * g * g;
  }
  CHECK(std::abs(sum / n) < 0.005);
  CHECK(sum2 / n == doctest::Approx(1.0).epsilon(0.01));
  CHECK(std::abs(sum3 / n) < 0.02);
  CHECK(sum4 / n == doctest::Approx(3.0).epsilon(0.03));
}
