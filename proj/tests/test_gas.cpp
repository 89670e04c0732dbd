#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "nsac/gas.hpp"

using namespace nsac;

namespace {
GasModel ref_gas(double gamma = 2.0, double R = 1.0, double A = 1.0) {
  return GasModel(R, A, gamma, 1.0, 1.0);
}
}  // namespace

TEST_CASE("pressure: direct substitutions", "[gas]") {
  const GasModel g = ref_gas();
  CHECK(g.pressure(1.0, 1.0) == 1.0);
  CHECK(g.pressure(2.0, 1.0) == 0.5);
  CHECK_THROWS_AS(g.pressure(0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(g.pressure(-1.0, 1.0), std::domain_error);
}

TEST_CASE("GasModel rejects invalid constants", "[gas]") {
  CHECK_THROWS_AS(GasModel(0.0, 1.0, 2.0, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(GasModel(1.0, -1.0, 2.0, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(GasModel(1.0, 1.0, 1.0, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(GasModel(1.0, 1.0, 2.0, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(GasModel(1.0, 1.0, 2.0, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("entropy/theta closed forms at the normalization point", "[gas]") {
  const GasModel g = ref_gas();
  CHECK(g.entropy_from_vtheta(1.0, 1.0) == 0.0);  // R = A
  CHECK(g.theta_from_vs(1.0, 0.0) == 1.0);
  // monotone in v at fixed s: gamma = 2 gives theta = 1/v
  CHECK(g.theta_from_vs(2.0, 0.0) == Catch::Approx(0.5).epsilon(1e-14));
  CHECK_THROWS_AS(g.theta_from_vs(-1.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(g.entropy_from_vtheta(1.0, 0.0), std::domain_error);
}

TEST_CASE("entropy scaling law", "[gas]") {
  const GasModel g = ref_gas(1.4);
  const double lhs = g.entropy_from_vtheta(1.7, 2.6) - g.entropy_from_vtheta(1.7, 1.3);
  CHECK(lhs == Catch::Approx(g.R / (g.gamma - 1.0) * std::log(2.0)).epsilon(1e-13));
}

TEST_CASE("s <-> theta round trips on 1000 random states", "[gas]") {
  for (double gamma : {1.05, 1.4, 2.0, 3.0}) {
    const GasModel g(1.0, 1.0, gamma, 1.0, 1.0);
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> dist(0.1, 10.0);
    for (int k = 0; k < 1000; ++k) {
      const double v = dist(rng), theta = dist(rng);
      const double s = g.entropy_from_vtheta(v, theta);
      CHECK(g.theta_from_vs(v, s) == Catch::Approx(theta).epsilon(1e-12));
      const double t2 = g.theta_from_vs(v, s);
      CHECK(g.entropy_from_vtheta(v, t2) == Catch::Approx(s).margin(1e-12 * (1.0 + std::abs(s))));
    }
  }
}

TEST_CASE("round trip with air-like constants and A != R", "[gas]") {
  const double R = 8.314 / 29e-3;
  const GasModel g(R, 0.7 * R, 1.4, 1.0, 1.0);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(0.1, 10.0);
  for (int k = 0; k < 200; ++k) {
    const double v = dist(rng), theta = 300.0 * dist(rng);
    const double s = g.entropy_from_vtheta(v, theta);
    // p_tilde must equal p through the temperature map, same closed form
    CHECK(g.p_tilde(v, s) ==
          Catch::Approx(g.pressure(v, g.theta_from_vs(v, s))).epsilon(1e-12));
    CHECK(g.p_tilde(v, s) == Catch::Approx(g.pressure(v, theta)).epsilon(1e-12));
  }
}

TEST_CASE("p_tilde_v closed form and sign", "[gas]") {
  const GasModel g = ref_gas(2.0);
  CHECK(g.p_tilde_v(1.0, 0.0) == Catch::Approx(-2.0).epsilon(1e-14));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> dist(0.1, 10.0);
  for (int k = 0; k < 100; ++k) {
    const double v = dist(rng), s = dist(rng) - 5.0;
    CHECK(g.p_tilde_v(v, s) < 0.0);
  }
}

TEST_CASE("p_tilde_v matches centered differences at order 2", "[gas]") {
  const GasModel g = ref_gas(1.4);
  const double v = 1.7, s = 0.3;
  const double exact = g.p_tilde_v(v, s);
  double prev_err = 0.0;
  for (int k = 0; k < 4; ++k) {
    const double h = 0.05 / (1 << k);
    const double fd = (g.p_tilde(v + h, s) - g.p_tilde(v - h, s)) / (2.0 * h);
    const double err = std::abs(fd - exact);
    if (k > 0) {
      const double order = std::log2(prev_err / err);
      CHECK(order > 1.9);
      CHECK(order < 2.1);
    }
    prev_err = err;
  }
}

TEST_CASE("wave speeds: values, symmetry, monotonicity", "[gas]") {
  const GasModel g2 = ref_gas(2.0);
  CHECK(g2.lambda(WaveFamily::three, 1.0, 0.0) == Catch::Approx(std::sqrt(2.0)).epsilon(1e-14));
  const GasModel g3 = ref_gas(3.0);
  CHECK(g3.lambda(WaveFamily::three, 4.0, 0.0) ==
        Catch::Approx(std::sqrt(3.0) / 16.0).epsilon(1e-14));

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> dist(0.1, 10.0);
  for (int k = 0; k < 100; ++k) {
    const double v = dist(rng), s = dist(rng) - 5.0;
    CHECK(g2.lambda(WaveFamily::one, v, s) == -g2.lambda(WaveFamily::three, v, s));
  }
  // lambda_1 increasing, lambda_3 decreasing along sorted volumes
  double prev1 = g2.lambda(WaveFamily::one, 0.1, 0.0);
  double prev3 = g2.lambda(WaveFamily::three, 0.1, 0.0);
  for (double v = 0.2; v < 10.0; v += 0.1) {
    const double l1 = g2.lambda(WaveFamily::one, v, 0.0);
    const double l3 = g2.lambda(WaveFamily::three, v, 0.0);
    CHECK(l1 > prev1);
    CHECK(l3 < prev3);
    prev1 = l1;
    prev3 = l3;
  }
}

TEST_CASE("lambda_inverse round trips and sign checks", "[gas]") {
  const GasModel g = ref_gas(2.0);
  CHECK(g.lambda_inverse(WaveFamily::three, std::sqrt(2.0), 0.0) ==
        Catch::Approx(1.0).epsilon(1e-13));
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> dist(0.1, 10.0);
  for (int k = 0; k < 100; ++k) {
    const double v = dist(rng), s = dist(rng) - 5.0;
    for (auto fam : {WaveFamily::one, WaveFamily::three}) {
      const double w = g.lambda(fam, v, s);
      CHECK(g.lambda_inverse(fam, w, s) == Catch::Approx(v).epsilon(1e-12));
      CHECK(g.lambda(fam, g.lambda_inverse(fam, w, s), s) == Catch::Approx(w).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(g.lambda_inverse(WaveFamily::three, -1.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(g.lambda_inverse(WaveFamily::one, 1.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(g.lambda_inverse(WaveFamily::three, 0.0, 0.0), std::domain_error);

  // w -> 0+ drives v -> infinity monotonically
  double prev_v = 0.0;
  for (double w = 1.0; w > 1e-6; w *= 0.5) {
    const double v = g.lambda_inverse(WaveFamily::three, w, 0.0);
    CHECK(v > prev_v);
    prev_v = v;
  }
}

TEST_CASE("Phi: minimum, value, quadratic lower bound, midpoint convexity", "[gas]") {
  CHECK(phi_convex(1.0) == 0.0);
  CHECK(phi_convex(std::exp(1.0)) == Catch::Approx(std::exp(1.0) - 2.0).epsilon(1e-14));
  CHECK_THROWS_AS(phi_convex(0.0), std::domain_error);
  for (double x = 0.01; x <= 10.0; x += 0.01) {
    const double lo = (x - 1.0) * (x - 1.0) / (2.0 * std::max(1.0, x) * std::max(1.0, x));
    CHECK(phi_convex(x) >= lo - 1e-15);
  }
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> dist(0.01, 10.0);
  for (int k = 0; k < 500; ++k) {
    const double a = dist(rng), b = dist(rng);
    CHECK(phi_convex(0.5 * (a + b)) <= 0.5 * (phi_convex(a) + phi_convex(b)) + 1e-14);
  }
}
