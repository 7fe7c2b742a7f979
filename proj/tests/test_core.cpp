#include <cmath>
#include <random>

#include "doctest.h"
#include "kgh/core.hpp"
#include "kgh/errors.hpp"

using namespace kgh;

namespace {

ModelConfig config(double m, double f, int l, double nu = 0.0) {
  ModelConfig c;
  c.mass = m;
  c.coulomb_f = f;
  c.angular_l = l;
  c.linear_nu = nu;
  return c;
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected kgh::Error");
  return ErrorKind::config_error;
}

}  // namespace

TEST_CASE("derive_coulomb: free particle at rest energy") {
  const auto p = derive_coulomb(config(1.0, 0.0, 2), 1.0, 1.0);
  CHECK(p.gamma_abs == 2.0);
  CHECK(p.delta == 0.0);
  CHECK(p.beta == 1.0);
  CHECK(p.alpha == 5.0);
  CHECK(p.g == -5.0);
}

TEST_CASE("derive_coulomb: delta by direct substitution") {
  const auto p = derive_coulomb(config(1.0, 0.5, 1), 2.0, 1.0);
  CHECK(p.delta == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("derive_coulomb: full tuple against hand evaluation") {
  // 40-digit evaluation of the parameter definitions at m=1, f=0.2, l=1, E=1.2, w=0.7.
  const auto p = derive_coulomb(config(1.0, 0.2, 1), 1.2, 0.7);
  CHECK(p.beta == doctest::Approx(1.14).epsilon(1e-14));
  CHECK(p.gamma_abs == doctest::Approx(0.9797958971132712392789).epsilon(1e-14));
  CHECK(p.delta == doctest::Approx(0.5737097324805089471850).epsilon(1e-14));
  CHECK(p.alpha == doctest::Approx(2.9595917942265424785578).epsilon(1e-14));
  CHECK(p.g == doctest::Approx(-2.3310203656551139071293).epsilon(1e-14));
}

TEST_CASE("derive_linear: nu = 0 gives theta = m w and mu = 0") {
  const auto p = derive_linear(config(1.3, 0.1, 2), 1.1, 0.4);
  CHECK(p.theta == 1.3 * 0.4);
  CHECK(p.mu == 0.0);
}

TEST_CASE("derive_linear: formulas in the w -> 0 limit") {
  // w = 0 is rejected upstream; theta and mu are checked through theta_of and
  // the mu definition at a vanishing frequency.
  const auto c = config(1.0, 0.0, 1, 1.0);
  CHECK(theta_of(c, 0.0) == 1.0);
  const auto p = derive_linear(c, 1.0, 1e-300);
  CHECK(p.theta == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(p.mu == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("derive_linear: full tuple against hand evaluation") {
  const auto p = derive_linear(config(1.0, 0.2, 1, 0.3), 1.2, 0.7);
  CHECK(p.theta == doctest::Approx(0.7615773105863908285661).epsilon(1e-14));
  CHECK(p.tau == doctest::Approx(0.5500272914217991515462).epsilon(1e-14));
  CHECK(p.mu == doctest::Approx(0.9027765201511440352278).epsilon(1e-14));
  CHECK(p.sigma == doctest::Approx(-2.2589470982916530896789).epsilon(1e-14));
  CHECK(p.vartheta == doctest::Approx(-0.7858976991080602268693).epsilon(1e-14));
}

TEST_CASE("errors: invalid coupling and frequency") {
  CHECK(kind_of([] { derive_coulomb(config(1.0, 1.0, 1), 1.0, 1.0); }) == ErrorKind::invalid_coupling);
  CHECK(kind_of([] { derive_coulomb(config(1.0, 0.3, 0), 1.0, 1.0); }) == ErrorKind::invalid_coupling);
  CHECK(kind_of([] { derive_coulomb(config(-1.0, 0.1, 1), 1.0, 1.0); }) == ErrorKind::invalid_coupling);
  CHECK(kind_of([] { derive_coulomb(config(1.0, 0.1, 1, -0.2), 1.0, 1.0); }) == ErrorKind::invalid_coupling);
  CHECK(kind_of([] { derive_coulomb(config(1.0, 0.1, 1), 1.0, 0.0); }) == ErrorKind::invalid_frequency);
  CHECK(kind_of([] { derive_linear(config(1.0, 0.1, 1, 0.1), 1.0, -1.0); }) == ErrorKind::invalid_frequency);
  // l = f = 0 is the admitted gamma = 0 case.
  CHECK(derive_coulomb(config(1.0, 0.0, 0), 1.0, 1.0).gamma_abs == 0.0);
}

TEST_CASE("property: sign and branch symmetries are exact") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    const double m = 0.2 + 3.0 * u(rng);
    const int l = 1 + static_cast<int>(4 * u(rng));
    const double f = (u(rng) - 0.5) * 1.9;
    const double e = 0.1 + 5.0 * u(rng);
    const double w = 1e-3 + 4.0 * u(rng);
    const auto p = derive_coulomb(config(m, f, l), e, w);
    const auto flipped = derive_coulomb(config(m, -f, l), e, w);
    CHECK(flipped.delta == -p.delta);
    CHECK(flipped.beta == p.beta);
    CHECK(flipped.gamma_abs == p.gamma_abs);
    CHECK(flipped.alpha == p.alpha);
    CHECK(flipped.g == p.g);

    const auto conjugate = derive_coulomb(config(m, -f, l), -e, w);
    CHECK(conjugate.delta == p.delta);
    CHECK(conjugate.beta == p.beta);
  }
}

TEST_CASE("property: nu = 0 linear parameters equal the Coulomb ones") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    const auto c = config(0.2 + 3.0 * u(rng), (u(rng) - 0.5) * 1.9, 1 + static_cast<int>(4 * u(rng)));
    const double e = (u(rng) - 0.5) * 8.0;
    const double w = 1e-3 + 4.0 * u(rng);
    const auto coulomb = derive_coulomb(c, e, w);
    const auto linear = derive_linear(c, e, w);
    CHECK(linear.theta == c.mass * w);
    CHECK(linear.mu == 0.0);
    CHECK(linear.tau == coulomb.delta);
    CHECK(linear.sigma == coulomb.g);
    CHECK(linear.vartheta == linear.tau);
    CHECK(linear.beta == coulomb.beta);
  }
}

TEST_CASE("property: truncation energy makes g = 2n") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    const auto c = config(0.2 + 3.0 * u(rng), (u(rng) - 0.5) * 1.9, 1 + static_cast<int>(4 * u(rng)));
    const double w = std::pow(10.0, -3.0 + 4.0 * u(rng));
    const int n = 1 + static_cast<int>(8 * u(rng));
    const double e = std::sqrt(truncated_energy_squared(c, w, n));
    const auto p = derive_coulomb(c, e, w);
    CHECK(std::abs(p.g - 2.0 * n) <= 1e-12 * 2.0 * n * (1.0 + p.beta / (c.mass * w)));
  }
}

TEST_CASE("property: linear truncation energy makes sigma = 2n") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int checked = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const auto c = config(0.2 + 3.0 * u(rng), (u(rng) - 0.5) * 1.9, 1 + static_cast<int>(4 * u(rng)),
                          0.01 + u(rng));
    const double w = std::pow(10.0, -3.0 + 4.0 * u(rng));
    const int n = 1 + static_cast<int>(8 * u(rng));
    const double e_sq = truncated_energy_squared(c, w, n);
    if (e_sq <= 0.0) continue;
    const auto p = derive_linear(c, std::sqrt(e_sq), w);
    const double scale = std::abs(p.beta / p.theta) + p.mu * p.mu / 4.0 + 2.0 + 2.0 * p.gamma_abs;
    CHECK(std::abs(p.sigma - 2.0 * n) <= 1e-12 * scale);
    ++checked;
  }
  CHECK(checked > 400);
}
