#include <cmath>
#include <vector>

#include "doctest.h"
#include "kgh/errors.hpp"
#include "kgh/oracle.hpp"
#include "kgh/spectrum.hpp"
#include "kgh/wavefunction.hpp"

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

// f = 0, nu = 0: two-dimensional oscillator, E^2 = m^2 + m w (4k + 2|l| + 1).
double oscillator_energy(const ModelConfig& c, double omega, int k) {
  return std::sqrt(c.mass * c.mass + c.mass * omega * (4.0 * k + 2.0 * c.angular_l + 1.0));
}

std::vector<double> uniform_radii(double rho_max, int points) {
  std::vector<double> r(points);
  for (int i = 0; i < points; ++i) r[i] = rho_max * i / (points - 1);
  return r;
}

}  // namespace

TEST_CASE("shoot_eigenvalue: oscillator baseline within 1e-8") {
  for (const auto& c : {config(1.0, 0.0, 1), config(0.6, 0.0, 2), config(2.0, 0.0, 3)}) {
    for (double omega : {0.3, 1.7}) {
      for (int k = 0; k < 3; ++k) {
        const double exact = oscillator_energy(c, omega, k);
        const auto e = shoot_eigenvalue(c, omega, {0.99 * exact, 1.01 * exact});
        REQUIRE(e.size() == 1);
        CHECK(std::abs(e[0] - exact) <= 1e-8 * exact);
      }
    }
  }
}

TEST_CASE("shoot_eigenvalue: fixed-step RK4 converges at fourth order") {
  const auto c = config(1.0, 0.0, 1);
  const double omega = 0.8;
  const double exact = oscillator_energy(c, omega, 0);
  std::vector<double> errors;
  for (double h : {0.1, 0.05, 0.025}) {
    ShootingOptions o;
    o.fixed_step = h;
    o.start_radius = 0.5;
    const auto e = shoot_eigenvalue(c, omega, {0.95 * exact, 1.05 * exact}, o);
    REQUIRE(e.size() == 1);
    errors.push_back(std::abs(e[0] - exact));
  }
  for (std::size_t i = 0; i + 1 < errors.size(); ++i) {
    const double ratio = errors[i] / errors[i + 1];
    CHECK(ratio > 12.0);
    CHECK(ratio < 24.0);
  }
}

TEST_CASE("oracle_eigenfunction: node theorem and unit norm") {
  const auto c = config(1.0, 0.0, 1);
  const double omega = 0.8;
  const auto radii = uniform_radii(10.0 / std::sqrt(omega), 4001);
  for (int k = 0; k < 4; ++k) {
    const double exact = oscillator_energy(c, omega, k);
    const auto e = shoot_eigenvalue(c, omega, {0.99 * exact, 1.01 * exact});
    const auto s = oracle_eigenfunction(c, omega, e.at(0), radii);
    CHECK(count_nodes(s) == k);
    CHECK(planar_norm_squared(s) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("shoot_eigenvalue: the bracket is scanned in ascending order") {
  const auto c = config(1.0, 0.0, 1);
  const double lo = oscillator_energy(c, 0.8, 0), hi = oscillator_energy(c, 0.8, 2);
  const auto e = shoot_eigenvalue(c, 0.8, {0.98 * lo, 1.02 * hi});
  REQUIRE(e.size() == 3);
  CHECK(e[0] < e[1]);
  CHECK(e[1] < e[2]);
  CHECK(e[1] == doctest::Approx(oscillator_energy(c, 0.8, 1)).epsilon(1e-8));
}

TEST_CASE("shoot_eigenvalue: empty bracket raises BracketExhausted") {
  const auto c = config(1.0, 0.0, 1);
  const double e0 = oscillator_energy(c, 0.8, 0), e1 = oscillator_energy(c, 0.8, 1);
  try {
    shoot_eigenvalue(c, 0.8, {e0 + 0.1 * (e1 - e0), e1 - 0.1 * (e1 - e0)});
    FAIL("expected BracketExhausted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::bracket_exhausted);
  }
}

TEST_CASE("shooting_mismatch: vanishes at an eigenvalue and not next to it") {
  const auto gs = ground_state_coulomb(config(1.0, 0.2, 1));
  const double at = shooting_mismatch(gs.config, gs.omega, gs.energy, gs.energy);
  const double off = shooting_mismatch(gs.config, gs.omega, 1.01 * gs.energy, gs.energy);
  CHECK(std::abs(at) < 1e-8);
  CHECK(std::abs(off) > 1e-3);
}

TEST_CASE("verify_state: Coulomb ground state is matched") {
  const auto report = verify_state(ground_state_coulomb(config(1.0, 0.2, 1)));
  CHECK(report.matched);
  CHECK(report.energy_delta < 1e-10);
  CHECK(report.node_count_oracle == report.node_count_analytic);
  CHECK(report.wavefunction_l2_delta < 1e-8);
}

TEST_CASE("verify_state: linear ground state is matched") {
  const auto report = verify_state(ground_state_linear(config(1.0, 0.2, 1, 0.1)));
  CHECK(report.matched);
  CHECK(report.energy_delta < 1e-10);
  CHECK(report.wavefunction_l2_delta < 1e-8);
}

TEST_CASE("verify_state: negative control with a 10% energy offset") {
  auto state = ground_state_coulomb(config(1.0, 0.2, 1));
  const double true_energy = state.energy;
  state.energy *= 1.1;
  const auto report = verify_state(state);
  CHECK_FALSE(report.matched);
  CHECK(report.oracle_energy == doctest::Approx(true_energy).epsilon(1e-9));
  CHECK(report.energy_delta == doctest::Approx(0.1).epsilon(1e-6));
}

TEST_CASE("shoot_eigenvalue: off-shell frequency has a nearby but different eigenvalue") {
  // At w = 1.01 w_gs the series no longer truncates; the frozen value comes
  // from an independent high-precision shooting run.
  const auto gs = ground_state_coulomb(config(1.0, 0.2, 1));
  const auto e = shoot_eigenvalue(gs.config, 1.01 * gs.omega, {0.95 * gs.energy, 1.05 * gs.energy});
  REQUIRE(e.size() == 1);
  CHECK(e[0] == doctest::Approx(1.0754726401478911).epsilon(1e-9));
  auto off = gs;
  off.omega *= 1.01;
  off.energy = energy_from_frequency(off.config, off.omega, 1);
  CHECK(std::abs(off.energy - e[0]) / e[0] > 1e-5);
}

TEST_CASE("verify_state: small |gamma| refines the comparison grid") {
  // |gamma| = sqrt(1 - 0.81): the default grid fails the quadrature guard.
  const auto st = ground_state_linear(config(1.0, 0.9, 1, 0.1));
  CHECK_THROWS_AS(build_wavefunction(st), Error);
  const auto report = verify_state(st);
  CHECK(report.matched);
  CHECK(report.energy_delta < 1e-10);
}
