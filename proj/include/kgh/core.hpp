#pragma once

// Physical inputs and the auxiliary parameters of the two radial reductions:
//
//   Coulomb only (nu = 0), in r = sqrt(m w) rho:
//     R'' + R'/r - gamma^2/r^2 R + delta/r R - r^2 R + beta/(m w) R = 0
//   Coulomb plus linear scalar potential, in xi = sqrt(theta) rho:
//     R'' + R'/xi - gamma^2/xi^2 R + tau/xi R - mu xi R - xi^2 R + beta/theta R = 0
//
// Natural units (c = hbar = 1) throughout.

#include <string_view>

namespace kgh {

enum class Branch { positive_energy, negative_energy };
enum class Variant { coulomb, linear };

std::string_view to_string(Branch branch);
std::string_view to_string(Variant variant);

inline double branch_sign(Branch branch) {
  return branch == Branch::positive_energy ? 1.0 : -1.0;
}

struct ModelConfig {
  double mass = 1.0;
  /// Coulomb strength: q A_0 = f / rho. The sign selects attraction or repulsion.
  double coulomb_f = 0.0;
  /// Slope of the scalar potential V = nu rho; zero selects the pure Coulomb problem.
  double linear_nu = 0.0;
  int angular_l = 0;
  Branch branch = Branch::positive_energy;
};

/// Throws InvalidCoupling unless mass > 0, nu >= 0 and l^2 > f^2.
/// l = f = 0 is admitted: the regular solution is r^0 times a polynomial.
void validate(const ModelConfig& config);

/// |gamma| = sqrt(l^2 - f^2); validates the config first.
double gamma_abs(const ModelConfig& config);

inline Variant variant_of(const ModelConfig& config) {
  return config.linear_nu > 0.0 ? Variant::linear : Variant::coulomb;
}

struct CoulombDerived {
  double beta = 0.0;       // E^2 - m^2 + m w
  double gamma_abs = 0.0;  // sqrt(l^2 - f^2)
  double delta = 0.0;      // 2 E f / sqrt(m w)
  double alpha = 0.0;      // 2|gamma| + 1
  double g = 0.0;          // beta/(m w) - 2 - 2|gamma|
};

struct LinearDerived {
  double beta = 0.0;
  double gamma_abs = 0.0;
  double alpha = 0.0;
  double theta = 0.0;     // sqrt(m^2 w^2 + nu^2)
  double tau = 0.0;       // 2 f E / sqrt(theta)
  double mu = 0.0;        // 2 m nu / theta^(3/2)
  double sigma = 0.0;     // beta/theta + mu^2/4 - 2 - 2|gamma|
  double vartheta = 0.0;  // tau - (mu/2)(2|gamma| + 1)
};

CoulombDerived derive_coulomb(const ModelConfig& config, double energy, double omega);

/// The 1/xi coefficient carries a minus sign on the mu term: substituting
/// R = exp(-xi^2/2 - mu xi/2) xi^|gamma| H into the radial equation gives
/// vartheta = tau - (mu/2)(2|gamma|+1), which reduces to delta at nu = 0.
LinearDerived derive_linear(const ModelConfig& config, double energy, double omega);

/// theta = sqrt(m^2 w^2 + nu^2); equals m w exactly at nu = 0.
double theta_of(const ModelConfig& config, double omega);

/// E^2 implied by the degree-n truncation condition (g = 2n, resp. sigma = 2n):
///   nu = 0:  m^2 + m w (2n + 2|gamma| + 1)
///   nu > 0:  m^2 - m w + 2 theta (n + |gamma| + 1) - m^2 nu^2 / theta^2
/// May be negative for nu > 0; callers decide how to report that.
double truncated_energy_squared(const ModelConfig& config, double omega, int n);

}  // namespace kgh
