#pragma once

// Quantization: the series terminates at degree n only for special
// (omega, E) pairs. The energy follows from g = 2n (sigma = 2n); the
// frequency from a_{n+1} = 0.

#include <vector>

#include "kgh/core.hpp"

namespace kgh {

enum class Method { closed_form, root_found };

std::string_view to_string(Method method);

struct BoundState {
  ModelConfig config;
  int n = 1;
  double omega = 0.0;
  double energy = 0.0;
  Variant variant = Variant::coulomb;
  Method method = Method::closed_form;
  /// a_{n+1} at the solution.
  double residual = 0.0;
  /// max_{j <= n} |a_j| at the solution.
  double coefficient_scale = 1.0;

  int l() const { return config.angular_l; }
};

/// E on the configured branch from the truncation energy relation.
/// Throws NoRealEnergy when E^2 is negative or not finite. For valid inputs
/// E^2 = m^2 (1 - nu^2/theta^2) + 2 theta (n + |gamma| + 1) - m w > 0, so this
/// only guards against rounding at extreme parameters.
double energy_from_frequency(const ModelConfig& config, double omega, int n);

/// n = 1, nu = 0:
///   E = +-m / sqrt(1 - 2 f^2 (3 + 2|gamma|) / (2|gamma| + 1))
///   w = 2 E^2 f^2 / (m (2|gamma| + 1))
/// Throws DegenerateCoupling at f = 0 and SupercriticalCoupling when the
/// square-root argument is not positive.
BoundState ground_state_coulomb(const ModelConfig& config);

/// 2 f^2 (3 + 2|gamma|) / (2|gamma| + 1); the ground state exists iff this is < 1.
double supercritical_ratio(const ModelConfig& config);

/// Every simple root of truncation_residual(config, n, .) in (0, omega_max],
/// sorted ascending. Dispatches on nu: the Coulomb or linear truncation
/// condition is used accordingly. Throws DegenerateCoupling when the residual
/// vanishes identically (f = 0, nu = 0, n even).
std::vector<BoundState> solve_frequency(const ModelConfig& config, int n, double omega_max);

/// solve_frequency restricted to nu > 0.
std::vector<BoundState> solve_frequency_linear(const ModelConfig& config, int n, double omega_max);

/// Which form of the n = 1 cubic in theta to impose together with the
/// energy relation. `legacy` has different coefficients, does not follow from
/// a_2 = 0, and is kept only so its failure to certify can be demonstrated.
enum class CubicForm { rederived, legacy };

/// Left-hand side of the n = 1 frequency condition (a_2 = 0) as a cubic in theta.
///   rederived: theta^3 - [2 f^2 E^2/alpha] theta^2 + [2 m nu f E (alpha+1)/alpha] theta
///              - m^2 nu^2 (alpha+2)/2
///   legacy:    theta^3 - [2 f^2 E^2/(2+2|gamma|)] theta^2 - 2 m nu f E theta
///              - m^2 nu^2 alpha (3+2|gamma|) / (2 (2+|gamma|))
double ground_state_cubic(CubicForm form, const ModelConfig& config, double theta, double energy);

/// n = 1 with the linear potential: solves {cubic(theta, E) = 0,
/// E^2 = truncation energy} by damped Newton from the nu = 0 closed form
/// (the exact f = 0 root when f = 0; the lowest scanned root below w = 1e3
/// when the nu = 0 limit is supercritical), falling back to damped
/// fixed-point iteration. Throws NoPhysicalRoot when neither finds theta > nu with real E.
BoundState ground_state_linear(const ModelConfig& config, CubicForm form = CubicForm::rederived);

}  // namespace kgh
