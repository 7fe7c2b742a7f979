#pragma once

// Independent eigensolver for the radial equation in rho,
//
//   R'' + R'/rho + [-gamma^2/rho^2 + 2 E f/rho - 2 m nu rho - theta^2 rho^2 + beta] R = 0,
//   beta = E^2 - m^2 + m w,   theta^2 = m^2 w^2 + nu^2,
//
// solved by shooting at fixed w. E enters both quadratically (beta) and
// linearly (the Coulomb term), so the scan runs over E itself. Nothing here
// uses the Heun series; the only shared code is the physical config.

#include <utility>
#include <vector>

#include "kgh/spectrum.hpp"
#include "kgh/wavefunction.hpp"

namespace kgh {

struct ShootingOptions {
  /// Relative tolerance of the adaptive Dormand-Prince 5(4) integrator.
  double rel_tol = 1e-10;
  /// Uniform energy samples across the bracket before bisection.
  int scan_points = 2000;
  /// Outward start and inward start, in units of 1/sqrt(theta).
  double start_radius = 1e-6;
  double outer_radius = 10.0;
  /// > 0 switches to classical fixed-step RK4 with this step (units of 1/sqrt(theta)).
  double fixed_step = 0.0;
  /// Relative width at which bisection on E stops.
  double energy_tol = 1e-14;
};

/// All eigen-energies in [bracket.first, bracket.second] at this frequency,
/// ascending. Throws BracketExhausted when the mismatch never changes sign
/// and StiffIntegration when step control underflows.
std::vector<double> shoot_eigenvalue(const ModelConfig& config, double omega,
                                     std::pair<double, double> bracket,
                                     const ShootingOptions& options = {});

/// Mismatch function whose zeros are the eigen-energies: the sine of the
/// angle between (R, R') of the outward and inward solutions at the
/// matching radius. The matching radius is the outer classical turning
/// point at `reference_energy`, so it stays fixed across a scan.
double shooting_mismatch(const ModelConfig& config, double omega, double energy,
                         double reference_energy, const ShootingOptions& options = {});

/// Eigenfunction at an oracle eigen-energy, sampled at ascending radii and
/// normalized with the planar measure. Radii must start at 0 and be uniform
/// for the normalization to be meaningful.
std::vector<RadialSample> oracle_eigenfunction(const ModelConfig& config, double omega,
                                               double energy, const std::vector<double>& radii,
                                               const ShootingOptions& options = {});

struct VerificationReport {
  BoundState target;
  double oracle_energy = 0.0;
  /// |E_target - E_oracle| / |E_oracle|.
  double energy_delta = 0.0;
  int node_count_oracle = 0;
  int node_count_analytic = 0;
  /// Planar L2 distance between the normalized analytic and oracle eigenfunctions.
  double wavefunction_l2_delta = 0.0;
  bool matched = false;
};

struct VerifyOptions {
  double bracket_fraction = 0.05;
  int grid_points = kDefaultGridPoints;
  ShootingOptions shooting;
};

constexpr double kMatchEnergyTol = 1e-6;
constexpr double kMatchL2Tol = 1e-4;

/// Compares the state with the nearest oracle eigenvalue whose eigenfunction
/// has the same node count, widening the +-5% bracket by doubling until one
/// appears (the nearest eigenvalue of any node count is the fallback). The
/// comparison grid starts at options.grid_points and is doubled up to four
/// times if the quadrature guard rejects it.
/// A mismatch is reported, not thrown.
VerificationReport verify_state(const BoundState& state, const VerifyOptions& options = {});

}  // namespace kgh
