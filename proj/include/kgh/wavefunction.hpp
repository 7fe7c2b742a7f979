#pragma once

// Radial wavefunctions of polynomial bound states,
//
//   coulomb: R = exp(-r^2/2) r^|gamma| H(r),                 r  = sqrt(m w) rho
//   linear:  R = exp(-xi^2/2) exp(-mu xi/2) xi^|gamma| H(xi), xi = sqrt(theta) rho
//
// normalized with the planar measure 2 pi rho d rho. The phase factors
// exp(-iEt) exp(il phi) have unit modulus and are not stored.

#include <vector>

#include "kgh/heun.hpp"
#include "kgh/spectrum.hpp"

namespace kgh {

struct RadialSample {
  double rho = 0.0;
  double value = 0.0;
};

struct RadialWavefunction {
  BoundState state;
  /// sqrt(m w) for the Coulomb variant, sqrt(theta) for the linear one.
  double scale = 1.0;
  /// Normalized samples on a uniform grid starting at rho = 0.
  std::vector<RadialSample> samples;
  /// Factor applied to the unnormalized R to reach unit planar norm.
  double norm_constant = 1.0;
  /// Absolute Richardson error estimate of the normalization integral.
  double quadrature_error = 0.0;
};

constexpr int kDefaultGridPoints = 4001;

/// Coordinate scale of the bound state's reduction.
double coordinate_scale(const BoundState& state);

/// Polynomial part H of the bound state (degree state.n). The tolerance is
/// forwarded to truncated_series; +inf forces truncation of a state that is
/// not actually admissible, which is how candidate states are compared.
SeriesSolution polynomial_of(const BoundState& state, double tolerance = 1e-10);

/// Unnormalized R(rho).
double radial_value(const BoundState& state, const SeriesSolution& poly, double rho);

/// Samples R on [0, rho_max] (rho_max <= 0 selects 10 / scale) and normalizes it
/// by trapezoidal quadrature. Throws GridTooCoarse when the Richardson estimate
/// exceeds 1e-8 of the norm or the analytic tail beyond rho_max exceeds 1e-10.
RadialWavefunction build_wavefunction(const BoundState& state, double rho_max = 0.0,
                                      int grid_points = kDefaultGridPoints);

/// Same, with the polynomial supplied by the caller.
RadialWavefunction build_wavefunction(const BoundState& state, const SeriesSolution& poly,
                                      double rho_max, int grid_points);

/// Strict sign changes on (0, rho_max), ignoring |R| < 1e-12 max|R|.
int count_nodes(const RadialWavefunction& w);
int count_nodes(const std::vector<RadialSample>& samples);

/// Trapezoid approximation of 2 pi int |R|^2 rho d rho over uniform samples.
double planar_norm_squared(const std::vector<RadialSample>& samples);

}  // namespace kgh
