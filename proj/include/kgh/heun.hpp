#pragma once

// Frobenius series of the biconfluent Heun equation around the origin,
//
//   H'' + (alpha/x - mu - 2x) H' + (sigma + vartheta/x) H = 0,
//
// which covers both reductions: the Coulomb case is mu = 0, sigma = g,
// vartheta = delta. With H = sum a_j x^j and a_0 = 1,
//
//   a_1 = -vartheta/alpha
//   (j+2)(j+1+alpha) a_{j+2} = [mu (j+1) - vartheta] a_{j+1} - (sigma - 2j) a_j.

#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

#include "kgh/core.hpp"

namespace kgh {

using DerivedParams = std::variant<CoulombDerived, LinearDerived>;

/// Coefficients are stored with a shared binary exponent: a_j = ldexp(stored[j], exponent).
/// The exponent only moves when the working sequence would otherwise overflow.
struct SeriesSolution {
  std::vector<double> coefficients;
  int exponent = 0;
  Variant variant = Variant::coulomb;
  DerivedParams params;
  std::optional<int> truncation_degree;

  std::size_t size() const { return coefficients.size(); }
  double coefficient(std::size_t j) const;
  /// max_j |a_j| over the stored list (true scale).
  double magnitude() const;
};

SeriesSolution coefficients_coulomb(const CoulombDerived& p, int max_index);
SeriesSolution coefficients_linear(const LinearDerived& p, int max_index);

/// Value of a_{n+1} when the energy is pinned to the degree-n truncation
/// condition at this frequency, together with the quantities needed to judge it.
struct TruncationProbe {
  double energy = 0.0;
  double residual = 0.0;
  /// max_{j <= n} |a_j|; the natural unit for |residual|.
  double coefficient_scale = 0.0;
};

TruncationProbe probe_truncation(const ModelConfig& config, int n, double omega);

/// a_{n+1} under g = 2n (or sigma = 2n). Roots over omega are the admissible frequencies.
double truncation_residual(const ModelConfig& config, int n, double omega);

/// Builds the degree-n polynomial at an admissible (omega, n). Throws
/// ConvergenceFailure if a_{n+1} or a_{n+2} exceed tolerance * max|a_j|;
/// on success both are stored as exact zeros.
SeriesSolution truncated_series(const ModelConfig& config, int n, double omega,
                                double tolerance = 1e-10);

/// H(x). Horner evaluation for polynomials; otherwise the recurrence is
/// continued until 5 consecutive terms fall below 1e-15 of the partial sum.
double evaluate_series(const SeriesSolution& s, double x);

struct HeunResidual {
  double residual = 0.0;
  /// Sum of the magnitudes of the individual terms of the equation.
  double scale = 0.0;
};

/// Substitutes a polynomial solution into the Heun equation at x > 0.
HeunResidual heun_ode_residual(const SeriesSolution& s, double x);

}  // namespace kgh
