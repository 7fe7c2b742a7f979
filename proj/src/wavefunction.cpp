#include "kgh/wavefunction.hpp"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <cstdio>
#include <string>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "kgh/errors.hpp"

namespace kgh {
namespace {

std::string format_ratio(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", value);
  return buf;
}

constexpr double kRichardsonTol = 1e-8;
constexpr double kTailTol = 1e-10;
constexpr double kDefaultExtent = 10.0;

double gaussian_mu(const BoundState& state) {
  if (state.variant == Variant::coulomb) return 0.0;
  return derive_linear(state.config, state.energy, state.omega).mu;
}

// Upper bound of int_X^inf exp(-r^2) r^(2|gamma|+1) H(r)^2 dr, dropping exp(-mu r) <= 1.
double tail_bound(const SeriesSolution& poly, double gamma, double x_max) {
  const int degree = *poly.truncation_degree;
  std::vector<double> squared(2 * degree + 1, 0.0);
  for (int i = 0; i <= degree; ++i) {
    for (int j = 0; j <= degree; ++j) {
      squared[i + j] += poly.coefficient(i) * poly.coefficient(j);
    }
  }
  double bound = 0.0;
  for (std::size_t k = 0; k < squared.size(); ++k) {
    const double power = 2.0 * gamma + 1.0 + static_cast<double>(k);
    bound += std::abs(squared[k]) * 0.5 * boost::math::tgamma(0.5 * (power + 1.0), x_max * x_max);
  }
  return bound;
}

}  // namespace

double coordinate_scale(const BoundState& state) {
  return std::sqrt(theta_of(state.config, state.omega));
}

SeriesSolution polynomial_of(const BoundState& state, double tolerance) {
  return truncated_series(state.config, state.n, state.omega, tolerance);
}

double radial_value(const BoundState& state, const SeriesSolution& poly, double rho) {
  const double scale = coordinate_scale(state);
  const double x = scale * rho;
  const double gamma = gamma_abs(state.config);
  const double mu = gaussian_mu(state);
  const double prefactor = (gamma == 0.0) ? 1.0 : std::pow(x, gamma);
  return std::exp(-0.5 * x * x - 0.5 * mu * x) * prefactor * evaluate_series(poly, x);
}

double planar_norm_squared(const std::vector<RadialSample>& samples) {
  if (samples.size() < 2) return 0.0;
  const double h = samples[1].rho - samples[0].rho;
  double sum = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double weight = (i == 0 || i + 1 == samples.size()) ? 0.5 : 1.0;
    sum += weight * samples[i].value * samples[i].value * samples[i].rho;
  }
  return 2.0 * std::numbers::pi * h * sum;
}

RadialWavefunction build_wavefunction(const BoundState& state, double rho_max, int grid_points) {
  return build_wavefunction(state, polynomial_of(state), rho_max, grid_points);
}

RadialWavefunction build_wavefunction(const BoundState& state, const SeriesSolution& poly,
                                      double rho_max, int grid_points) {
  if (grid_points < 100) throw std::invalid_argument("wavefunction grid needs >= 100 points");
  if (!poly.truncation_degree) throw std::invalid_argument("wavefunction needs a polynomial H");

  RadialWavefunction w;
  w.state = state;
  w.scale = coordinate_scale(state);
  if (!(rho_max > 0.0)) rho_max = kDefaultExtent / w.scale;

  const auto count = static_cast<std::size_t>(grid_points);
  const double h = rho_max / static_cast<double>(count - 1);
  w.samples.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double rho = (i + 1 == count) ? rho_max : h * static_cast<double>(i);
    w.samples[i] = {rho, radial_value(state, poly, rho)};
  }

  const double fine = planar_norm_squared(w.samples);
  // Same integral on every other node; an odd leftover panel keeps width h.
  double coarse_sum = 0.0;
  std::size_t last_even = (count - 1) - ((count - 1) % 2);
  for (std::size_t i = 0; i <= last_even; i += 2) {
    const double weight = (i == 0 || i == last_even) ? 0.5 : 1.0;
    coarse_sum += weight * w.samples[i].value * w.samples[i].value * w.samples[i].rho;
  }
  double coarse = 2.0 * std::numbers::pi * 2.0 * h * coarse_sum;
  if (last_even != count - 1) {
    const auto& a = w.samples[last_even];
    const auto& b = w.samples[count - 1];
    coarse += 2.0 * std::numbers::pi * 0.5 * h *
              (a.value * a.value * a.rho + b.value * b.value * b.rho);
  }
  w.quadrature_error = std::abs(fine - coarse) / 3.0;
  if (!(fine > 0.0) || !(w.quadrature_error <= kRichardsonTol * fine)) {
    throw Error(ErrorKind::grid_too_coarse,
                "Richardson estimate " + format_ratio(w.quadrature_error / fine) +
                    " of the norm exceeds 1e-8; raise grid_points");
  }

  const double gamma = gamma_abs(state.config);
  const double tail = 2.0 * std::numbers::pi / (w.scale * w.scale) *
                      tail_bound(poly, gamma, w.scale * rho_max);
  if (!(tail <= kTailTol * fine)) {
    throw Error(ErrorKind::grid_too_coarse,
                "norm beyond rho_max is " + format_ratio(tail / fine) +
                    " of the total; raise rho_max");
  }

  w.norm_constant = 1.0 / std::sqrt(fine);
  for (auto& s : w.samples) s.value *= w.norm_constant;
  return w;
}

int count_nodes(const RadialWavefunction& w) { return count_nodes(w.samples); }

int count_nodes(const std::vector<RadialSample>& samples) {
  double largest = 0.0;
  for (const auto& s : samples) largest = std::max(largest, std::abs(s.value));
  const double floor = 1e-12 * largest;
  int nodes = 0;
  int last_sign = 0;
  for (std::size_t i = 1; i + 1 < samples.size(); ++i) {
    const double v = samples[i].value;
    if (std::abs(v) < floor) continue;
    const int sign = v > 0.0 ? 1 : -1;
    if (last_sign != 0 && sign != last_sign) ++nodes;
    last_sign = sign;
  }
  return nodes;
}

}  // namespace kgh
