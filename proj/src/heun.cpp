#include "kgh/heun.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "kgh/errors.hpp"

namespace kgh {
namespace {

// Both reductions share one recurrence; the Coulomb case has mu = 0.
struct RecurrenceParams {
  double alpha;
  double mu;
  double vartheta;
  double sigma;
};

RecurrenceParams recurrence_of(const CoulombDerived& p) {
  return {p.alpha, 0.0, p.delta, p.g};
}

RecurrenceParams recurrence_of(const LinearDerived& p) {
  return {p.alpha, p.mu, p.vartheta, p.sigma};
}

RecurrenceParams recurrence_of(const DerivedParams& params) {
  return std::visit([](const auto& p) { return recurrence_of(p); }, params);
}

constexpr int kRescaleBits = 600;
const double kRescaleThreshold = std::ldexp(1.0, kRescaleBits);

double next_coefficient(const RecurrenceParams& r, int j, double a_j, double a_j1) {
  const double jd = j;
  const double denom = (jd + 2.0) * (jd + 1.0 + r.alpha);
  return ((r.mu * (jd + 1.0) - r.vartheta) * a_j1 - (r.sigma - 2.0 * jd) * a_j) / denom;
}

SeriesSolution generate(const DerivedParams& params, Variant variant, int max_index) {
  if (max_index < 2) {
    throw std::invalid_argument("series needs at least coefficients a_0..a_2");
  }
  const RecurrenceParams r = recurrence_of(params);
  SeriesSolution s;
  s.variant = variant;
  s.params = params;
  auto& a = s.coefficients;
  a.reserve(static_cast<std::size_t>(max_index) + 1);
  a.push_back(1.0);
  a.push_back(-r.vartheta / r.alpha);
  for (int j = 0; j + 2 <= max_index; ++j) {
    const double next = next_coefficient(r, j, a[j], a[j + 1]);
    a.push_back(next);
    if (std::abs(next) > kRescaleThreshold) {
      for (double& c : a) c = std::ldexp(c, -kRescaleBits);
      s.exponent += kRescaleBits;
    }
  }
  return s;
}

}  // namespace

double SeriesSolution::coefficient(std::size_t j) const {
  return std::ldexp(coefficients.at(j), exponent);
}

double SeriesSolution::magnitude() const {
  double largest = 0.0;
  for (double c : coefficients) largest = std::max(largest, std::abs(c));
  return std::ldexp(largest, exponent);
}

SeriesSolution coefficients_coulomb(const CoulombDerived& p, int max_index) {
  return generate(p, Variant::coulomb, max_index);
}

SeriesSolution coefficients_linear(const LinearDerived& p, int max_index) {
  return generate(p, Variant::linear, max_index);
}

namespace {

double truncated_energy(const ModelConfig& config, int n, double omega) {
  const double e_sq = truncated_energy_squared(config, omega, n);
  if (!(e_sq >= 0.0)) {
    throw Error(ErrorKind::no_real_energy,
                "truncation condition gives E^2 = " + std::to_string(e_sq) + " < 0");
  }
  return branch_sign(config.branch) * std::sqrt(e_sq);
}

SeriesSolution series_at(const ModelConfig& config, double energy, double omega, int max_index) {
  if (variant_of(config) == Variant::coulomb) {
    return coefficients_coulomb(derive_coulomb(config, energy, omega), max_index);
  }
  return coefficients_linear(derive_linear(config, energy, omega), max_index);
}

void check_degree(int n) {
  if (n < 1) throw std::invalid_argument("polynomial degree n must be >= 1");
}

}  // namespace

TruncationProbe probe_truncation(const ModelConfig& config, int n, double omega) {
  check_degree(n);
  TruncationProbe probe;
  probe.energy = truncated_energy(config, n, omega);
  const SeriesSolution s = series_at(config, probe.energy, omega, std::max(n + 1, 2));
  double largest = 0.0;
  for (int j = 0; j <= n; ++j) largest = std::max(largest, std::abs(s.coefficients[j]));
  probe.coefficient_scale = std::ldexp(largest, s.exponent);
  probe.residual = s.coefficient(static_cast<std::size_t>(n) + 1);
  return probe;
}

double truncation_residual(const ModelConfig& config, int n, double omega) {
  return probe_truncation(config, n, omega).residual;
}

SeriesSolution truncated_series(const ModelConfig& config, int n, double omega, double tolerance) {
  check_degree(n);
  const double energy = truncated_energy(config, n, omega);
  SeriesSolution s = series_at(config, energy, omega, n + 2);
  double largest = 0.0;
  for (int j = 0; j <= n; ++j) largest = std::max(largest, std::abs(s.coefficients[j]));
  const double tail = std::max(std::abs(s.coefficients[n + 1]), std::abs(s.coefficients[n + 2]));
  if (!(tail <= tolerance * largest)) {
    throw Error(ErrorKind::convergence_failure,
                "series does not terminate at degree " + std::to_string(n) +
                    ": |a_{n+1}|, |a_{n+2}| relative size " + std::to_string(tail / largest));
  }
  s.coefficients[n + 1] = 0.0;
  s.coefficients[n + 2] = 0.0;
  s.truncation_degree = n;
  return s;
}

double evaluate_series(const SeriesSolution& s, double x) {
  if (x < 0.0) throw std::invalid_argument("series evaluated at negative argument");
  const auto& a = s.coefficients;
  if (s.truncation_degree) {
    double h = 0.0;
    for (int j = *s.truncation_degree; j >= 0; --j) h = h * x + a[j];
    return std::ldexp(h, s.exponent);
  }

  const RecurrenceParams r = recurrence_of(s.params);
  constexpr double kTailRatio = 1e-15;
  constexpr int kPassesNeeded = 5;
  constexpr int kMaxFailures = 200;

  std::vector<double> work = a;
  double power = 1.0;
  double sum = 0.0;
  int passes = 0;
  int failures = 0;
  for (std::size_t j = 0;; ++j) {
    if (j >= work.size()) {
      work.push_back(next_coefficient(r, static_cast<int>(j) - 2, work[j - 2], work[j - 1]));
    }
    const double term = work[j] * power;
    sum += term;
    if (!std::isfinite(sum)) break;
    if (std::abs(term) < kTailRatio * std::abs(sum)) {
      if (++passes == kPassesNeeded) return std::ldexp(sum, s.exponent);
      failures = 0;
    } else {
      passes = 0;
      if (++failures == kMaxFailures) break;
    }
    power *= x;
  }
  throw Error(ErrorKind::convergence_failure,
              "Heun series failed the tail criterion at x = " + std::to_string(x));
}

HeunResidual heun_ode_residual(const SeriesSolution& s, double x) {
  if (!(x > 0.0)) throw std::invalid_argument("Heun residual needs x > 0");
  const RecurrenceParams r = recurrence_of(s.params);
  const std::size_t last = s.truncation_degree
                               ? static_cast<std::size_t>(*s.truncation_degree)
                               : s.coefficients.size() - 1;
  double h = 0.0, dh = 0.0, d2h = 0.0;
  for (std::size_t k = last + 1; k-- > 0;) {
    d2h = d2h * x + 2.0 * dh;
    dh = dh * x + h;
    h = h * x + s.coefficient(k);
  }
  const double terms[] = {
      d2h,
      r.alpha / x * dh,
      -r.mu * dh,
      -2.0 * x * dh,
      r.sigma * h,
      r.vartheta / x * h,
  };
  HeunResidual out;
  for (double t : terms) {
    out.residual += t;
    out.scale += std::abs(t);
  }
  return out;
}

}  // namespace kgh
