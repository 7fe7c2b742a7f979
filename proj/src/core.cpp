#include "kgh/core.hpp"

#include <cmath>
#include <string>

#include "kgh/errors.hpp"

namespace kgh {

std::string_view to_string(Branch branch) {
  return branch == Branch::positive_energy ? "positive_energy" : "negative_energy";
}

std::string_view to_string(Variant variant) {
  return variant == Variant::coulomb ? "coulomb" : "linear";
}

void validate(const ModelConfig& config) {
  if (!(config.mass > 0.0) || !std::isfinite(config.mass)) {
    throw Error(ErrorKind::invalid_coupling, "mass must be positive and finite");
  }
  if (!std::isfinite(config.coulomb_f)) {
    throw Error(ErrorKind::invalid_coupling, "coulomb strength must be finite");
  }
  if (!(config.linear_nu >= 0.0) || !std::isfinite(config.linear_nu)) {
    throw Error(ErrorKind::invalid_coupling, "linear strength nu must be non-negative");
  }
  const double l = config.angular_l;
  const double gamma_sq = l * l - config.coulomb_f * config.coulomb_f;
  const bool free_s_wave = config.angular_l == 0 && config.coulomb_f == 0.0;
  if (!(gamma_sq > 0.0) && !free_s_wave) {
    throw Error(ErrorKind::invalid_coupling,
                "fall to the center: l^2 - f^2 = " + std::to_string(gamma_sq) +
                    " must be positive for a regular r^|gamma| solution");
  }
}

double gamma_abs(const ModelConfig& config) {
  validate(config);
  const double l = config.angular_l;
  return std::sqrt(l * l - config.coulomb_f * config.coulomb_f);
}

namespace {

void check_frequency(double omega) {
  if (!(omega > 0.0) || !std::isfinite(omega)) {
    throw Error(ErrorKind::invalid_frequency, "oscillator frequency must be positive");
  }
}

}  // namespace

CoulombDerived derive_coulomb(const ModelConfig& config, double energy, double omega) {
  check_frequency(omega);
  CoulombDerived p;
  const double m = config.mass;
  const double m_omega = m * omega;
  p.gamma_abs = gamma_abs(config);
  p.beta = energy * energy - m * m + m_omega;
  p.delta = (2.0 * energy * config.coulomb_f) / std::sqrt(m_omega);
  p.alpha = 2.0 * p.gamma_abs + 1.0;
  p.g = p.beta / m_omega - 2.0 - 2.0 * p.gamma_abs;
  return p;
}

double theta_of(const ModelConfig& config, double omega) {
  const double m_omega = config.mass * omega;
  return std::sqrt(m_omega * m_omega + config.linear_nu * config.linear_nu);
}

LinearDerived derive_linear(const ModelConfig& config, double energy, double omega) {
  check_frequency(omega);
  LinearDerived p;
  const double m = config.mass;
  const double nu = config.linear_nu;
  p.gamma_abs = gamma_abs(config);
  p.alpha = 2.0 * p.gamma_abs + 1.0;
  p.beta = energy * energy - m * m + m * omega;
  p.theta = theta_of(config, omega);
  const double sqrt_theta = std::sqrt(p.theta);
  p.tau = (2.0 * energy * config.coulomb_f) / sqrt_theta;
  p.mu = 2.0 * m * nu / (p.theta * sqrt_theta);
  p.sigma = p.beta / p.theta + p.mu * p.mu / 4.0 - 2.0 - 2.0 * p.gamma_abs;
  p.vartheta = p.tau - 0.5 * p.mu * p.alpha;
  return p;
}

double truncated_energy_squared(const ModelConfig& config, double omega, int n) {
  check_frequency(omega);
  const double m = config.mass;
  const double gamma = gamma_abs(config);
  if (variant_of(config) == Variant::coulomb) {
    return m * m + m * omega * (2.0 * n + 2.0 * gamma + 1.0);
  }
  const double nu = config.linear_nu;
  const double theta = theta_of(config, omega);
  return m * m - m * omega + 2.0 * theta * (n + gamma + 1.0) - m * m * nu * nu / (theta * theta);
}

}  // namespace kgh
