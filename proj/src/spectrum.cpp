#include "kgh/spectrum.hpp"

#include <gsl/gsl_poly.h>

#include <algorithm>
#include <array>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

#include "kgh/errors.hpp"
#include "kgh/heun.hpp"

namespace kgh {

std::string_view to_string(Method method) {
  return method == Method::closed_form ? "closed_form" : "root_found";
}

double energy_from_frequency(const ModelConfig& config, double omega, int n) {
  const double e_sq = truncated_energy_squared(config, omega, n);
  if (!(e_sq >= 0.0)) {
    throw Error(ErrorKind::no_real_energy,
                "energy relation gives E^2 = " + std::to_string(e_sq) + " < 0 at omega = " +
                    std::to_string(omega));
  }
  return branch_sign(config.branch) * std::sqrt(e_sq);
}

double supercritical_ratio(const ModelConfig& config) {
  const double gamma = gamma_abs(config);
  const double f = config.coulomb_f;
  return 2.0 * f * f * (3.0 + 2.0 * gamma) / (2.0 * gamma + 1.0);
}

BoundState ground_state_coulomb(const ModelConfig& config) {
  validate(config);
  if (config.linear_nu != 0.0) {
    throw std::invalid_argument("ground_state_coulomb requires nu = 0; use ground_state_linear");
  }
  if (config.coulomb_f == 0.0) {
    throw Error(ErrorKind::degenerate_coupling,
                "frequency unconstrained at f = 0: the spectrum is the free Klein-Gordon oscillator");
  }
  const double ratio = supercritical_ratio(config);
  if (!(ratio < 1.0)) {
    throw Error(ErrorKind::supercritical_coupling,
                "2 f^2 (3 + 2|gamma|) / (2|gamma| + 1) = " + std::to_string(ratio) +
                    " >= 1: no real ground-state energy");
  }
  const double m = config.mass;
  const double f = config.coulomb_f;
  const double alpha = 2.0 * gamma_abs(config) + 1.0;

  BoundState state;
  state.config = config;
  state.n = 1;
  state.variant = Variant::coulomb;
  state.method = Method::closed_form;
  state.energy = branch_sign(config.branch) * m / std::sqrt(1.0 - ratio);
  state.omega = 2.0 * state.energy * state.energy * f * f / (m * alpha);

  const double e_sq = truncated_energy_squared(config, state.omega, 1);
  const double e_sq_closed = state.energy * state.energy;
  if (std::abs(e_sq - e_sq_closed) > 1e-12 * e_sq_closed) {
    throw std::logic_error("ground-state frequency and energy relations disagree");
  }
  const TruncationProbe probe = probe_truncation(config, 1, state.omega);
  state.residual = probe.residual;
  state.coefficient_scale = probe.coefficient_scale;
  return state;
}

namespace {

constexpr int kPointsPerDecade = 400;
constexpr int kDecadesBelowMax = 12;
constexpr double kRootRelTol = 1e-13;
constexpr double kResidualTol = 1e-10;

// Residual with failures (no real energy) mapped to NaN so the scan can skip them.
double residual_or_nan(const ModelConfig& config, int n, double omega) {
  try {
    return truncation_residual(config, n, omega);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::no_real_energy) return std::numeric_limits<double>::quiet_NaN();
    throw;
  }
}

std::optional<BoundState> refine_root(const ModelConfig& config, int n, double lo, double hi,
                                      bool exact_hit) {
  double omega = lo;
  if (!exact_hit) {
    auto sign_of = [&](double w) {
      const double r = residual_or_nan(config, n, w);
      return std::isnan(r) ? 0.0 : r;
    };
    auto tol = [](double a, double b) { return std::abs(b - a) <= kRootRelTol * std::max(a, b); };
    try {
      const auto bracket = boost::math::tools::bisect(sign_of, lo, hi, tol);
      omega = 0.5 * (bracket.first + bracket.second);
    } catch (const boost::math::evaluation_error&) {
      return std::nullopt;
    }
  }
  TruncationProbe probe;
  try {
    probe = probe_truncation(config, n, omega);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::no_real_energy) return std::nullopt;
    throw;
  }
  if (!(std::abs(probe.residual) <= kResidualTol * probe.coefficient_scale)) {
    return std::nullopt;  // sign flip across a discontinuity, not a root
  }
  BoundState state;
  state.config = config;
  state.n = n;
  state.omega = omega;
  state.energy = probe.energy;
  state.variant = variant_of(config);
  state.method = Method::root_found;
  state.residual = probe.residual;
  state.coefficient_scale = probe.coefficient_scale;
  return state;
}

}  // namespace

std::vector<BoundState> solve_frequency(const ModelConfig& config, int n, double omega_max) {
  validate(config);
  if (n < 1) throw std::invalid_argument("polynomial degree n must be >= 1");
  if (!(omega_max > 0.0) || !std::isfinite(omega_max)) {
    throw Error(ErrorKind::invalid_frequency, "omega_max must be positive");
  }
  const bool parity_locked = config.coulomb_f == 0.0 && config.linear_nu == 0.0;
  if (parity_locked && n % 2 == 0) {
    throw Error(ErrorKind::degenerate_coupling,
                "frequency unconstrained at f = 0: a_{n+1} vanishes identically for even n");
  }

  const int count = kPointsPerDecade * kDecadesBelowMax + 1;
  std::vector<double> grid(count);
  std::vector<double> values(count);
  for (int i = 0; i < count; ++i) {
    const double exponent = static_cast<double>(i - (count - 1)) / kPointsPerDecade;
    grid[i] = (i == count - 1) ? omega_max : omega_max * std::pow(10.0, exponent);
    values[i] = residual_or_nan(config, n, grid[i]);
  }
  const bool all_zero = std::all_of(values.begin(), values.end(), [](double v) { return v == 0.0; });
  if (all_zero) {
    throw Error(ErrorKind::degenerate_coupling,
                "frequency unconstrained: the truncation residual vanishes on the whole window");
  }

  std::vector<BoundState> states;
  for (int i = 0; i < count; ++i) {
    const double v = values[i];
    if (std::isnan(v)) continue;
    if (v == 0.0) {
      if (auto s = refine_root(config, n, grid[i], grid[i], true)) states.push_back(*s);
      continue;
    }
    if (i + 1 < count) {
      const double w = values[i + 1];
      if (!std::isnan(w) && w != 0.0 && std::signbit(v) != std::signbit(w)) {
        if (auto s = refine_root(config, n, grid[i], grid[i + 1], false)) states.push_back(*s);
      }
    }
  }
  std::sort(states.begin(), states.end(),
            [](const BoundState& a, const BoundState& b) { return a.omega < b.omega; });
  return states;
}

std::vector<BoundState> solve_frequency_linear(const ModelConfig& config, int n, double omega_max) {
  if (!(config.linear_nu > 0.0)) {
    throw std::invalid_argument("solve_frequency_linear requires nu > 0");
  }
  return solve_frequency(config, n, omega_max);
}

namespace {

// theta^3 + c2(E) theta^2 + c1(E) theta + c0, with dc2/dE, dc1/dE.
struct Cubic {
  double c2, c1, c0, dc2, dc1;

  double value(double t) const { return ((t + c2) * t + c1) * t + c0; }
  double d_theta(double t) const { return (3.0 * t + 2.0 * c2) * t + c1; }
  double d_energy(double t) const { return (dc2 * t + dc1) * t; }
};

Cubic cubic_at(CubicForm form, const ModelConfig& config, double energy) {
  const double m = config.mass;
  const double f = config.coulomb_f;
  const double nu = config.linear_nu;
  const double gamma = gamma_abs(config);
  const double alpha = 2.0 * gamma + 1.0;
  if (form == CubicForm::rederived) {
    return {-2.0 * f * f * energy * energy / alpha,
            2.0 * m * nu * f * energy * (alpha + 1.0) / alpha,
            -m * m * nu * nu * (alpha + 2.0) / 2.0,
            -4.0 * f * f * energy / alpha,
            2.0 * m * nu * f * (alpha + 1.0) / alpha};
  }
  return {-2.0 * f * f * energy * energy / (2.0 + 2.0 * gamma),
          -2.0 * m * nu * f * energy,
          -m * m * nu * nu * alpha * (3.0 + 2.0 * gamma) / (2.0 * (2.0 + gamma)),
          -4.0 * f * f * energy / (2.0 + 2.0 * gamma),
          -2.0 * m * nu * f};
}

// E^2 from the n = 1 energy relation written in theta (m w = sqrt(theta^2 - nu^2)).
struct EnergyRelation {
  double m, nu, gamma;

  double value(double theta) const {
    return m * m - std::sqrt(theta * theta - nu * nu) + 2.0 * theta * (gamma + 2.0) -
           m * m * nu * nu / (theta * theta);
  }
  double derivative(double theta) const {
    return -theta / std::sqrt(theta * theta - nu * nu) + 2.0 * (gamma + 2.0) +
           2.0 * m * m * nu * nu / (theta * theta * theta);
  }
};

struct Root {
  double theta;
  double energy;
};

std::optional<Root> newton_solve(CubicForm form, const ModelConfig& config,
                                 const EnergyRelation& rel, Root guess) {
  const double sign = branch_sign(config.branch);
  const double theta_scale = guess.theta;
  const double energy_scale = std::abs(guess.energy);
  auto residuals = [&](const Root& x) {
    const Cubic c = cubic_at(form, config, x.energy);
    const double t3 = theta_scale * theta_scale * theta_scale;
    return std::array<double, 2>{c.value(x.theta) / t3,
                                 (x.energy * x.energy - rel.value(x.theta)) /
                                     (energy_scale * energy_scale)};
  };
  auto merit = [](const std::array<double, 2>& r) { return r[0] * r[0] + r[1] * r[1]; };

  Root x = guess;
  auto r = residuals(x);
  for (int iter = 0; iter < 200; ++iter) {
    if (merit(r) < 1e-30) break;
    const Cubic c = cubic_at(form, config, x.energy);
    const double t3 = theta_scale * theta_scale * theta_scale;
    const double e2 = energy_scale * energy_scale;
    const double j11 = c.d_theta(x.theta) / t3;
    const double j12 = c.d_energy(x.theta) / t3;
    const double j21 = -rel.derivative(x.theta) / e2;
    const double j22 = 2.0 * x.energy / e2;
    const double det = j11 * j22 - j12 * j21;
    if (!std::isfinite(det) || det == 0.0) return std::nullopt;
    const double step_theta = (r[0] * j22 - r[1] * j12) / det;
    const double step_energy = (j11 * r[1] - j21 * r[0]) / det;

    double lambda = 1.0;
    bool accepted = false;
    for (int k = 0; k < 60; ++k, lambda *= 0.5) {
      const Root trial{x.theta - lambda * step_theta, x.energy - lambda * step_energy};
      if (!(trial.theta > config.linear_nu) || trial.energy * sign <= 0.0) continue;
      const auto rt = residuals(trial);
      if (std::isfinite(merit(rt)) && merit(rt) < merit(r)) {
        x = trial;
        r = rt;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  if (!(merit(r) < 1e-24)) return std::nullopt;
  return x;
}

std::optional<Root> fixed_point_solve(CubicForm form, const ModelConfig& config,
                                      const EnergyRelation& rel, Root guess) {
  const double sign = branch_sign(config.branch);
  constexpr double kDamping = 0.5;
  double theta = guess.theta;
  for (int iter = 0; iter < 2000; ++iter) {
    const double e_sq = rel.value(theta);
    if (!(e_sq > 0.0)) return std::nullopt;
    const double energy = sign * std::sqrt(e_sq);
    const Cubic c = cubic_at(form, config, energy);
    std::array<double, 3> roots{};
    const int found = gsl_poly_solve_cubic(c.c2, c.c1, c.c0, &roots[0], &roots[1], &roots[2]);
    double best = std::numeric_limits<double>::quiet_NaN();
    for (int k = 0; k < found; ++k) {
      if (roots[k] > config.linear_nu &&
          (std::isnan(best) || std::abs(roots[k] - theta) < std::abs(best - theta))) {
        best = roots[k];
      }
    }
    if (std::isnan(best)) return std::nullopt;
    const double next = (1.0 - kDamping) * theta + kDamping * best;
    if (std::abs(next - theta) <= 1e-15 * theta) {
      return Root{next, sign * std::sqrt(rel.value(next))};
    }
    theta = next;
  }
  return std::nullopt;
}

}  // namespace

double ground_state_cubic(CubicForm form, const ModelConfig& config, double theta, double energy) {
  return cubic_at(form, config, energy).value(theta);
}

constexpr double kSeedScanOmegaMax = 1e3;

BoundState ground_state_linear(const ModelConfig& config, CubicForm form) {
  validate(config);
  if (!(config.linear_nu > 0.0)) {
    throw std::invalid_argument("ground_state_linear requires nu > 0");
  }
  const double m = config.mass;
  const double nu = config.linear_nu;
  const double sign = branch_sign(config.branch);
  const EnergyRelation rel{m, nu, gamma_abs(config)};

  Root guess{};
  ModelConfig coulomb = config;
  coulomb.linear_nu = 0.0;
  if (config.coulomb_f != 0.0 && supercritical_ratio(coulomb) < 1.0) {
    const BoundState limit = ground_state_coulomb(coulomb);
    guess.theta = std::hypot(m * limit.omega, nu);
    guess.energy = limit.energy;
  } else if (config.coulomb_f != 0.0) {
    // No nu = 0 ground state to continue from: seed with the lowest scanned root.
    const auto roots = solve_frequency_linear(config, 1, kSeedScanOmegaMax);
    if (roots.empty()) {
      throw Error(ErrorKind::no_physical_root, "no n = 1 frequency below " +
                                                   std::to_string(kSeedScanOmegaMax));
    }
    guess.theta = theta_of(config, roots.front().omega);
    guess.energy = roots.front().energy;
  } else {
    // f = 0: the cubic collapses to theta^3 + c0 = 0.
    guess.theta = std::cbrt(-cubic_at(form, config, 0.0).c0);
    const double e_sq = rel.value(guess.theta);
    guess.energy = sign * (e_sq > 0.0 ? std::sqrt(e_sq) : m);
  }

  std::optional<Root> root = newton_solve(form, config, rel, guess);
  if (!root) root = fixed_point_solve(form, config, rel, guess);
  if (!root || !(root->theta > nu)) {
    throw Error(ErrorKind::no_physical_root,
                "no theta > nu with real energy satisfies the ground-state condition");
  }
  const double e_sq = rel.value(root->theta);
  if (!(e_sq > 0.0)) {
    throw Error(ErrorKind::no_physical_root, "ground-state root has no real energy");
  }

  BoundState state;
  state.config = config;
  state.n = 1;
  state.variant = Variant::linear;
  state.method = Method::root_found;
  state.omega = std::sqrt(root->theta * root->theta - nu * nu) / m;
  if (!(state.omega > 0.0)) {
    throw Error(ErrorKind::no_physical_root, "ground-state root has theta = nu (zero frequency)");
  }
  state.energy = energy_from_frequency(config, state.omega, 1);
  const TruncationProbe probe = probe_truncation(config, 1, state.omega);
  state.residual = probe.residual;
  state.coefficient_scale = probe.coefficient_scale;
  return state;
}

}  // namespace kgh
