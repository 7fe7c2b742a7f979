#include "kgh/oracle.hpp"

#include <algorithm>
#include <array>
#include <boost/math/tools/roots.hpp>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "kgh/errors.hpp"

namespace kgh {
namespace {

namespace odeint = boost::numeric::odeint;
using State = std::array<double, 2>;

// The radial equation at one (w, E), written as R'' = -R'/rho - Q(rho) R with
// Q = -s^2/rho^2 + c_m1/rho + c0 + c1 rho + c2 rho^2.
struct RadialProblem {
  double s = 0.0;  // |gamma|
  double s_sq = 0.0;
  double c_m1 = 0.0;  // 2 E f
  double c0 = 0.0;    // beta
  double c1 = 0.0;    // -2 m nu
  double c2 = 0.0;    // -theta^2
  double scale = 1.0;

  RadialProblem(const ModelConfig& config, double omega, double energy) {
    const double m = config.mass;
    const double l = config.angular_l;
    const double f = config.coulomb_f;
    const double nu = config.linear_nu;
    s_sq = l * l - f * f;
    s = std::sqrt(std::max(s_sq, 0.0));
    c_m1 = 2.0 * energy * f;
    c0 = energy * energy - m * m + m * omega;
    c1 = -2.0 * m * nu;
    c2 = -(m * m * omega * omega + nu * nu);
    scale = std::sqrt(std::sqrt(-c2));
  }

  double q(double rho) const {
    return -s_sq / (rho * rho) + c_m1 / rho + c0 + (c1 + c2 * rho) * rho;
  }

  // V_eff - beta; negative in the classically allowed region.
  double forbidden(double rho) const { return -q(rho); }

  void operator()(const State& y, State& dydt, double rho) const {
    dydt[0] = y[1];
    dydt[1] = -y[1] / rho - q(rho) * y[0];
  }

  // Frobenius start in rho: R = rho^s sum b_k rho^k with
  // k (k + 2s) b_k = -(c_m1 b_{k-1} + c0 b_{k-2} + c1 b_{k-3} + c2 b_{k-4}).
  State series_start(double rho) const {
    std::array<double, 5> b{1.0, 0.0, 0.0, 0.0, 0.0};  // b_k .. b_{k-4}, newest first
    double value = 1.0;
    double slope = s / rho;
    double power = 1.0;
    int quiet = 0;
    for (int k = 1; k < 400 && quiet < 4; ++k) {
      const double bk =
          -(c_m1 * b[0] + c0 * b[1] + c1 * b[2] + c2 * b[3]) / (k * (k + 2.0 * s));
      for (int i = 4; i > 0; --i) b[i] = b[i - 1];
      b[0] = bk;
      power *= rho;
      const double term = bk * power;
      value += term;
      slope += term * (s + k) / rho;
      quiet = (std::abs(term) < 1e-17 * std::abs(value)) ? quiet + 1 : 0;
    }
    const double lead = (s == 0.0) ? 1.0 : std::pow(rho, s);
    return {lead * value, lead * slope};
  }

  // Inward start: decaying WKB slope.
  State tail_start(double rho) const {
    return {1.0, -std::sqrt(std::max(forbidden(rho), 0.0))};
  }
};

using ErrorChecker = odeint::default_error_checker<double, odeint::array_algebra,
                                                   odeint::default_operations>;
using Controlled = odeint::controlled_runge_kutta<odeint::runge_kutta_dopri5<State>, ErrorChecker>;

constexpr long kMaxSteps = 2'000'000;

void propagate(const RadialProblem& problem, State& y, double from, double to,
               const ShootingOptions& options) {
  if (from == to) return;
  if (options.fixed_step > 0.0) {
    odeint::runge_kutta4<State> rk4;
    const double step = options.fixed_step / problem.scale;
    const auto steps = static_cast<long>(std::ceil(std::abs(to - from) / step - 1e-9));
    const double dt = (to - from) / static_cast<double>(std::max(steps, 1L));
    double t = from;
    for (long i = 0; i < std::max(steps, 1L); ++i) {
      rk4.do_step(problem, y, t, dt);
      t = from + static_cast<double>(i + 1) * dt;
    }
    return;
  }

  Controlled stepper(ErrorChecker(0.0, options.rel_tol, 1.0, 1.0));
  const double direction = to > from ? 1.0 : -1.0;
  double t = from;
  double dt = direction * std::min(std::abs(to - from), 0.05 * std::max(std::abs(from), 1e-3 / problem.scale));
  long steps = 0;
  while (direction * (to - t) > 0.0) {
    if (direction * (t + dt - to) > 0.0) dt = to - t;
    const auto result = stepper.try_step(problem, y, t, dt);
    if (result == odeint::fail) {
      if (std::abs(dt) < 1e-15 * std::max(std::abs(t), 1e-300)) {
        throw Error(ErrorKind::stiff_integration,
                    "step size underflow at rho = " + std::to_string(t));
      }
      continue;
    }
    if (++steps > kMaxSteps) {
      throw Error(ErrorKind::stiff_integration, "step budget exhausted");
    }
    if (!std::isfinite(y[0]) || !std::isfinite(y[1])) {
      throw Error(ErrorKind::stiff_integration, "non-finite solution at rho = " + std::to_string(t));
    }
  }
}

struct Geometry {
  double start;
  double match;
  double outer;
};

Geometry geometry_for(const RadialProblem& problem, const ShootingOptions& options) {
  Geometry g;
  g.start = options.start_radius / problem.scale;
  g.outer = options.outer_radius / problem.scale;

  // Outer classical turning point, else the bottom of the effective potential.
  constexpr int kProbe = 4000;
  const double h = (g.outer - g.start) / kProbe;
  int last_allowed = -1;
  int lowest = 1;
  for (int i = 1; i < kProbe; ++i) {
    const double rho = g.start + h * i;
    if (problem.forbidden(rho) < 0.0) last_allowed = i;
    if (problem.forbidden(rho) < problem.forbidden(g.start + h * lowest)) lowest = i;
  }
  if (last_allowed < 0 || last_allowed >= kProbe - 1) {
    g.match = g.start + h * lowest;
  } else {
    double lo = g.start + h * last_allowed;
    double hi = lo + h;
    for (int k = 0; k < 60; ++k) {
      const double mid = 0.5 * (lo + hi);
      (problem.forbidden(mid) < 0.0 ? lo : hi) = mid;
    }
    g.match = 0.5 * (lo + hi);
  }
  g.match = std::clamp(g.match, 2.0 * g.start, 0.9 * g.outer);
  return g;
}

double mismatch_at(const RadialProblem& problem, const Geometry& g, const ShootingOptions& options) {
  State out = problem.series_start(g.start);
  propagate(problem, out, g.start, g.match, options);
  State in = problem.tail_start(g.outer);
  propagate(problem, in, g.outer, g.match, options);
  const double wronskian = out[0] * in[1] - out[1] * in[0];
  return wronskian / (std::hypot(out[0], out[1]) * std::hypot(in[0], in[1]));
}

}  // namespace

double shooting_mismatch(const ModelConfig& config, double omega, double energy,
                         double reference_energy, const ShootingOptions& options) {
  const Geometry g = geometry_for(RadialProblem(config, omega, reference_energy), options);
  return mismatch_at(RadialProblem(config, omega, energy), g, options);
}

std::vector<double> shoot_eigenvalue(const ModelConfig& config, double omega,
                                     std::pair<double, double> bracket,
                                     const ShootingOptions& options) {
  validate(config);
  if (!(omega > 0.0)) throw Error(ErrorKind::invalid_frequency, "oracle needs omega > 0");
  auto [lo, hi] = bracket;
  if (lo > hi) std::swap(lo, hi);
  if (options.scan_points < 2) throw std::invalid_argument("energy scan needs >= 2 points");

  const double reference = 0.5 * (lo + hi);
  const Geometry g = geometry_for(RadialProblem(config, omega, reference), options);
  auto mismatch = [&](double e) { return mismatch_at(RadialProblem(config, omega, e), g, options); };

  const int count = options.scan_points;
  std::vector<double> energies(count);
  std::vector<double> values(count);
  for (int i = 0; i < count; ++i) {
    energies[i] = (i == count - 1) ? hi : lo + (hi - lo) * i / (count - 1);
    values[i] = mismatch(energies[i]);
  }

  std::vector<double> roots;
  auto tol = [&](double a, double b) {
    return std::abs(b - a) <= options.energy_tol * std::max(std::abs(a), std::abs(b));
  };
  for (int i = 0; i + 1 < count; ++i) {
    if (values[i] == 0.0) {
      roots.push_back(energies[i]);
    } else if (std::signbit(values[i]) != std::signbit(values[i + 1]) && values[i + 1] != 0.0) {
      const auto r = boost::math::tools::bisect(mismatch, energies[i], energies[i + 1], tol);
      roots.push_back(0.5 * (r.first + r.second));
    }
  }
  if (values[count - 1] == 0.0) roots.push_back(energies[count - 1]);

  // Integration noise can split one root into a close pair.
  std::vector<double> distinct;
  for (double r : roots) {
    if (distinct.empty() || std::abs(r - distinct.back()) > 1e-9 * std::abs(r)) distinct.push_back(r);
  }
  if (distinct.empty()) {
    throw Error(ErrorKind::bracket_exhausted,
                "no eigenvalue in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  return distinct;
}

std::vector<RadialSample> oracle_eigenfunction(const ModelConfig& config, double omega,
                                               double energy, const std::vector<double>& radii,
                                               const ShootingOptions& options) {
  validate(config);
  if (radii.size() < 2) throw std::invalid_argument("eigenfunction needs >= 2 radii");
  const RadialProblem problem(config, omega, energy);
  Geometry g = geometry_for(problem, options);
  g.outer = std::max(g.outer, radii.back());

  std::vector<RadialSample> samples(radii.size());
  for (std::size_t i = 0; i < radii.size(); ++i) samples[i].rho = radii[i];

  State out = problem.series_start(g.start);
  double t = g.start;
  std::size_t i = 0;
  for (; i < radii.size() && radii[i] <= g.match; ++i) {
    if (radii[i] <= g.start) {
      samples[i].value = radii[i] > 0.0 ? problem.series_start(radii[i])[0]
                                        : (problem.s == 0.0 ? 1.0 : 0.0);
      continue;
    }
    propagate(problem, out, t, radii[i], options);
    t = radii[i];
    samples[i].value = out[0];
  }
  propagate(problem, out, t, g.match, options);

  State in = problem.tail_start(g.outer);
  t = g.outer;
  std::vector<double> inner_values(radii.size() - i);
  for (std::size_t k = radii.size(); k-- > i;) {
    propagate(problem, in, t, radii[k], options);
    t = radii[k];
    inner_values[k - i] = in[0];
  }
  propagate(problem, in, t, g.match, options);

  // Least-squares join of the inward solution onto the outward one.
  const double join = (out[0] * in[0] + out[1] * in[1]) / (in[0] * in[0] + in[1] * in[1]);
  for (std::size_t k = i; k < radii.size(); ++k) samples[k].value = join * inner_values[k - i];

  const double norm = planar_norm_squared(samples);
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw Error(ErrorKind::stiff_integration, "oracle eigenfunction has no finite norm");
  }
  const double factor = 1.0 / std::sqrt(norm);
  for (auto& s : samples) s.value *= factor;
  return samples;
}

constexpr int kGridRefinements = 4;

VerificationReport verify_state(const BoundState& state, const VerifyOptions& options) {
  VerificationReport report;
  report.target = state;

  const SeriesSolution poly = polynomial_of(state, std::numeric_limits<double>::infinity());
  // Low |gamma| makes R^2 rho non-smooth at the origin and slows the
  // quadrature, so the comparison grid is refined until the guard accepts it.
  std::optional<RadialWavefunction> built;
  for (int points = options.grid_points, attempt = 0; !built; points = 2 * points - 1, ++attempt) {
    try {
      built = build_wavefunction(state, poly, 0.0, points);
    } catch (const Error& err) {
      if (err.kind() != ErrorKind::grid_too_coarse || attempt == kGridRefinements) throw;
    }
  }
  const RadialWavefunction& analytic = *built;
  report.node_count_analytic = count_nodes(analytic);
  std::vector<double> radii;
  radii.reserve(analytic.samples.size());
  for (const auto& s : analytic.samples) radii.push_back(s.rho);

  // The state is compared with the oracle level it claims to be: the nearest
  // eigenvalue with the same node count, widening the bracket until one appears.
  // Failing that, the nearest eigenvalue overall.
  const double e = state.energy;
  std::map<double, std::vector<RadialSample>> eigenfunctions;
  auto eigenfunction = [&](double energy) -> const std::vector<RadialSample>& {
    auto it = eigenfunctions.find(energy);
    if (it == eigenfunctions.end()) {
      it = eigenfunctions
               .emplace(energy, oracle_eigenfunction(state.config, state.omega, energy, radii,
                                                     options.shooting))
               .first;
    }
    return it->second;
  };
  std::vector<double> found;
  std::optional<double> chosen;
  double fraction = options.bracket_fraction;
  for (int attempt = 0; attempt < 5 && !chosen; ++attempt, fraction *= 2.0) {
    const double width = std::min(fraction, 0.95) * std::abs(e);
    try {
      found = shoot_eigenvalue(state.config, state.omega, {e - width, e + width}, options.shooting);
    } catch (const Error& err) {
      if (err.kind() != ErrorKind::bracket_exhausted) throw;
      continue;
    }
    std::sort(found.begin(), found.end(),
              [&](double a, double b) { return std::abs(a - e) < std::abs(b - e); });
    for (double candidate : found) {
      if (count_nodes(eigenfunction(candidate)) == report.node_count_analytic) {
        chosen = candidate;
        break;
      }
    }
  }
  if (found.empty()) {
    throw Error(ErrorKind::bracket_exhausted,
                "no oracle eigenvalue within 80% of E = " + std::to_string(e));
  }
  report.oracle_energy = chosen.value_or(found.front());
  report.energy_delta = std::abs(e - report.oracle_energy) / std::abs(report.oracle_energy);

  std::vector<RadialSample> numeric = eigenfunction(report.oracle_energy);
  double overlap = 0.0;
  for (std::size_t i = 0; i < radii.size(); ++i) overlap += numeric[i].value * analytic.samples[i].value;
  if (overlap < 0.0) {
    for (auto& s : numeric) s.value = -s.value;
  }
  std::vector<RadialSample> difference(radii.size());
  for (std::size_t i = 0; i < radii.size(); ++i) {
    difference[i] = {radii[i], analytic.samples[i].value - numeric[i].value};
  }
  report.wavefunction_l2_delta = std::sqrt(planar_norm_squared(difference));
  report.node_count_oracle = count_nodes(numeric);
  report.matched = report.energy_delta < kMatchEnergyTol &&
                   report.node_count_oracle == report.node_count_analytic &&
                   report.wavefunction_l2_delta < kMatchL2Tol;
  return report;
}

}  // namespace kgh
