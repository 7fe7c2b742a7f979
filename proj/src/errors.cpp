#include "kgh/errors.hpp"

namespace kgh {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_coupling: return "InvalidCoupling";
    case ErrorKind::invalid_frequency: return "InvalidFrequency";
    case ErrorKind::no_real_energy: return "NoRealEnergy";
    case ErrorKind::supercritical_coupling: return "SupercriticalCoupling";
    case ErrorKind::degenerate_coupling: return "DegenerateCoupling";
    case ErrorKind::no_physical_root: return "NoPhysicalRoot";
    case ErrorKind::convergence_failure: return "ConvergenceFailure";
    case ErrorKind::grid_too_coarse: return "GridTooCoarse";
    case ErrorKind::bracket_exhausted: return "BracketExhausted";
    case ErrorKind::stiff_integration: return "StiffIntegration";
    case ErrorKind::config_error: return "ConfigError";
  }
  return "Unknown";
}

bool is_domain_error(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_coupling:
    case ErrorKind::invalid_frequency:
    case ErrorKind::no_real_energy:
    case ErrorKind::supercritical_coupling:
    case ErrorKind::degenerate_coupling:
    case ErrorKind::no_physical_root:
      return true;
    default:
      return false;
  }
}

bool is_numerical_failure(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::convergence_failure:
    case ErrorKind::grid_too_coarse:
    case ErrorKind::bracket_exhausted:
    case ErrorKind::stiff_integration:
      return true;
    default:
      return false;
  }
}

}  // namespace kgh
