#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kgh {

enum class ErrorKind {
  invalid_coupling,
  invalid_frequency,
  no_real_energy,
  supercritical_coupling,
  degenerate_coupling,
  no_physical_root,
  convergence_failure,
  grid_too_coarse,
  bracket_exhausted,
  stiff_integration,
  config_error,
};

std::string_view to_string(ErrorKind kind);

/// Physics-level rejections (exit status 2 at the CLI).
bool is_domain_error(ErrorKind kind);
/// Solver breakdowns (exit status 3 at the CLI).
bool is_numerical_failure(ErrorKind kind);

/// Every failure raised by the library carries a kind so callers can branch
/// without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace kgh
