#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "kgh/cli/run_config.hpp"

namespace kgh::cli {

enum ExitStatus : int {
  exit_ok = 0,
  exit_config_error = 1,
  exit_domain_error = 2,
  exit_numerical_failure = 3,
};

inline constexpr const char* kCsvHeader = "variant,n,l,f,nu,omega,energy,branch,method,residual";
inline constexpr const char* kVerifyCsvColumns = "oracle_energy,energy_delta,nodes,l2_delta,matched";

/// Runs one command, writing the artifact to `out` (or to config.output_path
/// when set). Errors become a JSON error object on `out` plus the exit status.
int run(const RunConfig& config, std::ostream& out);

/// Full command-line entry point: flags, optional --config file, KGH_THREADS.
/// `args` excludes the program name.
int run_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// 17 significant digits, the CSV number format.
std::string format_number(double value);

}  // namespace kgh::cli
