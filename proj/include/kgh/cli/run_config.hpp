#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "kgh/core.hpp"

namespace kgh::cli {

enum class Command { ground_state, spectrum, verify, wavefunction, sweep };
enum class OutputFormat { csv, json };

std::string_view to_string(Command command);
std::string_view to_string(OutputFormat format);

struct SweepGrid {
  std::vector<double> f;
  std::vector<double> nu;
};

struct RunConfig {
  ModelConfig model;
  Command command = Command::ground_state;
  int n_max = 1;
  double omega_max = 50.0;
  std::optional<SweepGrid> sweep_grid;
  OutputFormat format = OutputFormat::csv;
  std::optional<std::string> output_path;
  /// Samples of the wavefunction command and starting grid of verify.
  int grid_points = 4001;
};

/// Parses the JSON config document. A document with a top-level "config"
/// object (as written by JSON output) is accepted too. Throws
/// Error(config_error) on unknown keys, wrong types or violated invariants.
RunConfig parse_run_config(const nlohmann::json& doc);

nlohmann::json to_json(const RunConfig& config);

/// Exactly one command; sweep needs a grid; n_max >= 1; omega_max > 0.
void validate(const RunConfig& config);

}  // namespace kgh::cli
