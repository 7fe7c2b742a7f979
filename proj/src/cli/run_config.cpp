#include "kgh/cli/run_config.hpp"

#include <cmath>
#include <set>

#include "kgh/errors.hpp"

namespace kgh::cli {

using nlohmann::json;

std::string_view to_string(Command command) {
  switch (command) {
    case Command::ground_state: return "ground-state";
    case Command::spectrum: return "spectrum";
    case Command::verify: return "verify";
    case Command::wavefunction: return "wavefunction";
    case Command::sweep: return "sweep";
  }
  return "unknown";
}

std::string_view to_string(OutputFormat format) {
  return format == OutputFormat::csv ? "csv" : "json";
}

namespace {

[[noreturn]] void fail(const std::string& message) {
  throw Error(ErrorKind::config_error, message);
}

double number_at(const json& doc, const char* key) {
  const json& v = doc.at(key);
  if (!v.is_number()) fail(std::string("key '") + key + "' must be a number");
  return v.get<double>();
}

int integer_at(const json& doc, const char* key) {
  const json& v = doc.at(key);
  if (!v.is_number_integer()) fail(std::string("key '") + key + "' must be an integer");
  return v.get<int>();
}

std::string string_at(const json& doc, const char* key) {
  const json& v = doc.at(key);
  if (!v.is_string()) fail(std::string("key '") + key + "' must be a string");
  return v.get<std::string>();
}

Command parse_command(const std::string& name) {
  for (Command c : {Command::ground_state, Command::spectrum, Command::verify,
                    Command::wavefunction, Command::sweep}) {
    if (name == to_string(c)) return c;
  }
  fail("unknown command '" + name + "'");
}

Branch parse_branch(const std::string& name) {
  if (name == "positive_energy" || name == "positive") return Branch::positive_energy;
  if (name == "negative_energy" || name == "negative") return Branch::negative_energy;
  fail("branch must be positive_energy or negative_energy, got '" + name + "'");
}

std::vector<double> number_list(const json& v, const char* key) {
  if (!v.is_array()) fail(std::string("grid.") + key + " must be an array of numbers");
  std::vector<double> out;
  for (const auto& item : v) {
    if (!item.is_number()) fail(std::string("grid.") + key + " must hold numbers only");
    out.push_back(item.get<double>());
  }
  return out;
}

}  // namespace

RunConfig parse_run_config(const json& input) {
  const json& doc = (input.is_object() && input.contains("config")) ? input.at("config") : input;
  if (!doc.is_object()) fail("config must be a JSON object");

  static const std::set<std::string> known = {"mass",   "f",         "nu",   "l",
                                              "branch", "command",   "n_max", "omega_max",
                                              "grid",   "format",    "out",  "grid_points"};
  for (const auto& [key, value] : doc.items()) {
    if (!known.count(key)) fail("unknown config key '" + key + "'");
  }

  RunConfig c;
  if (doc.contains("mass")) c.model.mass = number_at(doc, "mass");
  if (doc.contains("f")) c.model.coulomb_f = number_at(doc, "f");
  if (doc.contains("nu")) c.model.linear_nu = number_at(doc, "nu");
  if (doc.contains("l")) c.model.angular_l = integer_at(doc, "l");
  if (doc.contains("branch")) c.model.branch = parse_branch(string_at(doc, "branch"));
  if (doc.contains("command")) c.command = parse_command(string_at(doc, "command"));
  if (doc.contains("n_max")) c.n_max = integer_at(doc, "n_max");
  if (doc.contains("omega_max")) c.omega_max = number_at(doc, "omega_max");
  if (doc.contains("grid_points")) c.grid_points = integer_at(doc, "grid_points");
  if (doc.contains("format")) {
    const std::string format = string_at(doc, "format");
    if (format == "csv") {
      c.format = OutputFormat::csv;
    } else if (format == "json") {
      c.format = OutputFormat::json;
    } else {
      fail("format must be csv or json");
    }
  }
  if (doc.contains("out") && !doc.at("out").is_null()) c.output_path = string_at(doc, "out");
  if (doc.contains("grid") && !doc.at("grid").is_null()) {
    const json& grid = doc.at("grid");
    if (!grid.is_object()) fail("grid must be an object with lists 'f' and 'nu'");
    SweepGrid g;
    g.f = grid.contains("f") ? number_list(grid.at("f"), "f") : std::vector<double>{c.model.coulomb_f};
    g.nu = grid.contains("nu") ? number_list(grid.at("nu"), "nu")
                               : std::vector<double>{c.model.linear_nu};
    c.sweep_grid = g;
  }
  validate(c);
  return c;
}

json to_json(const RunConfig& c) {
  json doc;
  doc["mass"] = c.model.mass;
  doc["f"] = c.model.coulomb_f;
  doc["nu"] = c.model.linear_nu;
  doc["l"] = c.model.angular_l;
  doc["branch"] = std::string(to_string(c.model.branch));
  doc["command"] = std::string(to_string(c.command));
  doc["n_max"] = c.n_max;
  doc["omega_max"] = c.omega_max;
  doc["grid_points"] = c.grid_points;
  doc["format"] = std::string(to_string(c.format));
  doc["out"] = c.output_path ? json(*c.output_path) : json(nullptr);
  if (c.sweep_grid) {
    doc["grid"] = {{"f", c.sweep_grid->f}, {"nu", c.sweep_grid->nu}};
  } else {
    doc["grid"] = nullptr;
  }
  return doc;
}

void validate(const RunConfig& c) {
  if (c.n_max < 1) fail("n_max must be >= 1");
  if (!(c.omega_max > 0.0) || !std::isfinite(c.omega_max)) fail("omega_max must be positive");
  if (c.grid_points < 100) fail("grid_points must be >= 100");
  if (c.command == Command::sweep) {
    if (!c.sweep_grid || c.sweep_grid->f.empty() || c.sweep_grid->nu.empty()) {
      fail("sweep requires a grid with non-empty 'f' and 'nu' lists");
    }
  }
}

}  // namespace kgh::cli
