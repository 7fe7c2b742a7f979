#include "kgh/cli/run.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>
#include <variant>

#include "CLI11.hpp"
#include "kgh/errors.hpp"
#include "kgh/oracle.hpp"
#include "kgh/spectrum.hpp"
#include "kgh/wavefunction.hpp"

namespace kgh::cli {

using nlohmann::json;

std::string format_number(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

namespace {

struct Row {
  BoundState state;
  std::optional<VerificationReport> report;
};

struct PointResult {
  double f = 0.0;
  double nu = 0.0;
  std::vector<Row> rows;
  std::optional<Error> error;
};

BoundState ground_state(const ModelConfig& model) {
  return variant_of(model) == Variant::coulomb ? ground_state_coulomb(model)
                                               : ground_state_linear(model);
}

std::vector<Row> spectrum_rows(const ModelConfig& model, int n_max, double omega_max) {
  std::vector<Row> rows;
  for (int n = 1; n <= n_max; ++n) {
    for (const BoundState& s : solve_frequency(model, n, omega_max)) rows.push_back({s, std::nullopt});
  }
  return rows;
}

std::string csv_line(const Row& row) {
  const BoundState& s = row.state;
  std::ostringstream line;
  line << to_string(s.variant) << ',' << s.n << ',' << s.config.angular_l << ','
       << format_number(s.config.coulomb_f) << ',' << format_number(s.config.linear_nu) << ','
       << format_number(s.omega) << ',' << format_number(s.energy) << ','
       << to_string(s.config.branch) << ',' << to_string(s.method) << ','
       << format_number(s.residual);
  if (row.report) {
    const VerificationReport& r = *row.report;
    line << ',' << format_number(r.oracle_energy) << ',' << format_number(r.energy_delta) << ','
         << r.node_count_oracle << ',' << format_number(r.wavefunction_l2_delta) << ','
         << (r.matched ? "true" : "false");
  }
  return line.str();
}

json state_json(const BoundState& s) {
  return json{{"variant", std::string(to_string(s.variant))},
              {"n", s.n},
              {"l", s.config.angular_l},
              {"f", s.config.coulomb_f},
              {"nu", s.config.linear_nu},
              {"omega", s.omega},
              {"energy", s.energy},
              {"branch", std::string(to_string(s.config.branch))},
              {"method", std::string(to_string(s.method))},
              {"residual", s.residual}};
}

json row_json(const Row& row) {
  json j = state_json(row.state);
  if (row.report) {
    const VerificationReport& r = *row.report;
    j["oracle_energy"] = r.oracle_energy;
    j["energy_delta"] = r.energy_delta;
    j["nodes"] = r.node_count_oracle;
    j["l2_delta"] = r.wavefunction_l2_delta;
    j["matched"] = r.matched;
  }
  return j;
}

json error_json(const Error& e) {
  return json{{"kind", std::string(to_string(e.kind()))}, {"message", e.what()}};
}

void emit_rows(const RunConfig& config, const std::vector<Row>& rows, std::ostream& out) {
  if (config.format == OutputFormat::csv) {
    out << kCsvHeader;
    if (config.command == Command::verify) out << ',' << kVerifyCsvColumns;
    out << '\n';
    for (const Row& row : rows) out << csv_line(row) << '\n';
    return;
  }
  json doc;
  doc["config"] = to_json(config);
  doc["states"] = json::array();
  for (const Row& row : rows) doc["states"].push_back(row_json(row));
  out << doc.dump(2) << '\n';
}

void emit_wavefunction(const RunConfig& config, const RadialWavefunction& w, std::ostream& out) {
  if (config.format == OutputFormat::csv) {
    out << "# " << state_json(w.state).dump() << '\n';
    out << "rho,R\n";
    for (const auto& s : w.samples) out << format_number(s.rho) << ',' << format_number(s.value) << '\n';
    return;
  }
  json doc;
  doc["config"] = to_json(config);
  doc["state"] = state_json(w.state);
  doc["norm_constant"] = w.norm_constant;
  json samples = json::array();
  for (const auto& s : w.samples) samples.push_back({s.rho, s.value});
  doc["samples"] = std::move(samples);
  out << doc.dump(2) << '\n';
}

unsigned sweep_threads() {
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("KGH_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1) threads = std::min<unsigned>(threads, static_cast<unsigned>(cap));
  }
  return threads;
}

std::vector<PointResult> run_sweep(const RunConfig& config) {
  std::vector<PointResult> points;
  for (double f : config.sweep_grid->f) {
    for (double nu : config.sweep_grid->nu) points.push_back({f, nu, {}, std::nullopt});
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      PointResult& p = points[i];
      ModelConfig model = config.model;
      model.coulomb_f = p.f;
      model.linear_nu = p.nu;
      try {
        p.rows = spectrum_rows(model, config.n_max, config.omega_max);
      } catch (const Error& e) {
        p.error = e;
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const unsigned count = std::min<std::size_t>(sweep_threads(), points.size());
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < count; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return points;
}

void emit_sweep(const RunConfig& config, const std::vector<PointResult>& points, std::ostream& out) {
  if (config.format == OutputFormat::csv) {
    out << kCsvHeader << '\n';
    for (const PointResult& p : points) {
      // Every grid point yields at least one row: failures and empty spectra
      // get a placeholder with the method column explaining why.
      if (p.error || p.rows.empty()) {
        out << (p.nu > 0.0 ? "linear" : "coulomb") << ",," << config.model.angular_l << ','
            << format_number(p.f) << ',' << format_number(p.nu) << ",,,"
            << to_string(config.model.branch) << ','
            << (p.error ? "error:" + std::string(to_string(p.error->kind())) : std::string("none"))
            << ",\n";
        continue;
      }
      for (const Row& row : p.rows) out << csv_line(row) << '\n';
    }
    return;
  }
  json doc;
  doc["config"] = to_json(config);
  doc["points"] = json::array();
  for (const PointResult& p : points) {
    json j{{"f", p.f}, {"nu", p.nu}};
    if (p.error) {
      j["error"] = error_json(*p.error);
    } else {
      j["states"] = json::array();
      for (const Row& row : p.rows) j["states"].push_back(row_json(row));
    }
    doc["points"].push_back(std::move(j));
  }
  out << doc.dump(2) << '\n';
}

void execute(const RunConfig& config, std::ostream& out) {
  switch (config.command) {
    case Command::ground_state:
      emit_rows(config, {Row{ground_state(config.model), std::nullopt}}, out);
      return;
    case Command::spectrum:
      emit_rows(config, spectrum_rows(config.model, config.n_max, config.omega_max), out);
      return;
    case Command::verify: {
      std::vector<Row> rows = spectrum_rows(config.model, config.n_max, config.omega_max);
      VerifyOptions options;
      options.grid_points = config.grid_points;
      for (Row& row : rows) row.report = verify_state(row.state, options);
      emit_rows(config, rows, out);
      return;
    }
    case Command::wavefunction:
      emit_wavefunction(config, build_wavefunction(ground_state(config.model), 0.0, config.grid_points), out);
      return;
    case Command::sweep:
      emit_sweep(config, run_sweep(config), out);
      return;
  }
}

int report_error(const Error& e, std::ostream& out) {
  int status = exit_numerical_failure;
  if (e.kind() == ErrorKind::config_error) {
    status = exit_config_error;
  } else if (is_domain_error(e.kind())) {
    status = exit_domain_error;
  }
  json j = error_json(e);
  j["exit_status"] = status;
  out << json{{"error", j}}.dump() << '\n';
  return status;
}

}  // namespace

int run(const RunConfig& config, std::ostream& out) {
  try {
    validate(config);
    // Render fully before touching the sink so failures leave no partial artifact.
    std::ostringstream buffer;
    execute(config, buffer);
    if (config.output_path) {
      std::ofstream file(*config.output_path, std::ios::binary);
      if (!file) throw Error(ErrorKind::config_error, "cannot open output file " + *config.output_path);
      file << buffer.str();
    } else {
      out << buffer.str();
    }
    return exit_ok;
  } catch (const Error& e) {
    return report_error(e, out);
  } catch (const std::invalid_argument& e) {
    return report_error(Error(ErrorKind::config_error, e.what()), out);
  } catch (const std::exception& e) {
    return report_error(Error(ErrorKind::convergence_failure, e.what()), out);
  }
}

int run_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bound states of the Klein-Gordon oscillator with Coulomb and linear potentials", "kgh"};
  std::string command;
  std::string config_path;
  double mass = 0.0, f = 0.0, nu = 0.0, omega_max = 0.0;
  int l = 0, n_max = 0, grid_points = 0;
  std::string branch, format, out_path;
  std::vector<double> grid_f, grid_nu;

  app.add_option("command", command, "ground-state | spectrum | verify | wavefunction | sweep");
  app.add_option("--config", config_path, "JSON config file; flags override its values");
  app.add_option("--mass", mass, "particle mass");
  app.add_option("--f", f, "Coulomb strength f");
  app.add_option("--nu", nu, "linear scalar potential strength");
  app.add_option("--l", l, "angular quantum number");
  app.add_option("--branch", branch, "positive_energy | negative_energy");
  app.add_option("--n-max", n_max, "highest polynomial degree");
  app.add_option("--omega-max", omega_max, "upper end of the frequency search");
  app.add_option("--grid-points", grid_points, "wavefunction samples");
  app.add_option("--grid-f", grid_f, "sweep values of f")->delimiter(',');
  app.add_option("--grid-nu", grid_nu, "sweep values of nu")->delimiter(',');
  app.add_option("--format", format, "csv | json");
  app.add_option("--out", out_path, "output file (default stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return report_error(Error(ErrorKind::config_error, e.what()), out);
  }

  try {
    json doc = json::object();
    if (!config_path.empty()) {
      std::ifstream file(config_path);
      if (!file) throw Error(ErrorKind::config_error, "cannot read config file " + config_path);
      try {
        file >> doc;
      } catch (const json::exception& e) {
        throw Error(ErrorKind::config_error, std::string("config is not valid JSON: ") + e.what());
      }
      if (doc.contains("config")) doc = doc.at("config");
    }
    auto set = [&](const char* flag, const char* key, auto value) {
      if (app.count(flag) > 0) doc[key] = value;
    };
    if (!command.empty()) doc["command"] = command;
    set("--mass", "mass", mass);
    set("--f", "f", f);
    set("--nu", "nu", nu);
    set("--l", "l", l);
    set("--branch", "branch", branch);
    set("--n-max", "n_max", n_max);
    set("--omega-max", "omega_max", omega_max);
    set("--grid-points", "grid_points", grid_points);
    set("--format", "format", format);
    set("--out", "out", out_path);
    if (app.count("--grid-f") > 0) doc["grid"]["f"] = grid_f;
    if (app.count("--grid-nu") > 0) doc["grid"]["nu"] = grid_nu;
    if (!doc.contains("command")) throw Error(ErrorKind::config_error, "no command given");
    return run(parse_run_config(doc), out);
  } catch (const Error& e) {
    return report_error(e, out);
  }
}

}  // namespace kgh::cli
