#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "kgh/cli/run.hpp"
#include "kgh/cli/run_config.hpp"
#include "kgh/errors.hpp"

using namespace kgh;
using namespace kgh::cli;
using nlohmann::json;

namespace {

struct Result {
  int status;
  std::string out;
  std::string err;
};

Result invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int status = run_main(args, out, err);
  return {status, out.str(), err.str()};
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream in(line);
  for (std::string cell; std::getline(in, cell, ',');) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

int shell_status(const std::string& command) {
  const int raw = std::system(command.c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

}  // namespace

TEST_CASE("spectrum: one row matching the closed-form ground state") {
  const auto r = invoke({"spectrum", "--mass", "1", "--f", "0.2", "--l", "1", "--n-max", "1"});
  REQUIRE(r.status == exit_ok);
  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] == kCsvHeader);
  const auto cells = split(lines[1]);
  REQUIRE(cells.size() == 10);
  CHECK(cells[0] == "coulomb");
  CHECK(cells[1] == "1");
  CHECK(std::stod(cells[5]) == doctest::Approx(0.031215559840047028).epsilon(1e-10));
  CHECK(std::stod(cells[6]) == doctest::Approx(1.0746238571867297).epsilon(1e-10));
  CHECK(cells[7] == "positive_energy");
}

TEST_CASE("verify: report columns appended with matched = true") {
  const auto r = invoke({"verify", "--f", "0.2", "--l", "1"});
  REQUIRE(r.status == exit_ok);
  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] == std::string(kCsvHeader) + "," + kVerifyCsvColumns);
  const auto cells = split(lines[1]);
  REQUIRE(cells.size() == 15);
  CHECK(cells[12] == "1");
  CHECK(cells[14] == "true");
}

TEST_CASE("ground-state: f = 0 is a domain error with an error object") {
  const auto r = invoke({"ground-state", "--f", "0", "--l", "1"});
  CHECK(r.status == exit_domain_error);
  const auto doc = json::parse(r.out);
  CHECK(doc["error"]["kind"] == "DegenerateCoupling");
  CHECK(doc["error"]["exit_status"] == 2);
  CHECK(doc["error"]["message"].get<std::string>().find("frequency unconstrained at f = 0") !=
        std::string::npos);
}

TEST_CASE("exit codes: config, domain and numerical failures") {
  CHECK(invoke({"ground-state", "--bogus"}).status == exit_config_error);
  CHECK(invoke({"ground-state", "--f", "1.5", "--l", "1"}).status == exit_domain_error);
  CHECK(invoke({"ground-state", "--f", "0.9", "--l", "1"}).status == exit_domain_error);
  CHECK(invoke({"spectrum", "--f", "0.2", "--l", "1", "--n-max", "0"}).status == exit_config_error);
  CHECK(invoke({"sweep", "--f", "0.2", "--l", "1"}).status == exit_config_error);
  CHECK(invoke({"wavefunction", "--f", "0.2", "--l", "1", "--grid-points", "200"}).status ==
        exit_numerical_failure);
}

TEST_CASE("config: unknown keys and types are rejected") {
  CHECK_THROWS_AS(parse_run_config(json{{"command", "spectrum"}, {"colour", 1}}), Error);
  CHECK_THROWS_AS(parse_run_config(json{{"command", "spectrum"}, {"f", "x"}}), Error);
  CHECK_THROWS_AS(parse_run_config(json{{"command", "dance"}}), Error);
  const auto c = parse_run_config(json{{"command", "sweep"}, {"l", 2}, {"grid", {{"f", {0.1}}, {"nu", {0.0}}}}});
  CHECK(c.command == Command::sweep);
  CHECK(c.model.angular_l == 2);
  REQUIRE(c.sweep_grid);
  CHECK(c.sweep_grid->f == std::vector<double>{0.1});
}

TEST_CASE("wavefunction: metadata line then rho,R samples") {
  const auto r = invoke({"wavefunction", "--f", "0.2", "--l", "1", "--grid-points", "2001"});
  REQUIRE(r.status == exit_ok);
  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 2003);
  REQUIRE(lines[0].rfind("# ", 0) == 0);
  const auto meta = json::parse(lines[0].substr(2));
  CHECK(meta["n"] == 1);
  CHECK(lines[1] == "rho,R");
  CHECK(split(lines[2])[0] == "0");
}

TEST_CASE("sweep: f-major order, one or more rows per grid point") {
  const auto r = invoke({"sweep", "--l", "1", "--grid-f", "0.1,0.9", "--grid-nu", "0,0.1"});
  REQUIRE(r.status == exit_ok);
  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 6);
  CHECK(split(lines[1])[3] == "0.10000000000000001");
  CHECK(split(lines[1])[4] == "0");
  CHECK(split(lines[3])[8] == "none");  // supercritical Coulomb point
  CHECK(split(lines[4])[3] == "0.90000000000000002");
}

TEST_CASE("property: repeated runs are byte-identical, regardless of thread count") {
  const std::vector<std::vector<std::string>> commands{
      {"ground-state", "--f", "0.2", "--l", "1"},
      {"spectrum", "--f", "-0.15", "--l", "2", "--n-max", "3", "--format", "json"},
      {"spectrum", "--f", "0.2", "--l", "1", "--nu", "0.1"},
      {"sweep", "--l", "1", "--grid-f", "0.05,0.1,0.2,0.3", "--grid-nu", "0,0.01,0.1", "--n-max", "2"},
  };
  for (const auto& args : commands) {
    const auto first = invoke(args);
    CHECK(first.status == exit_ok);
    CHECK(invoke(args).out == first.out);
  }
  setenv("KGH_THREADS", "1", 1);
  const auto serial = invoke(commands.back());
  unsetenv("KGH_THREADS");
  CHECK(serial.out == invoke(commands.back()).out);
}

TEST_CASE("property: JSON output fed back as config is a fixed point") {
  const std::vector<std::vector<std::string>> commands{
      {"ground-state", "--f", "0.2", "--l", "1", "--format", "json"},
      {"spectrum", "--f", "0.123456789012345", "--l", "3", "--mass", "1.7", "--n-max", "2", "--format", "json"},
      {"spectrum", "--f", "0.2", "--l", "1", "--nu", "0.07", "--branch", "negative_energy", "--format", "json"},
      {"sweep", "--l", "2", "--grid-f", "0.1,0.2", "--grid-nu", "0,0.1", "--format", "json"},
  };
  for (const auto& args : commands) {
    const auto first = invoke(args);
    REQUIRE(first.status == exit_ok);
    const auto doc = json::parse(first.out);
    const RunConfig reparsed = parse_run_config(doc);
    CHECK(to_json(reparsed) == doc["config"]);
    std::ostringstream second;
    CHECK(run(reparsed, second) == exit_ok);
    CHECK(second.str() == first.out);
  }
}

TEST_CASE("--config file with flag overrides and --out file") {
  const std::string dir = "kgh_cli_test_tmp";
  std::filesystem::create_directories(dir);
  {
    std::ofstream cfg(dir + "/run.json");
    cfg << R"({"command": "spectrum", "f": 0.3, "l": 1, "n_max": 1})";
  }
  const auto r = invoke({"--config", dir + "/run.json", "--f", "0.2", "--out", dir + "/out.csv"});
  REQUIRE(r.status == exit_ok);
  CHECK(r.out.empty());
  std::ifstream in(dir + "/out.csv");
  std::stringstream text;
  text << in.rdbuf();
  CHECK(text.str() == invoke({"spectrum", "--f", "0.2", "--l", "1"}).out);
  std::filesystem::remove_all(dir);
}

TEST_CASE("binary: exit statuses reach the shell") {
  const std::string bin = KGH_BINARY;
  CHECK(shell_status(bin + " ground-state --f 0.2 --l 1 > /dev/null") == 0);
  CHECK(shell_status(bin + " ground-state --f 0 --l 1 > /dev/null") == 2);
  CHECK(shell_status(bin + " ground-state --nope > /dev/null 2>&1") == 1);
}
