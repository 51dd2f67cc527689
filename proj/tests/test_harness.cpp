#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "convlab/error.hpp"
#include "convlab/harness.hpp"
#include "doctest.h"

using namespace convlab;

namespace {

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("convlab_test_" + name)).string();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(CONVLAB_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

ScenarioParams quick(const std::string& id) {
  ScenarioParams p = default_params(id);
  p.horizon = 256;
  p.samples = 17;
  p.k_max = 4;
  p.polys = 5;
  p.precision = 128;
  // The brute-force side of the dichotomy needs the grid to contain the
  // instance breakpoints and a tail short enough to drop below its thresholds.
  if (id == "prop-3.1") {
    p.horizon = 1024;
    p.samples = 257;
  }
  return p;
}

}  // namespace

TEST_CASE("scenario registry lists exactly eight ids") {
  std::vector<std::string> ids;
  for (const auto& s : scenarios()) ids.push_back(s.id);
  CHECK(ids == std::vector<std::string>{"thm-2.2", "thm-2.3", "prop-3.1", "thm-3.4", "thm-3.6", "thm-3.9", "thm-4.1",
                                        "thm-4.3"});
  ScenarioParams p = default_params("nope");
  CHECK_THROWS_AS(run_scenario(p), Error);
  try {
    run_scenario(p);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownScenario);
  }
}

TEST_CASE("params validation and defaults") {
  ScenarioParams p = default_params("thm-2.2");
  CHECK(p.horizon == 4096);
  CHECK(p.samples == 257);
  CHECK(p.precision == 256);
  CHECK(p.k_max == 20);
  CHECK(p.polys == 200);
  CHECK(p.eps == std::vector<Rational>{Rational(1, 8), Rational(1, 64)});
  p.horizon = 0;
  CHECK_THROWS_AS(p.validate(), Error);
  p = default_params("thm-2.2");
  p.eps = {Rational(-1, 2)};
  CHECK_THROWS_AS(p.validate(), Error);
  setenv("CONVLAB_PRECISION", "160", 1);
  CHECK(default_params("thm-2.2").precision == 160);
  setenv("CONVLAB_PRECISION", "lots", 1);
  CHECK_THROWS_AS(default_params("thm-2.2"), Error);
  unsetenv("CONVLAB_PRECISION");
}

TEST_CASE("exit codes follow the worst check") {
  ScenarioReport r;
  CHECK(r.exit_code() == 0);
  r.checks.push_back(Check{"a", "x", CheckStatus::Pass, "", Json::object()});
  CHECK(r.exit_code() == 0);
  r.checks.push_back(Check{"b", "x", CheckStatus::Indeterminate, "", Json::object()});
  CHECK(r.exit_code() == 2);
  r.checks.push_back(Check{"c", "x", CheckStatus::Fail, "", Json::object()});
  CHECK(r.exit_code() == 1);
}

TEST_CASE("reports round-trip through JSON and are deterministic") {
  const ScenarioReport a = run_scenario(quick("thm-3.6"));
  const ScenarioReport b = run_scenario(quick("thm-3.6"));
  CHECK(a.exit_code() == 0);
  CHECK(to_json(a, false).dump() == to_json(b, false).dump());
  const Json j = to_json(a);
  const std::vector<std::string> keys{"scenario", "params", "seed", "precision", "checks", "exit_code", "runtime_ms"};
  std::vector<std::string> seen;
  for (auto it = j.begin(); it != j.end(); ++it) seen.push_back(it.key());
  CHECK(seen == keys);
  const ScenarioReport back = report_from_json(Json::parse(j.dump()));
  CHECK(to_json(back).dump() == j.dump());
  CHECK_THROWS_AS(report_from_json(Json::parse("{\"scenario\": 3}")), Error);
  CHECK(to_text(a).find("checks passed") != std::string::npos);
}

TEST_CASE("seeds change random content but not structure") {
  ScenarioParams p = quick("thm-2.2");
  const ScenarioReport a = run_scenario(p);
  p.seed = 99;
  const ScenarioReport b = run_scenario(p);
  CHECK(a.checks.size() == b.checks.size());
  CHECK(a.exit_code() == 0);
  CHECK(b.exit_code() == 0);
  CHECK(to_json(a, false).dump() != to_json(b, false).dump());
}

TEST_CASE("every scenario passes at reduced scale") {
  for (const auto& s : scenarios()) {
    CAPTURE(s.id);
    const ScenarioReport r = run_scenario(quick(s.id));
    for (const auto& c : r.checks) {
      CAPTURE(c.name);
      CAPTURE(c.detail);
      CHECK(c.status == CheckStatus::Pass);
    }
  }
}

TEST_CASE("grid specs") {
  const GridSpec g = GridSpec::parse("0:1:1/8");
  CHECK(g.points().size() == 9);
  CHECK(GridSpec::parse("1/4:1/3:1/48").points().back() == Rational(1, 3));
  CHECK_THROWS_AS(GridSpec::parse("0:1"), Error);
  CHECK_THROWS_AS(GridSpec::parse("0:1:0"), Error);
  CHECK_THROWS_AS(GridSpec::parse("1:0:1/2"), Error);
}

TEST_CASE("emit_samples examples") {
  const std::string path = temp_path("typewriter.csv");
  emit_samples(parse_family("typewriter"), {1, 2, 3}, GridSpec::parse("0:1:1/8"), path);
  auto lines = read_lines(path);
  REQUIRE(lines.size() == 28);
  CHECK(lines[0] == "n,x,value_mid,value_width");
  CHECK(std::find(lines.begin(), lines.end(), "2,1/4,1,0") != lines.end());

  emit_samples(parse_family("nup-gen:c=1"), {3}, GridSpec::parse("1/4:1/3:1/48"), path);
  lines = read_lines(path);
  REQUIRE(lines.size() == 6);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    std::stringstream row(lines[i]);
    std::string n, x, mid;
    std::getline(row, n, ',');
    std::getline(row, x, ',');
    std::getline(row, mid, ',');
    const double v = std::stod(mid);
    CHECK(v >= 0.2431167344342142 - 1e-15);
    CHECK(v <= 1.0);
  }

  emit_samples(parse_family("typewriter"), {}, GridSpec::parse("0:1:1/8"), path);
  lines = read_lines(path);
  CHECK(lines == std::vector<std::string>{"n,x,value_mid,value_width"});
  std::remove(path.c_str());

  CHECK_THROWS_AS(emit_samples(parse_family("typewriter"), {1}, GridSpec::parse("0:1:1/2"), "/nonexistent/dir/x.csv"),
                  Error);
  CHECK_THROWS_AS(emit_samples(parse_family("typewriter"), {1}, GridSpec::parse("0:2:1/2"), path), Error);
}

TEST_CASE("command line exit codes") {
  const std::string out = temp_path("cli.csv");
  CHECK(run_cli("list") == 0);
  CHECK(run_cli("verify thm-3.6 --horizon 128 --k-max 3 --samples 9 --precision 128") == 0);
  CHECK(run_cli("verify thm-3.6 --horizon 128 --k-max 3 --format json --out " + out) == 0);
  const Json j = Json::parse(std::ifstream(out));
  CHECK(j.at("scenario") == "thm-3.6");
  CHECK(j.at("params").at("k_max") == 3);
  CHECK(run_cli("emit traveling-bump:k=3 --n 1,2 --grid 0:8:1 --out " + out) == 0);
  CHECK(read_lines(out).size() == 19);
  std::remove(out.c_str());
  CHECK(run_cli("verify nope") == 3);
  CHECK(run_cli("verify thm-2.2 --format xml") == 3);
  CHECK(run_cli("verify thm-2.2 --horizon 0") == 3);
  CHECK(run_cli("emit nope --n 1 --grid 0:1:1 --out " + out) == 3);
  CHECK(run_cli("") == 3);
}
