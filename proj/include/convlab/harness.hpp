#pragma once

// Scenario runner: each scenario reproduces the computable content of one
// result on finite sections and records pass/fail/indeterminate checks.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "convlab/freealg.hpp"
#include "json.hpp"

namespace convlab {

using Json = nlohmann::ordered_json;

enum class CheckStatus { Pass, Fail, Indeterminate };
std::string_view to_string(CheckStatus s);
CheckStatus parse_check_status(const std::string& text);

struct Check {
  std::string name;
  /// The mathematical statement the check exercises.
  std::string claim;
  CheckStatus status = CheckStatus::Indeterminate;
  /// Certificate or witness text.
  std::string detail;
  Json payload = Json::object();
};

struct ScenarioParams {
  std::string id;
  int horizon = 4096;
  std::vector<Rational> eps{Rational(1, 8), Rational(1, 64)};
  int samples = 257;
  std::uint64_t seed = 1;
  int precision = 256;
  long k_max = 20;
  int polys = 200;

  /// Throws InvalidArgument on non-positive fields.
  void validate() const;
};

/// Defaults, with CONVLAB_PRECISION overriding the precision when set.
ScenarioParams default_params(const std::string& id);

struct ScenarioReport {
  ScenarioParams params;
  std::vector<Check> checks;
  double runtime_ms = 0;

  /// 0 all pass, 1 any failure, 2 indeterminate only.
  int exit_code() const;
};

struct ScenarioInfo {
  std::string id;
  std::string summary;
};
const std::vector<ScenarioInfo>& scenarios();

/// Throws UnknownScenario.
ScenarioReport run_scenario(const ScenarioParams& params);

Json to_json(const ScenarioReport& report, bool include_runtime = true);
ScenarioReport report_from_json(const Json& j);
std::string to_text(const ScenarioReport& report);

/// a:b:step over rationals, both ends included when hit.
struct GridSpec {
  Rational from;
  Rational to;
  Rational step;

  /// Throws InvalidArgument.
  static GridSpec parse(const std::string& text);
  std::vector<Rational> points() const;
};

/// CSV with header n,x,value_mid,value_width, one row per (n, x).
/// Throws IoFailure, UnknownFamily, OutOfDomain.
void emit_samples(const FamilySpec& family, const std::vector<Index>& ns, const GridSpec& grid, const std::string& path,
                  int bits = 128);

namespace detail {

using ScenarioFn = std::function<void(const ScenarioParams&, std::vector<Check>&)>;
/// Scenario bodies, keyed like scenarios().
ScenarioFn scenario_body(const std::string& id);

}  // namespace detail

}  // namespace convlab
