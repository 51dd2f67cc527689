#include "convlab/harness.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "convlab/error.hpp"

namespace convlab {

std::string_view to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Indeterminate: return "indeterminate";
  }
  return "?";
}

CheckStatus parse_check_status(const std::string& text) {
  if (text == "pass") return CheckStatus::Pass;
  if (text == "fail") return CheckStatus::Fail;
  if (text == "indeterminate") return CheckStatus::Indeterminate;
  throw Error(ErrorCode::InvalidArgument, "unknown check status '" + text + "'");
}

void ScenarioParams::validate() const {
  auto positive = [](long v, const char* what) {
    if (v <= 0) throw Error(ErrorCode::InvalidArgument, std::string(what) + " must be positive");
  };
  positive(horizon, "horizon");
  positive(samples, "samples");
  positive(k_max, "k-max");
  positive(polys, "polys");
  if (precision < 64) throw Error(ErrorCode::InvalidArgument, "precision must be at least 64 bits");
  if (eps.empty()) throw Error(ErrorCode::InvalidArgument, "eps grid is empty");
  for (const auto& e : eps) {
    if (e <= 0) throw Error(ErrorCode::InvalidArgument, "eps values must be positive");
  }
}

ScenarioParams default_params(const std::string& id) {
  ScenarioParams p;
  p.id = id;
  if (const char* env = std::getenv("CONVLAB_PRECISION")) {
    try {
      p.precision = std::stoi(env);
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidArgument, std::string("CONVLAB_PRECISION='") + env + "' is not an integer");
    }
  }
  return p;
}

int ScenarioReport::exit_code() const {
  bool indeterminate = false;
  for (const auto& c : checks) {
    if (c.status == CheckStatus::Fail) return 1;
    if (c.status == CheckStatus::Indeterminate) indeterminate = true;
  }
  return indeterminate ? 2 : 0;
}

const std::vector<ScenarioInfo>& scenarios() {
  static const std::vector<ScenarioInfo> list{
      {"thm-2.2", "typewriter algebra: converges in measure, diverges at every sampled point"},
      {"thm-2.3", "split typewriter: interleaved generations, independent, each converging in measure only"},
      {"prop-3.1", "alpha_n chi_{E_n}: descriptor verdicts against brute-force horizons"},
      {"thm-3.4", "nup algebra: pointwise a.e. and almost uniform, never uniformly a.e."},
      {"thm-3.6", "split shrinking indicators: independent, every combination nup"},
      {"thm-3.9", "product metric and truncation to eventually null sequences"},
      {"thm-4.1", "l1 algebra: uniform convergence with L1 norms e^n / n^c blowing up"},
      {"thm-4.3", "traveling bumps: unit L1 norm on tiling blocks, uniform convergence"},
  };
  return list;
}

ScenarioReport run_scenario(const ScenarioParams& params) {
  bool known = false;
  for (const auto& s : scenarios()) known = known || s.id == params.id;
  if (!known) throw Error(ErrorCode::UnknownScenario, "'" + params.id + "'");
  params.validate();
  ScenarioReport report;
  report.params = params;
  const auto start = std::chrono::steady_clock::now();
  detail::scenario_body(params.id)(params, report.checks);
  report.runtime_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return report;
}

// ------------------------------------------------------------ serialization

Json to_json(const ScenarioReport& report, bool include_runtime) {
  const auto& p = report.params;
  Json j;
  j["scenario"] = p.id;
  Json params;
  params["horizon"] = p.horizon;
  Json eps = Json::array();
  for (const auto& e : p.eps) eps.push_back(to_string(e));
  params["eps"] = eps;
  params["samples"] = p.samples;
  params["seed"] = p.seed;
  params["precision"] = p.precision;
  params["k_max"] = p.k_max;
  params["polys"] = p.polys;
  j["params"] = params;
  j["seed"] = p.seed;
  j["precision"] = p.precision;
  Json checks = Json::array();
  for (const auto& c : report.checks) {
    Json cj;
    cj["name"] = c.name;
    cj["claim"] = c.claim;
    cj["status"] = std::string(to_string(c.status));
    cj["detail"] = c.detail;
    cj["payload"] = c.payload;
    checks.push_back(cj);
  }
  j["checks"] = checks;
  j["exit_code"] = report.exit_code();
  if (include_runtime) j["runtime_ms"] = report.runtime_ms;
  return j;
}

ScenarioReport report_from_json(const Json& j) {
  try {
    ScenarioReport r;
    auto& p = r.params;
    p.id = j.at("scenario").get<std::string>();
    const auto& pj = j.at("params");
    p.horizon = pj.at("horizon").get<int>();
    p.eps.clear();
    for (const auto& e : pj.at("eps")) p.eps.push_back(parse_rational(e.get<std::string>()));
    p.samples = pj.at("samples").get<int>();
    p.seed = pj.at("seed").get<std::uint64_t>();
    p.precision = pj.at("precision").get<int>();
    p.k_max = pj.at("k_max").get<long>();
    p.polys = pj.at("polys").get<int>();
    for (const auto& cj : j.at("checks")) {
      Check c;
      c.name = cj.at("name").get<std::string>();
      c.claim = cj.at("claim").get<std::string>();
      c.status = parse_check_status(cj.at("status").get<std::string>());
      c.detail = cj.at("detail").get<std::string>();
      c.payload = cj.at("payload");
      r.checks.push_back(std::move(c));
    }
    if (j.contains("runtime_ms")) r.runtime_ms = j.at("runtime_ms").get<double>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("malformed report: ") + e.what());
  }
}

std::string to_text(const ScenarioReport& report) {
  std::ostringstream os;
  const auto& p = report.params;
  os << "scenario " << p.id << "  (horizon " << p.horizon << ", samples " << p.samples << ", seed " << p.seed
     << ", precision " << p.precision << ", k_max " << p.k_max << ", polys " << p.polys << ")\n";
  for (const auto& c : report.checks) {
    os << "  [" << to_string(c.status) << "] " << c.name << ": " << c.claim << "\n";
    if (!c.detail.empty()) os << "      " << c.detail << "\n";
  }
  std::size_t pass = 0;
  for (const auto& c : report.checks) pass += c.status == CheckStatus::Pass;
  os << "  " << pass << "/" << report.checks.size() << " checks passed in " << std::fixed << std::setprecision(0)
     << report.runtime_ms << " ms\n";
  return os.str();
}

// ------------------------------------------------------------------ samples

GridSpec GridSpec::parse(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ':')) parts.push_back(item);
  if (parts.size() != 3) throw Error(ErrorCode::InvalidArgument, "grid must look like a:b:step, got '" + text + "'");
  GridSpec g{parse_rational(parts[0]), parse_rational(parts[1]), parse_rational(parts[2])};
  if (g.step <= 0) throw Error(ErrorCode::InvalidArgument, "grid step must be positive");
  if (g.to < g.from) throw Error(ErrorCode::InvalidArgument, "grid end precedes its start");
  return g;
}

std::vector<Rational> GridSpec::points() const {
  std::vector<Rational> xs;
  for (Rational x = from; x <= to; x += step) xs.push_back(x);
  return xs;
}

void emit_samples(const FamilySpec& family, const std::vector<Index>& ns, const GridSpec& grid, const std::string& path,
                  int bits) {
  family.validate();
  std::ostringstream out;
  out << "n,x,value_mid,value_width\n";
  const auto xs = grid.points();
  for (const auto& n : ns) {
    const PwExpFun f = family_member(family, n);
    for (const auto& x : xs) {
      Enclosure v = eval_enclosure(evaluate_exact(f, x), bits);
      out << n.get_str() << "," << to_string(x) << "," << std::setprecision(17) << v.mid_double() << ","
          << std::setprecision(3) << v.width_double() << "\n";
    }
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorCode::IoFailure, "cannot open '" + path + "' for writing");
  file << out.str();
  if (!file) throw Error(ErrorCode::IoFailure, "write to '" + path + "' failed");
}

}  // namespace convlab
