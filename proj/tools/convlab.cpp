#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "convlab/error.hpp"
#include "convlab/harness.hpp"

namespace {

constexpr int kUsage = 3;

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

int write_output(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream file(path, std::ios::binary);
  file << text;
  if (!file) {
    std::cerr << "convlab: cannot write '" << path << "'\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace convlab;
  CLI::App app{"Exact and certified checks for modes of convergence of function sequences"};
  app.require_subcommand(1);

  auto* list = app.add_subcommand("list", "List scenario ids");

  std::string id, format = "text", out_path, eps_text;
  std::optional<int> horizon, samples, precision, polys;
  std::optional<long> k_max;
  std::optional<std::uint64_t> seed;
  auto* verify = app.add_subcommand("verify", "Run one scenario and report its checks");
  verify->add_option("scenario", id, "Scenario id")->required();
  verify->add_option("--horizon", horizon, "Largest index examined");
  verify->add_option("--eps", eps_text, "Comma-separated rational eps grid, e.g. 1/8,1/64");
  verify->add_option("--samples", samples, "Number of grid points in [0,1]");
  verify->add_option("--k-max", k_max, "Number of family members in rank checks");
  verify->add_option("--polys", polys, "Number of random polynomials");
  verify->add_option("--seed", seed, "Random seed");
  verify->add_option("--precision", precision, "Working precision in bits");
  verify->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));
  verify->add_option("--out", out_path, "Write the report here instead of stdout");

  std::string family_text, n_text, grid_text, emit_path;
  auto* emit = app.add_subcommand("emit", "Write samples of a family as CSV");
  emit->add_option("family", family_text, "Family spec, e.g. typewriter or nup-gen:c=1")->required();
  emit->add_option("--n", n_text, "Comma-separated indices")->required();
  emit->add_option("--grid", grid_text, "a:b:step")->required();
  emit->add_option("--out", emit_path, "Output CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kUsage;
  }

  try {
    if (*list) {
      for (const auto& s : scenarios()) std::cout << s.id << "  " << s.summary << "\n";
      return 0;
    }
    if (*verify) {
      ScenarioParams p = default_params(id);
      if (horizon) p.horizon = *horizon;
      if (samples) p.samples = *samples;
      if (precision) p.precision = *precision;
      if (polys) p.polys = *polys;
      if (k_max) p.k_max = *k_max;
      if (seed) p.seed = *seed;
      if (!eps_text.empty()) {
        p.eps.clear();
        for (const auto& e : split(eps_text, ',')) p.eps.push_back(parse_rational(e));
      }
      const ScenarioReport report = run_scenario(p);
      const std::string text = format == "json" ? to_json(report).dump(2) + "\n" : to_text(report);
      if (write_output(text, out_path) != 0) return 1;
      return report.exit_code();
    }
    const FamilySpec family = parse_family(family_text);
    std::vector<Index> ns;
    for (const auto& n : split(n_text, ',')) {
      Index v;
      if (v.set_str(n, 10) != 0 || v <= 0) throw Error(ErrorCode::InvalidArgument, "bad index '" + n + "'");
      ns.push_back(v);
    }
    emit_samples(family, ns, GridSpec::parse(grid_text), emit_path);
    return 0;
  } catch (const Error& e) {
    std::cerr << "convlab: " << e.what() << "\n";
    switch (e.code()) {
      case ErrorCode::IoFailure:
      case ErrorCode::AuditFailure:
        return 1;
      default:
        return kUsage;
    }
  } catch (const std::exception& e) {
    std::cerr << "convlab: " << e.what() << "\n";
    return 1;
  }
}
