// rsphoton: scenario runner for the spectral wavefunction toolkit.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "rsphoton/runner.hpp"
#include "rsphoton/scenario.hpp"
#include "rsphoton/transforms.hpp"

namespace sc = rsphoton::scenario;

namespace {

std::optional<std::string> slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int code(sc::ExitCode c) { return static_cast<int>(c); }

// Parses a scenario file, printing a named error on failure.
std::optional<sc::Scenario> load(const std::string& path) {
  const auto text = slurp(path);
  if (!text) {
    std::cerr << "error: cannot read " << path << "\n";
    return std::nullopt;
  }
  try {
    return sc::parse_scenario(*text);
  } catch (const sc::ParseError& e) {
    std::cerr << "parse-error: " << path << ":" << e.what() << "\n";
  } catch (const sc::ValidationError& e) {
    std::cerr << "validation-error: " << e.what() << "\n";
  }
  return std::nullopt;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral Riemann-Silberstein / photon-density wavefunction toolkit"};
  app.require_subcommand(1);

  std::string run_file, out_dir, units;
  std::uint64_t seed = 0;
  auto* run = app.add_subcommand("run", "Execute a scenario and write its outputs");
  run->add_option("scenario", run_file, "Scenario file")->required();
  auto* out_opt = run->add_option("--out", out_dir, "Output directory (overrides output.dir)");
  auto* seed_opt = run->add_option("--seed", seed, "Seed for random states");
  auto* units_opt = run->add_option("--units", units, "natural or si")->check(CLI::IsMember({"natural", "si"}));

  std::string validate_file;
  auto* validate = app.add_subcommand("validate", "Parse and validate a scenario");
  validate->add_option("scenario", validate_file, "Scenario file")->required();

  auto* list = app.add_subcommand("list-transforms", "List the transform kinds");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : code(sc::ExitCode::usage);
  }

  if (*list) {
    for (auto name : rsphoton::kTransformNames) {
      const auto kind = *rsphoton::parse_transform_kind(name);
      const rsphoton::TransformSpec spec{kind};
      std::cout << name << "\t" << (spec.forward() ? "energy->photon" : "photon->energy") << "\tphase(+) = "
                << spec.phase() << "\n";
    }
    return code(sc::ExitCode::success);
  }

  if (*validate) {
    auto scenario = load(validate_file);
    if (!scenario) return code(sc::ExitCode::invalid_scenario);
    for (const auto& [k, v] : scenario->echo) std::cout << k << " = " << v << "\n";
    std::cout << "valid\n";
    return code(sc::ExitCode::success);
  }

  auto scenario = load(run_file);
  if (!scenario) return code(sc::ExitCode::invalid_scenario);
  sc::apply_overrides(*scenario, *out_opt ? std::optional<std::string>(out_dir) : std::nullopt,
                      *seed_opt ? std::optional<std::uint64_t>(seed) : std::nullopt,
                      *units_opt ? std::optional<bool>(units == "si") : std::nullopt);
  try {
    const auto summary = sc::run(*scenario);
    sc::write_summary(*scenario, summary);
    for (std::size_t i = 0; i < summary.stages.size(); ++i) {
      const auto& st = summary.stages[i];
      std::cout << "stage." << i << " " << st.name << ": " << (st.ok ? "ok" : "error: " + st.error) << "\n";
    }
    return code(summary.ok() ? sc::ExitCode::success : sc::ExitCode::stage_error);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return code(sc::ExitCode::stage_error);
  }
}
