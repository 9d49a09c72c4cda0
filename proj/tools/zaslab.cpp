// zaslab command-line front end.
//
//   zaslab mass     --scenario F
//   zaslab capacity --scenario F
//   zaslab flow     --scenario F
//   zaslab verify   --suite {penrose|capacity|resolution|locality|geroch|hull|all} [--catalog F]
//
// Global: --out DIR --format {json,csv} --tol-scale X
// Exit: 0 ok, 1 verify failure, 2 input error, 3 numerical failure.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "zaslab/zaslab.hpp"

namespace {

int runScenarioCommand(const std::string& name, const std::string& path, const zaslab::RunOptions& opt) {
  zaslab::Scenario scenario;
  try {
    scenario = zaslab::parseScenario(zaslab::io::readFile(path));
  } catch (const zaslab::Error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return zaslab::kExitInputError;
  }
  if (name != zaslab::toString(scenario.command)) {
    std::cerr << "input error: scenario command '" << zaslab::toString(scenario.command) << "' does not match '"
              << name << "'\n";
    return zaslab::kExitInputError;
  }
  return zaslab::runCommand(scenario, opt);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mass, capacity and weak IMCF of zero area singularities in radial conformally flat metrics"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string out_dir;
  std::string format;
  double tol_scale = 1.0;
  app.add_option("--out", out_dir, "Directory for output files (default: stdout)");
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--tol-scale", tol_scale, "Multiplier applied to every verify tolerance")
      ->check(CLI::PositiveNumber);

  std::string mass_file, capacity_file, flow_file;
  auto* mass = app.add_subcommand("mass", "Hawking, ADM, regular and ZAS masses of a profile");
  mass->add_option("--scenario", mass_file, "Scenario JSON file")->required();
  auto* capacity = app.add_subcommand("capacity", "Capacity of a sphere and of the singularity");
  capacity->add_option("--scenario", capacity_file, "Scenario JSON file")->required();
  auto* flow = app.add_subcommand("flow", "Weak inverse mean curvature flow trace");
  flow->add_option("--scenario", flow_file, "Scenario JSON file")->required();

  std::string suite = "all";
  std::string catalog_file, verify_scenario;
  auto* verify = app.add_subcommand("verify", "Run theorem suites on a profile catalog");
  verify->add_option("--suite", suite, "Suite to run")
      ->check(CLI::IsMember({"penrose", "capacity", "resolution", "locality", "geroch", "hull", "all"}));
  verify->add_option("--catalog", catalog_file, "Catalog JSON file (default: built-in catalog)");
  verify->add_option("--scenario", verify_scenario, "Verify scenario JSON file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return zaslab::kExitInputError;
  }

  zaslab::RunOptions opt;
  if (!out_dir.empty()) opt.out_dir = out_dir;
  if (!format.empty()) opt.format = zaslab::parseFormat(format);
  opt.tol_scale = tol_scale;

  if (mass->parsed()) return runScenarioCommand("mass", mass_file, opt);
  if (capacity->parsed()) return runScenarioCommand("capacity", capacity_file, opt);
  if (flow->parsed()) return runScenarioCommand("flow", flow_file, opt);

  if (!verify_scenario.empty()) {
    if (!catalog_file.empty() || verify->count("--suite") > 0) {
      std::cerr << "input error: --scenario cannot be combined with --suite or --catalog\n";
      return zaslab::kExitInputError;
    }
    return runScenarioCommand("verify", verify_scenario, opt);
  }
  std::vector<zaslab::RadialProfile> catalog;
  try {
    catalog = catalog_file.empty()
                  ? zaslab::defaultCatalog()
                  : zaslab::io::catalogFromJson(zaslab::io::parseDocument(zaslab::io::readFile(catalog_file), "catalog"));
  } catch (const zaslab::Error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return zaslab::kExitInputError;
  }
  const zaslab::Tolerances tol = zaslab::Tolerances{}.scaled(tol_scale);
  return zaslab::runVerify(suite, catalog, tol, opt.format.value_or(zaslab::OutputFormat::json), opt.out_dir,
                           std::nullopt, std::cout, std::cerr);
}
