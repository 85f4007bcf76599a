#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "sofic/scenario.hpp"

namespace {

struct Flags {
  std::string scenario;
  std::string out;
  std::string map;
  std::string witness;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> cap;
  bool json = false;
  bool pretty = false;
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--scenario", f.scenario, "scenario JSON file")->required()->check(CLI::ExistingFile);
  sub->add_option("--out", f.out, "write the JSON report here (atomically)");
  sub->add_option("--seed", f.seed, "override the scenario seed");
  sub->add_option("--cap", f.cap, "override the carrier cap")->check(CLI::PositiveNumber);
  auto* j = sub->add_flag("--json", f.json, "print the report as compact JSON");
  auto* p = sub->add_flag("--pretty", f.pretty, "print the report as indented JSON");
  j->excludes(p);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sofic approximations of group actions: construct, verify and search"};
  app.require_subcommand(1);
  Flags f;
  auto* construct = app.add_subcommand("construct", "run the declared constructor and checks");
  auto* verify = app.add_subcommand("verify", "check a constructed or stored map and witness");
  auto* oracle = app.add_subcommand("oracle", "exhaustive witness search on a small map");
  auto* explain = app.add_subcommand("explain", "print the resolved plan without executing it");
  for (auto* sub : {construct, verify, oracle, explain}) add_common(sub, f);
  verify->add_option("--map", f.map, "stored map document")->check(CLI::ExistingFile);
  verify->add_option("--witness", f.witness, "stored witness document")->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : sofic::kExitParse;
  }

  sofic::Command command = sofic::Command::Construct;
  if (verify->parsed()) command = sofic::Command::Verify;
  if (oracle->parsed()) command = sofic::Command::Oracle;
  if (explain->parsed()) command = sofic::Command::Explain;

  sofic::RunOptions options;
  options.seed = f.seed;
  options.carrier_cap = f.cap;
  if (!f.map.empty()) options.map_path = f.map;
  if (!f.witness.empty()) options.witness_path = f.witness;

  const sofic::RunResult result = sofic::run_scenario_file(f.scenario, command, options);

  if (!f.out.empty()) {
    try {
      sofic::write_atomic(f.out, result.document.dump(2) + "\n");
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return sofic::kExitFail;
    }
  }
  if (f.json) {
    std::cout << result.document.dump() << "\n";
  } else if (f.pretty) {
    std::cout << result.document.dump(2) << "\n";
  } else {
    std::cout << result.summary;
  }
  return result.exit_code;
}
