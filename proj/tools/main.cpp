#include <cstdlib>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "runner.hpp"

using namespace pchaos::cli;

int main(int argc, char** argv) {
  CLI::App app{"pseudochaos: random-matrix and pseudo-chaos experiments"};
  app.require_subcommand(1);

  const std::vector<std::pair<std::string, std::string>> flags{
      {"n", "number of qubits, d = 2^n"},
      {"ensemble", "gue | pseudo | diag-gue | diag-iid"},
      {"dtilde", "distinct eigenvalues for pseudo-gue (0 means d)"},
      {"kwise", "k-wise independent eigenvalue draws (default: fully independent)"},
      {"t", "evolution time"},
      {"t-grid", "time grid a:b:steps"},
      {"beta", "inverse temperature"},
      {"samples", "number of ensemble draws"},
      {"shots", "measurement shots for sampled OTOCs"},
      {"cut", "comma-separated qubits of subsystem A"},
      {"probe", "renyi2 | stab | loe | otoc4"},
      {"m", "ancilla bits for the phase register"},
      {"seed", "64-bit seed (PC_SEED env var is the fallback)"},
      {"threads", "worker threads, 0 means all cores"},
      {"out", "CSV output path (default stdout)"},
      {"svg", "SVG plot output path"},
      {"format", "csv | json"}};
  std::map<std::string, std::string> values;
  std::string config_path;
  std::map<CLI::App*, std::string> names;

  for (const auto& name : experiment_names()) {
    auto* sub = app.add_subcommand(name, "run the " + name + " experiment");
    names[sub] = name;
    for (const auto& [f, help] : flags) sub->add_option("--" + f, values[f], help);
    sub->add_option("--config", config_path, "key=value config file");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  ExperimentConfig cfg;
  try {
    CLI::App* sub = app.get_subcommands().front();
    if (const char* env = std::getenv("PC_SEED")) apply_setting(cfg, "seed", env);
    if (!config_path.empty())
      for (const auto& [k, v] : parse_config_file(config_path)) apply_setting(cfg, k, v);
    cfg.experiment = names.at(sub);
    for (const auto& [f, help] : flags)
      if (sub->get_option("--" + f)->count() > 0) apply_setting(cfg, f, values[f]);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }
  return run_experiment(cfg);
}
