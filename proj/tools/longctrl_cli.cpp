#include <algorithm>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "longctrl/config_io.hpp"
#include "longctrl/presets.hpp"
#include "longctrl/runner.hpp"
#include "longctrl/scenarios.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitScenarioFailed = 1;
constexpr int kExitConfigError = 2;

bool is_builtin(const std::string& name) {
  const auto names = longctrl::builtin_scenario_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

struct LoadedScenario {
  longctrl::ScenarioConfig scenario;
  longctrl::StackConfig stack;
};

LoadedScenario load(const std::string& ref) {
  LoadedScenario out;
  out.stack = longctrl::default_stack_config();
  if (is_builtin(ref)) {
    out.scenario = longctrl::make_builtin_scenario(ref, &out.stack);
  } else {
    out.scenario = longctrl::load_scenario_file(ref, out.stack);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Longitudinal control stack scenario runner"};
  app.require_subcommand(1);

  std::string scenario_ref;
  std::string out_dir = "out";
  int seed = -1;
  double duration = -1.0;

  CLI::App* run = app.add_subcommand("run", "Run a scenario and write timeseries.csv + metrics.json");
  run->add_option("--scenario", scenario_ref, "Built-in scenario name or scenario file path")
      ->required();
  run->add_option("--out", out_dir, "Output directory (created if missing)");
  run->add_option("--seed", seed, "Override the sensor-noise seed");
  run->add_option("--duration", duration, "Override the scenario duration [s]");

  std::string validate_ref;
  CLI::App* validate = app.add_subcommand("validate", "Check a scenario file without running it");
  validate->add_option("--scenario", validate_ref, "Scenario file path or built-in name")
      ->required();

  CLI::App* list = app.add_subcommand("list-scenarios", "Print the built-in scenario names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfigError;
  }

  try {
    if (list->parsed()) {
      for (const auto& name : longctrl::builtin_scenario_names()) std::cout << name << "\n";
      return kExitOk;
    }
    if (validate->parsed()) {
      LoadedScenario loaded = load(validate_ref);
      loaded.scenario.validate();
      loaded.stack.validate();
      std::cout << "ok: scenario '" << loaded.scenario.name << "' is valid\n";
      return kExitOk;
    }
    // run
    LoadedScenario loaded = load(scenario_ref);
    if (seed >= 0) loaded.scenario.seed = static_cast<std::uint32_t>(seed);
    if (duration > 0.0) loaded.scenario.duration = duration;

    const longctrl::RunResult result = longctrl::run_scenario(loaded.scenario, loaded.stack);
    const std::vector<std::string> violations = longctrl::check_safety_invariants(
        result.log, loaded.stack, loaded.scenario.predictive_gear);

    std::filesystem::create_directories(out_dir);
    longctrl::write_timeseries_csv((std::filesystem::path(out_dir) / "timeseries.csv").string(),
                                   result.log);
    longctrl::write_metrics_json((std::filesystem::path(out_dir) / "metrics.json").string(),
                                 result.metrics, violations);

    std::cout << "scenario '" << loaded.scenario.name << "': " << result.log.size()
              << " ticks, final v = " << result.metrics.final_v << " m/s\n";
    if (!violations.empty()) {
      std::cerr << "safety invariant violations:\n";
      for (const auto& v : violations) std::cerr << "  " << v << "\n";
      return kExitScenarioFailed;
    }
    return kExitOk;
  } catch (const longctrl::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
}
