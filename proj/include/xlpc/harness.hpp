#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "xlpc/channel.hpp"
#include "xlpc/equilibria.hpp"

namespace xlpc {

inline constexpr const char* kVersion = "0.1.0";

enum class Scenario {
  Region,
  EquilibriaVsN,
  TminVsB,
  TminVsQ,
  LambdaVsEta,
  LambdaVsQ,
  WelfareFrg,
  WelfareDrg,
  QueueCompare,
};

std::string to_string(Scenario s);
Scenario parse_scenario(std::string_view name);
const std::vector<Scenario>& all_scenarios();

/// Default system constants: c = 1, p_max = 0.1 W, sigma^2 = 1e-3 W, K = 10,
/// q = 0.5, b = 5 mW and a 20 dB channel range.
SystemParams defaults();

/// Fixed-cost-free, always-backlogged preset (b = 0, q = 1 - 1e-9).
SystemParams goodman_mode(SystemParams params);

/// Scenario knobs that are not system constants. Lists are given on the
/// command line as comma-separated values.
struct ScenarioOptions {
  std::vector<int> n_list;
  std::vector<int> l_list;
  std::vector<double> q_list;
  std::vector<double> b_list;
  std::vector<double> lambda_fracs;
  double t_factor = 2.0;
  int horizon_cap = 1000;
  int grid = 24;
  int nb_draws = 100;
  int nb_grid = 12;
  int queue_draws = 200;
  long long slots = 100'000;
  int op_draws = 2000;
};

/// Scenario-dependent defaults for the list-valued options.
ScenarioOptions default_options(Scenario s);

const std::vector<std::string>& option_keys();

struct ExperimentSpec {
  Scenario scenario = Scenario::Region;
  SystemParams params = defaults();
  ScenarioOptions options;
  std::vector<std::pair<std::string, std::string>> overrides;  // as given, in order
  std::size_t draws = 10'000;
  std::uint64_t seed = 1;
  std::string out_dir = ".";
};

ExperimentSpec make_spec(Scenario s);

/// Routes key=value to a system constant or a scenario option after type
/// checking; unknown keys throw DomainError. Recorded in spec.overrides.
void apply_override(ExperimentSpec& spec, std::string_view key, std::string_view value);
void apply_override(ExperimentSpec& spec, std::string_view assignment);

/// Throws before any computation when the scenario cannot run.
void validate_spec(const ExperimentSpec& spec);

struct ExperimentResult {
  std::vector<std::string> files;  // CSV outputs, then the manifest
  nlohmann::ordered_json manifest;
};

/// Runs the scenario and writes <out>/<scenario>.csv and
/// <out>/<scenario>.manifest.json.
ExperimentResult run_experiment(const ExperimentSpec& spec);

/// CSV for the scenario without touching the filesystem.
std::string run_scenario_csv(const ExperimentSpec& spec);

nlohmann::ordered_json manifest_for(const ExperimentSpec& spec);
ExperimentSpec spec_from_manifest(const nlohmann::ordered_json& manifest);
ExperimentSpec load_manifest(const std::string& path);

}  // namespace xlpc
