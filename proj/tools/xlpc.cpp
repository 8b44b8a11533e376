// Command line driver: one subcommand per experiment scenario, plus replay
// from a run manifest and a dump of the default constants.
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "xlpc/errors.hpp"
#include "xlpc/harness.hpp"

namespace {

struct ScenarioFlags {
  std::string config;
  std::uint64_t seed = 1;
  std::size_t draws = 0;
  std::string out = ".";
  std::vector<std::string> sets;
};

void add_common(CLI::App* cmd, ScenarioFlags& f) {
  cmd->add_option("--config", f.config, "flat key = value parameter file")->check(CLI::ExistingFile);
  cmd->add_option("--seed", f.seed, "base random seed");
  cmd->add_option("--draws", f.draws, "Monte Carlo channel draws");
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--set", f.sets, "override key=value (repeatable)")->take_all();
}

int run(xlpc::ExperimentSpec spec) {
  const auto result = xlpc::run_experiment(spec);
  for (const auto& f : result.files) std::cout << f << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cross-layer energy-efficient power control experiments"};
  app.set_version_flag("--version", std::string(xlpc::kVersion));
  app.require_subcommand(1);

  std::vector<std::pair<xlpc::Scenario, CLI::App*>> cmds;
  std::vector<ScenarioFlags> flags(xlpc::all_scenarios().size());
  for (std::size_t k = 0; k < xlpc::all_scenarios().size(); ++k) {
    const auto s = xlpc::all_scenarios()[k];
    auto* cmd = app.add_subcommand(xlpc::to_string(s), "run the " + xlpc::to_string(s) + " scenario");
    add_common(cmd, flags[k]);
    cmds.emplace_back(s, cmd);
  }

  std::string manifest;
  std::string replay_out = "replay";
  auto* replay = app.add_subcommand("replay", "re-run an experiment from its manifest");
  replay->add_option("manifest", manifest)->required()->check(CLI::ExistingFile);
  replay->add_option("--out", replay_out, "output directory");

  auto* show = app.add_subcommand("defaults", "print the default parameters as a config file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (show->parsed()) {
      std::cout << xlpc::params_to_text(xlpc::defaults());
      return 0;
    }
    if (replay->parsed()) {
      auto spec = xlpc::load_manifest(manifest);
      spec.out_dir = replay_out;
      return run(spec);
    }
    for (std::size_t k = 0; k < cmds.size(); ++k) {
      if (!cmds[k].second->parsed()) continue;
      const auto& f = flags[k];
      auto spec = xlpc::make_spec(cmds[k].first);
      if (!f.config.empty()) spec.params = xlpc::load_params(f.config, spec.params);
      spec.seed = f.seed;
      if (f.draws > 0) spec.draws = f.draws;
      spec.out_dir = f.out;
      for (const auto& s : f.sets) xlpc::apply_override(spec, s);
      return run(spec);
    }
  } catch (const xlpc::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
