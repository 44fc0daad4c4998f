#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "optdes/runner.hpp"

namespace {

struct CommonFlags {
  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int n = 0;
  int restarts = 0;
};

void add_common(CLI::App* cmd, CommonFlags& fl, bool config_required) {
  auto* c = cmd->add_option("--config", fl.config, "problem configuration (JSON)");
  if (config_required) c->required();
  cmd->add_option("--out", fl.out, "output directory (overrides config)");
  cmd->add_option("--seed", fl.seed, "master seed (overrides config)")
      ->each([&fl](const std::string&) { fl.seed_set = true; });
  cmd->add_option("--n", fl.n, "run count for exact tasks (overrides config)");
  cmd->add_option("--restarts", fl.restarts,
                  "annealing restarts (overrides config)");
}

int run_with(const CommonFlags& fl, std::optional<optdes::Task> forced_task) {
  optdes::RunConfig cfg;
  try {
    cfg = optdes::RunConfig::from_json(optdes::read_json_file(fl.config));
  } catch (const optdes::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return optdes::kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return optdes::kExitConfig;
  }
  if (forced_task) {
    if (*forced_task == optdes::Task::MaximinApprox &&
        (cfg.task == optdes::Task::MaximinApprox ||
         cfg.task == optdes::Task::MaximinExact)) {
      // the maximin subcommand accepts either flavor from the config
    } else {
      cfg.task = *forced_task;
    }
  }
  if (!fl.out.empty()) cfg.out_dir = fl.out;
  if (fl.seed_set) {
    cfg.seed = fl.seed;
    cfg.anneal.seed = fl.seed;
  }
  if (fl.n > 0) cfg.n = fl.n;
  if (fl.restarts > 0) cfg.anneal.restarts = fl.restarts;
  if ((cfg.task == optdes::Task::Exact || cfg.task == optdes::Task::MaximinExact) &&
      cfg.n < 1) {
    std::cerr << "config error: exact tasks require n >= 1 (config key \"n\" "
                 "or flag --n)\n";
    return optdes::kExitConfig;
  }
  return optdes::run(cfg);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"optimal approximate and exact experimental designs"};
  app.require_subcommand(1);

  CommonFlags fl_approx, fl_exact, fl_maximin, fl_verify, fl_preset;
  std::string preset_app;
  std::string preset_overrides_file;

  auto* approx = app.add_subcommand("approx", "optimal approximate design on a candidate set");
  add_common(approx, fl_approx, true);
  auto* exact = app.add_subcommand("exact", "optimal exact n-run design");
  add_common(exact, fl_exact, true);
  auto* maximin = app.add_subcommand("maximin", "maximin efficiency design over several objectives");
  add_common(maximin, fl_maximin, true);
  auto* verify = app.add_subcommand("verify", "equivalence-theorem check of a stored design");
  add_common(verify, fl_verify, true);
  auto* preset = app.add_subcommand("preset", "run a bundled benchmark application");
  add_common(preset, fl_preset, false);
  preset->add_option("--app", preset_app,
                     "one of app1_case_i, app1_case_ii, app2, app3, app4");
  preset->add_option("--overrides", preset_overrides_file,
                     "JSON file with preset overrides (e.g. app4 models)");

  CLI11_PARSE(app, argc, argv);

  if (approx->parsed()) return run_with(fl_approx, optdes::Task::Approx);
  if (exact->parsed()) return run_with(fl_exact, optdes::Task::Exact);
  if (maximin->parsed()) return run_with(fl_maximin, optdes::Task::MaximinApprox);
  if (verify->parsed()) return run_with(fl_verify, optdes::Task::Verify);

  // preset: either from a config file or fully flag-driven
  if (!fl_preset.config.empty() && preset_app.empty())
    return run_with(fl_preset, std::nullopt);
  if (preset_app.empty()) {
    std::cerr << "config error: preset needs --app or --config\n";
    return optdes::kExitConfig;
  }
  optdes::Json overrides = optdes::Json::object();
  if (!preset_overrides_file.empty()) {
    try {
      overrides = optdes::read_json_file(preset_overrides_file);
    } catch (const std::exception& e) {
      std::cerr << "config error: " << e.what() << "\n";
      return optdes::kExitConfig;
    }
  }
  if (fl_preset.n > 0) overrides["n"] = fl_preset.n;
  optdes::RunConfig cfg;
  cfg.task = optdes::Task::Preset;
  cfg.preset_app = preset_app;
  cfg.preset_overrides = overrides;
  if (!fl_preset.out.empty()) cfg.out_dir = fl_preset.out;
  if (fl_preset.seed_set) cfg.seed = fl_preset.seed;
  if (fl_preset.restarts > 0) cfg.anneal.restarts = fl_preset.restarts;
  return optdes::run(cfg);
}
