#include "optdes/runner.hpp"

#include <chrono>
#include <cmath>
#include <iostream>

namespace optdes {

namespace fs = std::filesystem;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// std::invalid_argument from here (wrong theta length, unknown preset)
// surfaces as the model-mismatch exit code, distinct from schema errors
ModelSpec build_model_checked(const ModelConfig& mc) { return mc.build(); }

std::vector<Vec> candidate_set(const DesignSpace& space) {
  if (space.kind() == DesignSpace::Kind::Box)
    throw ConfigError(
        "this task solves on a finite candidate set; declare a grid or "
        "finite_set space (a box cannot be enumerated)");
  return space.enumerate();
}

Json approx_report_json(const SolveReport& rep, std::size_t support) {
  Json j{{"loss", rep.loss},
         {"eq_residual", rep.eq_residual},
         {"support_residual", rep.support_residual},
         {"eq_tolerance", rep.eq_tolerance},
         {"iterations", rep.iterations},
         {"converged", rep.converged},
         {"support_size", support}};
  if (!rep.objective_efficiencies.empty()) {
    j["min_efficiency"] = rep.min_eff;
    j["objective_efficiencies"] = rep.objective_efficiencies;
  }
  return j;
}

Json exact_report_json(const SearchResult& res) {
  Json restarts = Json::array();
  for (const auto& rr : res.restart_reports)
    restarts.push_back(Json{{"restart", rr.restart},
                            {"final_loss", rr.final_loss},
                            {"efficiency", rr.efficiency},
                            {"iterations", rr.iterations},
                            {"accepted", rr.accepted},
                            {"ok", rr.ok}});
  return Json{{"n", res.design.n},
              {"loss", res.loss},
              {"efficiency", res.efficiency},
              {"support_size", res.design.size()},
              {"chosen_restart", res.chosen_restart},
              {"restarts", std::move(restarts)}};
}

void write_traces(const fs::path& dir, const SearchResult& res) {
  for (std::size_t j = 0; j < res.traces.size(); ++j)
    write_file(dir / ("trace_" + std::to_string(j) + ".csv"),
               trace_csv(res.traces[j]));
  write_file(dir / "restarts.csv", restarts_csv(res.restart_reports));
}

int run_single_or_exact(const RunConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  const ModelSpec model = build_model_checked(cfg.model);
  const Criterion crit = cfg.criterion.build(model.q);
  const std::vector<Vec> candidates = candidate_set(cfg.space);

  auto [adesign, arep] = solve_single(model, crit, candidates, cfg.approx);
  const double approx_sec = seconds_since(t0);

  Json report{{"task", task_to_string(cfg.task)},
              {"status", "ok"},
              {"config", cfg.to_json()},
              {"approx", approx_report_json(arep, adesign.size())}};

  fs::create_directories(cfg.out_dir);
  write_file(cfg.out_dir / "dprofile.csv",
             dprofile_csv(candidates, dprofile(model, crit, adesign, candidates)));

  if (cfg.task == Task::Approx) {
    write_file(cfg.out_dir / "design.csv", design_csv(adesign));
    write_file(cfg.out_dir / "design.json", design_json(adesign).dump(2) + "\n");
    report["timings"] = Json{{"total_sec", seconds_since(t0)},
                             {"approx_sec", approx_sec}};
    write_file(cfg.out_dir / "report.json", report.dump(2) + "\n");
    return kExitOk;
  }

  // exact task: keep the approximate stage artifacts under distinct names
  write_file(cfg.out_dir / "approx_design.csv", design_csv(adesign));
  write_file(cfg.out_dir / "approx_design.json", design_json(adesign).dump(2) + "\n");

  SearchResult res = search(model, crit, adesign, cfg.n, cfg.space, cfg.anneal);
  write_file(cfg.out_dir / "design.csv", design_csv(res.design));
  write_file(cfg.out_dir / "design.json", design_json(res.design).dump(2) + "\n");
  write_traces(cfg.out_dir, res);
  report["exact"] = exact_report_json(res);
  report["timings"] = Json{{"total_sec", seconds_since(t0)},
                           {"approx_sec", approx_sec},
                           {"anneal_sec", seconds_since(t0) - approx_sec}};
  write_file(cfg.out_dir / "report.json", report.dump(2) + "\n");
  return kExitOk;
}

int run_maximin(const RunConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<Vec> candidates = candidate_set(cfg.space);

  MaximinProblem problem;
  Json objective_reports = Json::array();
  for (const auto& oc : cfg.objectives) {
    ModelSpec model = build_model_checked(oc.model);
    Criterion crit = oc.criterion.build(model.q);
    auto [od, orep] = solve_single(model, crit, candidates, cfg.approx);
    objective_reports.push_back(Json{{"model", oc.model.to_json()},
                                     {"criterion", oc.criterion.to_json()},
                                     {"reference_loss", orep.loss},
                                     {"converged", orep.converged}});
    problem.reference_losses.push_back(orep.loss);
    problem.objectives.emplace_back(std::move(model), std::move(crit));
  }

  auto [adesign, arep] = solve_maximin(problem, candidates, cfg.approx);
  const double approx_sec = seconds_since(t0);

  Json report{{"task", task_to_string(cfg.task)},
              {"status", "ok"},
              {"config", cfg.to_json()},
              {"objectives", std::move(objective_reports)},
              {"approx", approx_report_json(arep, adesign.size())}};

  fs::create_directories(cfg.out_dir);
  for (std::size_t i = 0; i < problem.objectives.size(); ++i) {
    const auto& [model, crit] = problem.objectives[i];
    write_file(cfg.out_dir / ("dprofile_" + std::to_string(i) + ".csv"),
               dprofile_csv(candidates, dprofile(model, crit, adesign, candidates)));
  }

  if (cfg.task == Task::MaximinApprox) {
    write_file(cfg.out_dir / "design.csv", design_csv(adesign));
    write_file(cfg.out_dir / "design.json", design_json(adesign).dump(2) + "\n");
    report["timings"] = Json{{"total_sec", seconds_since(t0)},
                             {"approx_sec", approx_sec}};
    write_file(cfg.out_dir / "report.json", report.dump(2) + "\n");
    return kExitOk;
  }

  write_file(cfg.out_dir / "approx_design.csv", design_csv(adesign));
  write_file(cfg.out_dir / "approx_design.json", design_json(adesign).dump(2) + "\n");

  SearchResult res = search_maximin(problem, adesign, cfg.n, cfg.space, cfg.anneal);
  write_file(cfg.out_dir / "design.csv", design_csv(res.design));
  write_file(cfg.out_dir / "design.json", design_json(res.design).dump(2) + "\n");
  write_traces(cfg.out_dir, res);

  Json ex = exact_report_json(res);
  ex["min_efficiency"] = res.efficiency;
  {
    // per-objective efficiencies of the chosen exact design
    Json effs = Json::array();
    const auto runs = res.design.runs();
    for (std::size_t i = 0; i < problem.objectives.size(); ++i) {
      const auto& [model, crit] = problem.objectives[i];
      const double l = exact_loss_fn(model, crit)(runs);
      effs.push_back(problem.reference_losses[i] / l);
    }
    ex["objective_efficiencies"] = std::move(effs);
  }
  report["exact"] = std::move(ex);
  report["timings"] = Json{{"total_sec", seconds_since(t0)},
                           {"approx_sec", approx_sec},
                           {"anneal_sec", seconds_since(t0) - approx_sec}};
  write_file(cfg.out_dir / "report.json", report.dump(2) + "\n");
  return kExitOk;
}

int run_verify(const RunConfig& cfg) {
  const ModelSpec model = build_model_checked(cfg.model);
  const Criterion crit = cfg.criterion.build(model.q);
  const std::vector<Vec> candidates = candidate_set(cfg.space);
  const ApproximateDesign design =
      any_design_as_approx_from_json(read_json_file(cfg.design_file));

  const auto [maxd, where] = verify_equivalence(model, crit, design, candidates);
  double tol = cfg.approx.eq_tolerance;
  if (tol <= 0.0) {
    Vec w = Vec::Constant(candidates.size(), 1.0 / double(candidates.size()));
    std::vector<Vec> pts = candidates;
    std::vector<double> ww(w.data(), w.data() + w.size());
    const double lu = criterion_loss(
        crit, info_matrix(model, ApproximateDesign::make(pts, ww)));
    tol = 1e-5 * lu;
  }

  Json argmax = Json::array();
  for (int d = 0; d < where.size(); ++d) argmax.push_back(where[d]);
  Json report{{"task", "verify"},
              {"status", "ok"},
              {"config", cfg.to_json()},
              {"verify", Json{{"max_d", maxd},
                              {"argmax", std::move(argmax)},
                              {"eq_tolerance", tol},
                              {"verdict", maxd <= tol ? "optimal" : "not optimal"}}}};
  fs::create_directories(cfg.out_dir);
  write_file(cfg.out_dir / "dprofile.csv",
             dprofile_csv(candidates, dprofile(model, crit, design, candidates)));
  write_file(cfg.out_dir / "report.json", report.dump(2) + "\n");
  return kExitOk;
}

void write_error_report(const fs::path& out_dir, int code, const std::string& what) {
  try {
    fs::create_directories(out_dir);
    write_file(out_dir / "error.json",
               Json{{"status", "error"}, {"code", code}, {"message", what}}.dump(2) +
                   "\n");
  } catch (...) {
    // the stderr line below is the fallback
  }
}

}  // namespace

int run(const RunConfig& cfg) {
  try {
    switch (cfg.task) {
      case Task::Approx:
      case Task::Exact:
        return run_single_or_exact(cfg);
      case Task::MaximinApprox:
      case Task::MaximinExact:
        return run_maximin(cfg);
      case Task::Verify:
        return run_verify(cfg);
      case Task::Preset:
        return run_preset(cfg.preset_app, cfg.preset_overrides, cfg.out_dir,
                          cfg.seed, cfg.anneal.restarts);
    }
    return kExitFailure;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    write_error_report(cfg.out_dir, kExitConfig, e.what());
    return kExitConfig;
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    write_error_report(cfg.out_dir, kExitInfeasible, e.what());
    return kExitInfeasible;
  } catch (const ExternalParamsError& e) {
    std::cerr << "external parameters required: " << e.what() << "\n";
    write_error_report(cfg.out_dir, kExitExternalParams, e.what());
    return kExitExternalParams;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    write_error_report(cfg.out_dir, kExitModelMismatch, e.what());
    return kExitModelMismatch;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    write_error_report(cfg.out_dir, kExitFailure, e.what());
    return kExitFailure;
  }
}

int run_config_file(const fs::path& config_path) {
  RunConfig cfg;
  try {
    cfg = RunConfig::from_json(read_json_file(config_path));
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  return run(cfg);
}

}  // namespace optdes
