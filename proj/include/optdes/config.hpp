#ifndef OPTDES_CONFIG_HPP
#define OPTDES_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "optdes/approx_solver.hpp"
#include "optdes/criteria.hpp"
#include "optdes/design_space.hpp"
#include "optdes/exact_solver.hpp"
#include "optdes/io.hpp"
#include "optdes/model.hpp"

namespace optdes {

/// Schema violation in a run configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Task { Approx, Exact, MaximinApprox, MaximinExact, Verify, Preset };

Task task_from_string(const std::string& s);
std::string task_to_string(Task t);

struct ModelConfig {
  std::string preset;
  Vec theta;

  ModelSpec build() const;  // throws std::invalid_argument on mismatch
  Json to_json() const;
  static ModelConfig from_json(const Json& j);
};

struct CriterionConfig {
  std::string kind;  // "D" | "A" | "c" | "trace"
  Vec c;             // kind == "c"
  Mat C;             // kind == "trace"

  Criterion build(int q) const;
  Json to_json() const;
  static CriterionConfig from_json(const Json& j);
};

struct ObjectiveConfig {
  ModelConfig model;
  CriterionConfig criterion;
};

struct RunConfig {
  Task task = Task::Approx;
  std::uint64_t seed = 20240101;
  std::filesystem::path out_dir = "results";

  ModelConfig model;
  CriterionConfig criterion;
  std::vector<ObjectiveConfig> objectives;  // maximin tasks
  DesignSpace space = DesignSpace::integer_range(0, 1);
  Json space_json;  // original declaration, echoed in reports

  int n = 0;  // exact tasks
  ApproxSolveOptions approx;
  AnnealConfig anneal;

  std::string design_file;  // verify task
  std::string preset_app;   // preset task
  Json preset_overrides;    // preset task

  static RunConfig from_json(const Json& j);
  /// Fully resolved echo: every default materialized.
  Json to_json() const;
};

DesignSpace space_from_json(const Json& j);

}  // namespace optdes

#endif
