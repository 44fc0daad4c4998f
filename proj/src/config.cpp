#include "optdes/config.hpp"

#include <stdexcept>

namespace optdes {

namespace {

Vec vec_from_json(const Json& j) {
  Vec v(j.size());
  int i = 0;
  for (const auto& x : j) v[i++] = x.get<double>();
  return v;
}

Json vec_to_json(const Vec& v) {
  Json a = Json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Mat mat_from_json(const Json& j) {
  if (j.empty()) throw ConfigError("matrix must be a nonempty array of rows");
  const std::size_t cols = j.front().size();
  Mat m(j.size(), cols);
  int r = 0;
  for (const auto& row : j) {
    if (row.size() != cols) throw ConfigError("matrix rows differ in length");
    int c = 0;
    for (const auto& x : row) m(r, c++) = x.get<double>();
    ++r;
  }
  return m;
}

const Json& need(const Json& j, const char* key, const char* where) {
  auto it = j.find(key);
  if (it == j.end())
    throw ConfigError(std::string(where) + ": missing required key \"" + key + "\"");
  return *it;
}

}  // namespace

Task task_from_string(const std::string& s) {
  if (s == "approx") return Task::Approx;
  if (s == "exact") return Task::Exact;
  if (s == "maximin_approx") return Task::MaximinApprox;
  if (s == "maximin_exact") return Task::MaximinExact;
  if (s == "verify") return Task::Verify;
  if (s == "preset") return Task::Preset;
  throw ConfigError("unknown task \"" + s + "\"");
}

std::string task_to_string(Task t) {
  switch (t) {
    case Task::Approx: return "approx";
    case Task::Exact: return "exact";
    case Task::MaximinApprox: return "maximin_approx";
    case Task::MaximinExact: return "maximin_exact";
    case Task::Verify: return "verify";
    case Task::Preset: return "preset";
  }
  return "?";
}

ModelSpec ModelConfig::build() const { return make_preset(preset, theta); }

Json ModelConfig::to_json() const {
  return Json{{"preset", preset}, {"theta", vec_to_json(theta)}};
}

ModelConfig ModelConfig::from_json(const Json& j) {
  ModelConfig m;
  m.preset = need(j, "preset", "model").get<std::string>();
  m.theta = vec_from_json(need(j, "theta", "model"));
  return m;
}

Criterion CriterionConfig::build(int q) const {
  if (kind == "D") return Criterion::D();
  if (kind == "A") return Criterion::A(q);
  if (kind == "c") {
    if (c.size() != q)
      throw ConfigError("criterion c vector length must equal q=" + std::to_string(q));
    return Criterion::c(c);
  }
  if (kind == "trace") {
    if (C.rows() != q)
      throw ConfigError("criterion matrix C must have q=" + std::to_string(q) + " rows");
    return Criterion::trace(C);
  }
  throw ConfigError("unknown criterion kind \"" + kind + "\"");
}

Json CriterionConfig::to_json() const {
  Json j{{"kind", kind}};
  if (kind == "c") j["c"] = vec_to_json(c);
  if (kind == "trace") {
    Json rows = Json::array();
    for (int r = 0; r < C.rows(); ++r) rows.push_back(vec_to_json(C.row(r)));
    j["C"] = rows;
  }
  return j;
}

CriterionConfig CriterionConfig::from_json(const Json& j) {
  CriterionConfig cc;
  cc.kind = need(j, "kind", "criterion").get<std::string>();
  if (cc.kind == "c") cc.c = vec_from_json(need(j, "c", "criterion"));
  if (cc.kind == "trace") cc.C = mat_from_json(need(j, "C", "criterion"));
  if (cc.kind != "D" && cc.kind != "A" && cc.kind != "c" && cc.kind != "trace")
    throw ConfigError("unknown criterion kind \"" + cc.kind + "\"");
  return cc;
}

DesignSpace space_from_json(const Json& j) {
  const std::string kind = need(j, "kind", "space").get<std::string>();
  try {
    if (kind == "box") {
      const Json& b = need(j, "bounds", "space");
      Vec lo(b.size()), hi(b.size());
      int d = 0;
      for (const auto& pair : b) {
        lo[d] = pair.at(0).get<double>();
        hi[d] = pair.at(1).get<double>();
        ++d;
      }
      return DesignSpace::box(lo, hi);
    }
    if (kind == "grid") {
      const Json& b = need(j, "bounds", "space");
      Vec lo(b.size()), hi(b.size());
      int d = 0;
      for (const auto& pair : b) {
        lo[d] = pair.at(0).get<double>();
        hi[d] = pair.at(1).get<double>();
        ++d;
      }
      const Json& lv = need(j, "levels", "space");
      std::vector<int> levels;
      if (lv.is_number_integer()) {
        levels.assign(b.size(), lv.get<int>());
      } else {
        for (const auto& x : lv) levels.push_back(x.get<int>());
      }
      return DesignSpace::grid(lo, hi, levels);
    }
    if (kind == "finite_set") {
      std::vector<Vec> pts;
      for (const auto& row : need(j, "points", "space")) {
        if (row.is_number()) {
          pts.push_back(Vec::Constant(1, row.get<double>()));
        } else {
          Vec x(row.size());
          int d = 0;
          for (const auto& v : row) x[d++] = v.get<double>();
          pts.push_back(std::move(x));
        }
      }
      return DesignSpace::finite_set(std::move(pts));
    }
    if (kind == "int_range") {
      return DesignSpace::integer_range(need(j, "low", "space").get<long>(),
                                        need(j, "high", "space").get<long>());
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("space: ") + e.what());
  }
  throw ConfigError("unknown space kind \"" + kind + "\"");
}

RunConfig RunConfig::from_json(const Json& j) {
  RunConfig cfg;
  cfg.task = task_from_string(need(j, "task", "config").get<std::string>());
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("out")) cfg.out_dir = j["out"].get<std::string>();

  if (cfg.task == Task::Preset) {
    cfg.preset_app = need(j, "app", "preset task").get<std::string>();
    cfg.preset_overrides = j.value("overrides", Json::object());
    if (j.contains("anneal")) cfg.preset_overrides["anneal"] = j["anneal"];
    if (j.contains("n")) cfg.preset_overrides["n"] = j["n"];
    return cfg;
  }

  const bool maximin =
      cfg.task == Task::MaximinApprox || cfg.task == Task::MaximinExact;
  if (maximin) {
    const Json& objs = need(j, "objectives", "maximin task");
    if (!objs.is_array() || objs.size() < 2)
      throw ConfigError("maximin tasks need an \"objectives\" array of length >= 2");
    for (const auto& o : objs) {
      ObjectiveConfig oc;
      oc.model = ModelConfig::from_json(need(o, "model", "objective"));
      oc.criterion = CriterionConfig::from_json(need(o, "criterion", "objective"));
      cfg.objectives.push_back(std::move(oc));
    }
  } else {
    cfg.model = ModelConfig::from_json(need(j, "model", "config"));
    cfg.criterion = CriterionConfig::from_json(need(j, "criterion", "config"));
  }

  cfg.space_json = need(j, "space", "config");
  cfg.space = space_from_json(cfg.space_json);

  if (cfg.task == Task::Exact || cfg.task == Task::MaximinExact) {
    cfg.n = need(j, "n", "exact task").get<int>();
    if (cfg.n < 1) throw ConfigError("exact tasks require n >= 1");
  }
  if (cfg.task == Task::Verify)
    cfg.design_file = need(j, "design_file", "verify task").get<std::string>();

  if (j.contains("approx")) {
    const Json& a = j["approx"];
    if (a.contains("eq_tolerance")) cfg.approx.eq_tolerance = a["eq_tolerance"];
    if (a.contains("max_iterations")) cfg.approx.max_iterations = a["max_iterations"];
    if (a.contains("prune_threshold")) cfg.approx.prune_threshold = a["prune_threshold"];
    try {
      cfg.approx.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("approx: ") + e.what());
    }
  }
  if (j.contains("anneal")) {
    const Json& a = j["anneal"];
    if (a.contains("T0")) cfg.anneal.T0 = a["T0"];
    if (a.contains("T_min")) cfg.anneal.T_min = a["T_min"];
    if (a.contains("alpha")) cfg.anneal.alpha = a["alpha"];
    if (a.contains("K")) cfg.anneal.K = a["K"];
    if (a.contains("delta")) cfg.anneal.delta = a["delta"];
    if (a.contains("restarts")) cfg.anneal.restarts = a["restarts"];
    try {
      cfg.anneal.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("anneal: ") + e.what());
    }
  }
  cfg.anneal.seed = cfg.seed;
  return cfg;
}

Json RunConfig::to_json() const {
  Json j{{"task", task_to_string(task)},
         {"seed", seed},
         {"out", out_dir.string()}};
  if (task == Task::Preset) {
    j["app"] = preset_app;
    j["overrides"] = preset_overrides;
    return j;
  }
  if (task == Task::MaximinApprox || task == Task::MaximinExact) {
    Json objs = Json::array();
    for (const auto& o : objectives)
      objs.push_back(Json{{"model", o.model.to_json()},
                          {"criterion", o.criterion.to_json()}});
    j["objectives"] = std::move(objs);
  } else {
    j["model"] = model.to_json();
    j["criterion"] = criterion.to_json();
  }
  j["space"] = space_json;
  if (task == Task::Exact || task == Task::MaximinExact) j["n"] = n;
  if (task == Task::Verify) j["design_file"] = design_file;
  j["approx"] = Json{{"eq_tolerance", approx.eq_tolerance},
                     {"max_iterations", approx.max_iterations},
                     {"prune_threshold", approx.prune_threshold}};
  j["anneal"] = Json{{"T0", anneal.T0},         {"T_min", anneal.T_min},
                     {"alpha", anneal.alpha},   {"K", anneal.K},
                     {"delta", anneal.delta},   {"restarts", anneal.restarts},
                     {"seed", anneal.seed}};
  return j;
}

}  // namespace optdes
