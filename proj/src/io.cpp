#include "optdes/io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace optdes {

namespace {

std::string fmt6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string header(int p, const char* last) {
  std::string h;
  for (int d = 0; d < p; ++d) h += "x" + std::to_string(d + 1) + ",";
  h += last;
  h += "\n";
  return h;
}

std::vector<Vec> points_from_json(const Json& j) {
  std::vector<Vec> pts;
  for (const auto& row : j) {
    Vec x(row.size());
    int d = 0;
    for (const auto& v : row) x[d++] = v.get<double>();
    pts.push_back(std::move(x));
  }
  return pts;
}

Json points_to_json(const std::vector<Vec>& pts) {
  Json arr = Json::array();
  for (const Vec& x : pts) {
    Json row = Json::array();
    for (int d = 0; d < x.size(); ++d) row.push_back(x[d]);
    arr.push_back(std::move(row));
  }
  return arr;
}

}  // namespace

std::string design_csv(const ApproximateDesign& d) {
  std::string out = header(static_cast<int>(d.points.front().size()), "weight");
  for (std::size_t i = 0; i < d.points.size(); ++i) {
    for (int k = 0; k < d.points[i].size(); ++k) out += fmt6(d.points[i][k]) + ",";
    out += fmt6(d.weights[i]) + "\n";
  }
  return out;
}

std::string design_csv(const ExactDesign& d) {
  std::string out = header(static_cast<int>(d.points.front().size()), "count");
  for (std::size_t i = 0; i < d.points.size(); ++i) {
    for (int k = 0; k < d.points[i].size(); ++k) out += fmt6(d.points[i][k]) + ",";
    out += std::to_string(d.counts[i]) + "\n";
  }
  return out;
}

Json design_json(const ApproximateDesign& d) {
  return Json{{"type", "approximate"},
              {"points", points_to_json(d.points)},
              {"weights", d.weights}};
}

Json design_json(const ExactDesign& d) {
  return Json{{"type", "exact"},
              {"points", points_to_json(d.points)},
              {"counts", d.counts},
              {"n", d.n}};
}

ApproximateDesign approx_design_from_json(const Json& j) {
  if (j.value("type", "") != "approximate")
    throw std::invalid_argument("expected an approximate design document");
  return ApproximateDesign::make(points_from_json(j.at("points")),
                                 j.at("weights").get<std::vector<double>>());
}

ExactDesign exact_design_from_json(const Json& j) {
  if (j.value("type", "") != "exact")
    throw std::invalid_argument("expected an exact design document");
  return ExactDesign::make(points_from_json(j.at("points")),
                           j.at("counts").get<std::vector<int>>());
}

ApproximateDesign any_design_as_approx_from_json(const Json& j) {
  const std::string type = j.value("type", "");
  if (type == "approximate") return approx_design_from_json(j);
  if (type == "exact") return exact_design_from_json(j).as_approximate();
  throw std::invalid_argument("design document missing a known \"type\"");
}

std::string dprofile_csv(const std::vector<Vec>& candidates,
                         const std::vector<double>& d) {
  if (candidates.size() != d.size())
    throw std::invalid_argument("profile and candidate sizes differ");
  std::string out = header(static_cast<int>(candidates.front().size()), "d");
  for (std::size_t j = 0; j < d.size(); ++j) {
    for (int k = 0; k < candidates[j].size(); ++k)
      out += fmt6(candidates[j][k]) + ",";
    out += fmt6(d[j]) + "\n";
  }
  return out;
}

std::string trace_csv(const AnnealTrace& trace) {
  std::string out = "iteration,temperature,loss,accepted\n";
  char buf[96];
  for (const auto& r : trace.records) {
    std::snprintf(buf, sizeof buf, "%lld,%.6g,%.10g,%d\n",
                  static_cast<long long>(r.iteration), r.temperature,
                  r.proposed_loss, r.accepted ? 1 : 0);
    out += buf;
  }
  return out;
}

std::string restarts_csv(const std::vector<RestartReport>& reports) {
  std::string out = "restart,final_loss,efficiency,iterations,accepted,ok\n";
  char buf[128];
  for (const auto& r : reports) {
    std::snprintf(buf, sizeof buf, "%d,%.10g,%.10g,%lld,%lld,%d\n", r.restart,
                  r.final_loss, r.efficiency, static_cast<long long>(r.iterations),
                  static_cast<long long>(r.accepted), r.ok ? 1 : 0);
    out += buf;
  }
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  f << contents;
  if (!f) throw std::runtime_error("failed writing " + path.string());
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path.string());
  Json j;
  f >> j;
  return j;
}

}  // namespace optdes
