// Acceptance suite: runs every benchmark criterion end to end and prints
// one pass/fail line per criterion. Exit status is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "optdes/runner.hpp"

using namespace optdes;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(const std::string& name, bool pass, const std::string& detail) {
  std::printf("[%s] %s  --  %s\n", pass ? "PASS" : "FAIL", name.c_str(),
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

Vec v(std::initializer_list<double> xs) {
  Vec out(static_cast<int>(xs.size()));
  int i = 0;
  for (double x : xs) out[i++] = x;
  return out;
}

double elapsed(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

double weight_at(const ApproximateDesign& d, double x) {
  for (std::size_t i = 0; i < d.points.size(); ++i)
    if (std::abs(d.points[i][0] - x) <= 1e-9) return d.weights[i];
  return 0.0;
}

char buf[512];

ModelSpec group_model() {
  return make_preset(PresetId::GroupTesting, v({0.07, 0.93, 0.96}));
}

// certification records collected from converged solves (criterion 9)
struct Certified {
  std::string name;
  double eq_residual;
  double support_residual;
  double eq_tolerance;
};
std::vector<Certified> g_certified;

void remember(const std::string& name, const SolveReport& rep) {
  if (rep.converged)
    g_certified.push_back(
        {name, rep.eq_residual, rep.support_residual, rep.eq_tolerance});
}

AnnealConfig tuned(const ModelSpec& m, const Criterion& crit,
                   const ApproximateDesign& approx, int n, std::uint64_t seed,
                   int restarts, double tmin_factor = 1e-6) {
  AnnealConfig cfg;
  cfg.seed = seed;
  cfg.restarts = restarts;
  cfg.delta = 1e-12;
  cfg.T0 =
      0.03 * std::abs(criterion_loss(crit, info_matrix(m, round_to_exact(approx, n))));
  cfg.T_min = tmin_factor * cfg.T0;
  return cfg;
}

// ---------------------------------------------------------------- 1 & 2
ApproximateDesign criterion_1_and_2() {
  const ModelSpec m = group_model();
  const auto cands = DesignSpace::integer_range(1, 61).enumerate();

  const auto t0 = std::chrono::steady_clock::now();
  auto [dd, drep] = solve_single(m, Criterion::D(), cands);
  const double secs = elapsed(t0);
  remember("group D OAD", drep);

  bool ok = drep.converged && dd.size() == 3 && secs < 1.0;
  for (double x : {1.0, 17.0, 61.0})
    ok = ok && std::abs(weight_at(dd, x) - 1.0 / 3) <= 1e-3;
  ok = ok && std::abs(drep.loss - 0.1448) <= 5e-5;
  std::snprintf(buf, sizeof buf,
                "support {1,17,61} w=(%.4f,%.4f,%.4f) loss=%.5f (0.1448 +- 5e-5) "
                "in %.3fs",
                weight_at(dd, 1), weight_at(dd, 17), weight_at(dd, 61), drep.loss,
                secs);
  report("criterion 1: group-testing D-OAD reproduces the published design", ok, buf);

  ApproxSolveOptions copts;
  copts.eq_tolerance = 1e-9;
  auto [dc, crep] = solve_single(m, Criterion::c(v({1, 0, 0})), cands, copts);
  remember("group c OAD", crep);
  bool okc = crep.converged && dc.size() == 3;
  okc = okc && std::abs(weight_at(dc, 1) - 0.1310) <= 2e-3;
  okc = okc && std::abs(weight_at(dc, 16) - 0.6279) <= 2e-3;
  okc = okc && std::abs(weight_at(dc, 61) - 0.2411) <= 2e-3;
  okc = okc && std::abs(crep.loss - 0.0354) <= 5e-4;
  std::snprintf(buf, sizeof buf,
                "support {1,16,61} w=(%.4f,%.4f,%.4f) loss=%.5f (0.0354 +- 5e-4)",
                weight_at(dc, 1), weight_at(dc, 16), weight_at(dc, 61), crep.loss);
  report("criterion 2: group-testing c-OAD reproduces the published design", okc, buf);
  return dd;
}

// ------------------------------------------------------------------- 3
void criterion_3() {
  const ModelSpec m = group_model();
  const auto space = DesignSpace::integer_range(1, 61);
  const auto cands = space.enumerate();

  struct Row {
    Criterion crit;
    const char* tag;
    double targets[5];
  };
  const Row rows[] = {
      {Criterion::D(), "D", {0.9906, 0.9912, 1.0000, 0.9944, 0.9946}},
      {Criterion::c(v({1, 0, 0})), "c", {0.9799, 0.9808, 0.9891, 0.9968, 0.9970}},
  };

  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  std::string detail;
  for (const Row& row : rows) {
    ApproxSolveOptions aopts;
    aopts.eq_tolerance = 1e-9;
    const auto [approx, arep] = solve_single(m, row.crit, cands, aopts);
    for (int n = 10; n <= 14; ++n) {
      const AnnealConfig cfg = tuned(m, row.crit, approx, n, 1, 10);
      const auto res = search(m, row.crit, approx, n, space, cfg);
      const double target = row.targets[n - 10];
      const bool hit = std::abs(res.efficiency - target) <= 5e-3;
      ok = ok && hit;
      std::snprintf(buf, sizeof buf, "%s n=%d:%.4f(%.4f)%s ", row.tag, n,
                    res.efficiency, target, hit ? "" : "!");
      detail += buf;
    }
  }
  std::snprintf(buf, sizeof buf, "in %.1fs", elapsed(t0));
  detail += buf;
  report("criterion 3: group-testing exact designs match Table-level efficiencies",
         ok, detail);
}

// --------------------------------------------------------------- 4 & 5
void criterion_4_and_5() {
  Vec theta(8);
  theta << -0.4926, -0.6280, -0.3283, 0.4378, 0.5283, -0.6120, -0.6837, -0.2061;
  const ModelSpec m = make_preset(PresetId::Logit7, theta);
  const DesignSpace space = DesignSpace::grid(Vec::Constant(7, -1.0),
                                              Vec::Constant(7, 1.0),
                                              std::vector<int>(7, 4));
  const auto cands = space.enumerate();

  const auto t0 = std::chrono::steady_clock::now();
  ApproxSolveOptions aopts;
  aopts.max_iterations = 20000;
  const auto [approx, arep] = solve_single(m, Criterion::D(), cands, aopts);
  const double secs = elapsed(t0);
  remember("logit7 OAD", arep);

  const bool ok4 = arep.loss <= 4.950 && approx.size() <= 35 && secs < 600.0;
  std::snprintf(buf, sizeof buf,
                "loss=%.4f (<=4.950, published 4.9485) support=%zu (<=35) "
                "converged=%d in %.0fs (<600)",
                arep.loss, approx.size(), int(arep.converged), secs);
  report("criterion 4: seven-variable logistic OAD on the 4^7 grid", ok4, buf);

  const auto t1 = std::chrono::steady_clock::now();
  const AnnealConfig cfg = tuned(m, Criterion::D(), approx, 30, 1, 10);
  const auto res = search(m, Criterion::D(), approx, 30, space, cfg);
  const bool ok5 = res.efficiency >= 0.95;
  std::snprintf(buf, sizeof buf, "n=30 Eff=%.4f (>=0.95, published 0.9659) in %.0fs",
                res.efficiency, elapsed(t1));
  report("criterion 5: seven-variable exact design at n=30", ok5, buf);
}

// ------------------------------------------------------------------- 6
void criterion_6() {
  const ModelSpec m = make_preset(PresetId::Logit2Interaction, v({-3, 4, 6, 1}));
  const DesignSpace space = DesignSpace::grid(v({0, 0}), v({1, 1}), {51, 51});
  const auto cands = space.enumerate();

  ApproxSolveOptions aopts;
  aopts.eq_tolerance = 1e-7;
  aopts.max_iterations = 60000;
  aopts.prune_threshold = 5e-4;
  const auto [approx, arep] = solve_single(m, Criterion::D(), cands, aopts);
  remember("logit2(i) OAD", arep);

  int majors = 0, extras = 0;
  double extra_w = 0.0;
  for (double w : approx.weights) {
    if (w > 0.01) {
      ++majors;
    } else {
      ++extras;
      extra_w = std::max(extra_w, w);
    }
  }
  bool ok = majors == 5 && extras <= 1;

  std::string detail;
  std::snprintf(buf, sizeof buf, "majors=%d extras=%d (w<=%.4f) ", majors, extras,
                extra_w);
  detail += buf;

  const double need[] = {0.97, 0.97, 0.99};
  const int ns[] = {10, 15, 20};
  for (int k = 0; k < 3; ++k) {
    const AnnealConfig cfg = tuned(m, Criterion::D(), approx, ns[k], 1, 24, 1e-8);
    const auto res = search(m, Criterion::D(), approx, ns[k], space, cfg);
    const bool hit = res.efficiency >= need[k];
    ok = ok && hit;
    std::snprintf(buf, sizeof buf, "n=%d:%.4f(>=%.2f)%s ", ns[k], res.efficiency,
                  need[k], hit ? "" : "!");
    detail += buf;
  }
  report("criterion 6: two-variable logistic case (i) structure and efficiencies",
         ok, detail);
}

// ------------------------------------------------------------------- 7
void criterion_7() {
  Vec theta(4);
  theta << -2.2054, 13.5803, 2.2547, 1.6262;
  const ModelSpec m = make_preset(PresetId::Logit2Interaction, theta);
  const Vec lo = v({0, 0}), hi = v({2, 2});

  ApproxSolveOptions aopts;
  aopts.eq_tolerance = 1e-6;
  aopts.max_iterations = 60000;

  const int grids[] = {21, 31, 41, 51, 81};
  double losses[5];
  for (int k = 0; k < 5; ++k) {
    const auto cands = DesignSpace::grid(lo, hi, {grids[k], grids[k]}).enumerate();
    const auto [d, rep] = solve_single(m, Criterion::D(), cands, aopts);
    losses[k] = rep.loss;
    std::snprintf(buf, sizeof buf, "logit2(ii) OAD N=%d^2", grids[k]);
    remember(buf, rep);
  }

  bool ok = true;
  std::string detail = "eff vs 81^2: ";
  for (int k = 0; k < 4; ++k) {
    const double eff = losses[4] / losses[k];
    ok = ok && eff >= 0.97;
    std::snprintf(buf, sizeof buf, "N=%d^2:%.4f ", grids[k], eff);
    detail += buf;
  }
  // nested chain 21 -> 41 -> 81 cannot increase
  ok = ok && losses[2] <= losses[0] + 1e-9 && losses[4] <= losses[2] + 1e-9;
  std::snprintf(buf, sizeof buf, "| nested losses %.4f >= %.4f >= %.4f", losses[0],
                losses[2], losses[4]);
  detail += buf;
  report("criterion 7: nested-grid efficiency trend for case (ii)", ok, detail);
}

// ------------------------------------------------------------------- 8
void criterion_8() {
  // external dose-response parameters are not published; run the
  // substitute property suite on a synthetic two-objective problem
  const ModelSpec lin = make_preset(PresetId::PolyLinear, v({0, 0}));
  const ModelSpec quad = make_preset(PresetId::PolyLinear, v({0, 0, 0}));
  std::vector<Vec> cands;
  for (int i = 0; i <= 20; ++i) cands.push_back(v({-1.0 + 0.1 * i}));

  const auto [dlin, rlin] = solve_single(lin, Criterion::D(), cands);
  const auto [dquad, rquad] = solve_single(quad, Criterion::D(), cands);

  MaximinProblem prob;
  prob.objectives = {{lin, Criterion::D()}, {quad, Criterion::D()}};
  prob.reference_losses = {rlin.loss, rquad.loss};
  const auto [design, rep] = solve_maximin(prob, cands);

  auto min_eff_of = [&](const ApproximateDesign& d) {
    const double l1 = criterion_loss(Criterion::D(), info_matrix(lin, d));
    const double l2 = criterion_loss(Criterion::D(), info_matrix(quad, d));
    return std::min(rlin.loss / l1, rquad.loss / l2);
  };
  const auto unif = ApproximateDesign::make(
      cands, std::vector<double>(cands.size(), 1.0 / cands.size()));

  const double me_lin = min_eff_of(dlin), me_quad = min_eff_of(dquad),
               me_unif = min_eff_of(unif);
  const bool ok = rep.converged && rep.min_eff > me_lin && rep.min_eff > me_quad &&
                  rep.min_eff > me_unif;
  std::snprintf(buf, sizeof buf,
                "maximin min-eff=%.4f > single-objective optima (%.4f, %.4f) and "
                "uniform (%.4f)",
                rep.min_eff, me_lin, me_quad, me_unif);
  report("criterion 8: maximin dominance property suite (external parameters "
         "unpublished)",
         ok, buf);
}

// ------------------------------------------------------------------- 9
void criterion_9() {
  bool ok = !g_certified.empty();
  std::string detail;
  for (const auto& c : g_certified) {
    const bool hit =
        c.eq_residual <= c.eq_tolerance && c.support_residual <= 10 * c.eq_tolerance;
    ok = ok && hit;
    if (!hit) {
      std::snprintf(buf, sizeof buf, "%s: max_d=%.2e support=%.2e tol=%.2e; ",
                    c.name.c_str(), c.eq_residual, c.support_residual,
                    c.eq_tolerance);
      detail += buf;
    }
  }
  std::snprintf(buf, sizeof buf,
                "%zu converged solves certified (max_d <= eps, |d| <= 10 eps at "
                "support)",
                g_certified.size());
  detail += buf;
  report("criterion 9: equivalence certification of every converged solve", ok,
         detail);
}

// ------------------------------------------------------------------ 10
double enumerate_exact_optimum(const ExactLossFn& loss, const std::vector<Vec>& pts,
                               int n) {
  double best = std::numeric_limits<double>::infinity();
  std::vector<Vec> runs;
  auto rec = [&](auto&& self, std::size_t idx, int left) -> void {
    if (idx + 1 == pts.size()) {
      std::vector<Vec> full = runs;
      for (int k = 0; k < left; ++k) full.push_back(pts[idx]);
      best = std::min(best, loss(full));
      return;
    }
    for (int c = 0; c <= left; ++c) {
      self(self, idx + 1, left - c);
      runs.push_back(pts[idx]);
    }
    for (int c = 0; c <= left; ++c) runs.pop_back();
  };
  rec(rec, 0, n);
  return best;
}

void criterion_10() {
  const ModelSpec gt = group_model();
  const ModelSpec line = make_preset(PresetId::PolyLinear, v({0, 0}));
  const std::vector<Vec> gt_pts = {v({1}), v({9}), v({17}), v({33}), v({61})};
  const std::vector<Vec> ln_pts = {v({-1}), v({-0.5}), v({0}), v({0.5}), v({1})};

  struct Instance {
    ModelSpec model;
    Criterion crit;
    std::vector<Vec> pts;
  };
  std::vector<Instance> instances = {
      {gt, Criterion::D(), gt_pts},
      {gt, Criterion::c(v({1, 0, 0})), gt_pts},
      {line, Criterion::D(), ln_pts},
      {line, Criterion::c(v({0, 1})), ln_pts},
  };

  bool ok = true;
  int count = 0;
  double worst_gap = 0.0;
  for (const auto& inst : instances) {
    const auto space = DesignSpace::finite_set(inst.pts);
    const ExactLossFn loss = exact_loss_fn(inst.model, inst.crit);
    const auto ref = ApproximateDesign::make(
        inst.pts, std::vector<double>(inst.pts.size(), 1.0 / inst.pts.size()));
    for (int n : {4, 5, 6}) {
      const double oracle = enumerate_exact_optimum(loss, inst.pts, n);
      AnnealConfig cfg;
      cfg.seed = 1000 + n;
      cfg.restarts = 20;
      cfg.delta = 1e-12;
      cfg.T0 = 0.03 * criterion_loss(inst.crit,
                                     info_matrix(inst.model, round_to_exact(ref, n)));
      const auto res = search(inst.model, inst.crit, ref, n, space, cfg);
      const double gap = std::abs(res.loss - oracle);
      worst_gap = std::max(worst_gap, gap);
      ok = ok && gap <= 1e-9;
      ++count;
    }
  }
  std::snprintf(buf, sizeof buf, "%d instances, worst |annealed - enumerated| = %.2e",
                count, worst_gap);
  report("criterion 10: annealed exact losses equal the enumeration oracle", ok, buf);
}

// ------------------------------------------------------------------ 11
void criterion_11() {
  bool ok = true;
  std::string detail;

  // rounding-construction efficiencies close to 1 as n grows
  {
    const ModelSpec quad = make_preset(PresetId::PolyLinear, v({0, 0, 0}));
    const std::vector<Vec> pts = {v({-1}), v({-0.5}), v({0}), v({0.5}), v({1})};
    const auto [approx, rep] = solve_single(quad, Criterion::A(3), pts);
    std::vector<double> effs;
    for (int n : {10, 20, 40, 80, 160}) {
      const auto e = theorem1_construction(approx, n);
      effs.push_back(rep.loss /
                     criterion_loss(Criterion::A(3), info_matrix(quad, e)));
    }
    ok = ok && effs.back() >= effs.front() && effs.back() >= 0.99;
    std::snprintf(buf, sizeof buf, "A-quad effs n=10:%.4f -> n=160:%.4f; ",
                  effs.front(), effs.back());
    detail += buf;

    const ModelSpec line = make_preset(PresetId::PolyLinear, v({0, 0}));
    const auto dline = ApproximateDesign::make({v({-1}), v({1})}, {0.5, 0.5});
    const auto e160 = theorem1_construction(dline, 160);
    const double eff160 =
        1.0 / criterion_loss(Criterion::D(), info_matrix(line, e160));
    ok = ok && eff160 >= 0.99;
    std::snprintf(buf, sizeof buf, "D-line eff n=160:%.4f; ", eff160);
    detail += buf;
  }

  // nested-grid losses cannot increase (solved on refining candidate sets)
  {
    const ModelSpec m = make_preset(PresetId::Logit2Interaction, v({-3, 4, 6, 1}));
    ApproxSolveOptions aopts;
    aopts.eq_tolerance = 1e-6;
    double prev = std::numeric_limits<double>::infinity();
    for (int k : {6, 11, 21, 41}) {
      const auto cands =
          DesignSpace::grid(v({0, 0}), v({1, 1}), {k, k}).enumerate();
      const auto [d, rep] = solve_single(m, Criterion::D(), cands, aopts);
      ok = ok && rep.loss <= prev + aopts.eq_tolerance;
      prev = rep.loss;
    }
    detail += "nested 6->11->21->41 non-increasing; ";
  }

  // count conservation and membership over randomized roundings
  {
    Rng rng(20250811);
    const auto space = DesignSpace::integer_range(1, 61);
    const auto pts = space.enumerate();
    int trials = 0;
    bool all = true;
    while (trials < 10000) {
      const int msup = 1 + int(rng.index(8));
      std::vector<Vec> sup;
      std::vector<double> w(msup);
      double s = 0;
      for (int i = 0; i < msup; ++i) {
        sup.push_back(pts[rng.index(pts.size())]);
        s += (w[i] = rng.uniform() + 1e-3);
      }
      for (auto& wi : w) wi /= s;
      ApproximateDesign d;
      try {
        d = ApproximateDesign::make(sup, w);
      } catch (const std::invalid_argument&) {
        continue;  // duplicate support draw
      }
      const int n = 1 + int(rng.index(40));
      const auto e = round_to_exact(d, n);
      int total = 0;
      for (int c : e.counts) total += c;
      all = all && (total == n);
      for (const auto& x : e.points) all = all && space.contains(x);
      ++trials;
    }
    ok = ok && all;
    std::snprintf(buf, sizeof buf, "10000 randomized roundings conserve n: %s",
                  all ? "yes" : "no");
    detail += buf;
  }
  report("criterion 11: rounding-construction property suite", ok, detail);
}

// ------------------------------------------------------------------ 12
std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  if (!f) return "<missing " + p.string() + ">";
  return std::string(std::istreambuf_iterator<char>(f), {});
}

void criterion_12() {
  const fs::path base = fs::temp_directory_path() / "optdes_acceptance";
  fs::remove_all(base);
  auto config_for = [&](const std::string& sub) {
    return Json{
        {"task", "exact"},
        {"seed", 11},
        {"out", (base / sub).string()},
        {"model", {{"preset", "group_testing"}, {"theta", {0.07, 0.93, 0.96}}}},
        {"space", {{"kind", "int_range"}, {"low", 1}, {"high", 61}}},
        {"criterion", {{"kind", "c"}, {"c", {1, 0, 0}}}},
        {"n", 12},
        {"approx", {{"eq_tolerance", 1e-9}}},
        {"anneal", {{"delta", 1e-12}, {"restarts", 6}}}};
  };

  setenv("OPTDES_THREADS", "1", 1);
  const int rc1 = run(RunConfig::from_json(config_for("run1")));
  setenv("OPTDES_THREADS", "4", 1);
  const int rc2 = run(RunConfig::from_json(config_for("run2")));
  const int rc3 = run(RunConfig::from_json(config_for("run3")));
  unsetenv("OPTDES_THREADS");

  bool ok = rc1 == 0 && rc2 == 0 && rc3 == 0;
  for (const char* f : {"design.csv", "design.json", "approx_design.csv",
                        "trace_0.csv", "trace_5.csv", "restarts.csv"}) {
    const std::string a = slurp(base / "run1" / f);
    ok = ok && a == slurp(base / "run2" / f) && a == slurp(base / "run3" / f);
  }
  report("criterion 12: byte-identical artifacts across reruns and thread counts",
         ok, "3 pipeline runs (threads 1/4/4) compared on 6 files");
}

}  // namespace

int main() {
  std::printf("== acceptance suite ==\n");
  const auto t0 = std::chrono::steady_clock::now();
  criterion_1_and_2();
  criterion_3();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_10();
  criterion_11();
  criterion_12();
  criterion_4_and_5();  // the heavy ones last
  criterion_9();        // collected from every converged solve above
  std::printf("== %d failure(s), %.0fs total ==\n", g_failures, elapsed(t0));
  return g_failures;
}
