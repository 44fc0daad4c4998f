#include "doctest.h"

#include <cmath>

#include "optdes/approx_solver.hpp"
#include "optdes/rng.hpp"

using namespace optdes;

namespace {

Vec v(std::initializer_list<double> xs) {
  Vec out(static_cast<int>(xs.size()));
  int i = 0;
  for (double x : xs) out[i++] = x;
  return out;
}

ModelSpec line_model() { return make_preset(PresetId::PolyLinear, v({0, 0})); }

ModelSpec group_model() {
  return make_preset(PresetId::GroupTesting, v({0.07, 0.93, 0.96}));
}

std::vector<Vec> int_candidates(int lo, int hi) {
  return DesignSpace::integer_range(lo, hi).enumerate();
}

double weight_at(const ApproximateDesign& d, const Vec& x, double tol = 1e-9) {
  for (std::size_t i = 0; i < d.points.size(); ++i)
    if ((d.points[i] - x).norm() <= tol) return d.weights[i];
  return 0.0;
}

}  // namespace

TEST_CASE("classical two-point D-optimum for a line") {
  const auto [design, rep] =
      solve_single(line_model(), Criterion::D(), {v({-1}), v({0}), v({1})});
  CHECK(rep.converged);
  CHECK(rep.loss == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(design.size() == 2);
  CHECK(weight_at(design, v({-1})) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(weight_at(design, v({1})) == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("group-testing D design on the integer range") {
  const auto [design, rep] =
      solve_single(group_model(), Criterion::D(), int_candidates(1, 61));
  CHECK(rep.converged);
  CHECK(design.size() == 3);
  CHECK(weight_at(design, v({1})) == doctest::Approx(1.0 / 3).epsilon(1e-6));
  CHECK(weight_at(design, v({17})) == doctest::Approx(1.0 / 3).epsilon(1e-6));
  CHECK(weight_at(design, v({61})) == doctest::Approx(1.0 / 3).epsilon(1e-6));
  CHECK(rep.loss == doctest::Approx(0.14483496).epsilon(1e-7));
}

TEST_CASE("group-testing c design on the integer range") {
  ApproxSolveOptions opts;
  opts.eq_tolerance = 1e-9;  // resolves the 15/16 near-tie to the vertex solution
  const auto [design, rep] = solve_single(group_model(), Criterion::c(v({1, 0, 0})),
                                          int_candidates(1, 61), opts);
  CHECK(rep.converged);
  CHECK(design.size() == 3);
  CHECK(weight_at(design, v({1})) == doctest::Approx(0.1310).epsilon(2e-3));
  CHECK(weight_at(design, v({16})) == doctest::Approx(0.6279).epsilon(2e-3));
  CHECK(weight_at(design, v({61})) == doctest::Approx(0.2411).epsilon(2e-3));
  CHECK(rep.loss == doctest::Approx(0.0354).epsilon(2e-3));
}

TEST_CASE("solver output stays on the simplex with monotone loss history") {
  const auto models = std::vector<std::pair<ModelSpec, Criterion>>{
      {group_model(), Criterion::D()},
      {group_model(), Criterion::c(v({1, 0, 0}))},
      {group_model(), Criterion::A(3)},
      {line_model(), Criterion::D()},
  };
  for (const auto& [model, crit] : models) {
    const auto cands =
        model.name == "poly_linear" ? int_candidates(-1, 1) : int_candidates(1, 61);
    const auto [design, rep] = solve_single(model, crit, cands);
    double sum = 0.0;
    for (double w : design.weights) {
      CHECK(w >= 0.0);
      sum += w;
    }
    CHECK(std::abs(sum - 1.0) < 1e-10);
    for (std::size_t k = 1; k < rep.loss_history.size(); ++k)
      CHECK(rep.loss_history[k] <= rep.loss_history[k - 1] * (1 + 1e-12));
  }
}

TEST_CASE("verify_equivalence on known designs") {
  const ModelSpec m = line_model();
  const auto cands = int_candidates(-1, 1);

  const auto opt = ApproximateDesign::make({v({-1}), v({1})}, {0.5, 0.5});
  const auto [maxd_opt, where_opt] = verify_equivalence(m, Criterion::D(), opt, cands);
  CHECK(maxd_opt == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(std::abs(where_opt[0]) == doctest::Approx(1.0));

  // uniform design on {-1,0,1}: M = diag(1, 2/3), d(+-1) = 1 + 3/2 - 2
  const auto unif =
      ApproximateDesign::make({v({-1}), v({0}), v({1})}, {1. / 3, 1. / 3, 1. / 3});
  const auto [maxd_unif, where_unif] =
      verify_equivalence(m, Criterion::D(), unif, cands);
  CHECK(maxd_unif == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::abs(where_unif[0]) == doctest::Approx(1.0));

  // the solved group-testing optimum certifies on its candidate set
  const auto [gd, grep] =
      solve_single(group_model(), Criterion::D(), int_candidates(1, 61));
  const auto [maxd, where] =
      verify_equivalence(group_model(), Criterion::D(), gd, int_candidates(1, 61));
  CHECK(maxd <= grep.eq_tolerance);
}

TEST_CASE("equivalence equality holds at support points of converged optima") {
  const auto [design, rep] =
      solve_single(group_model(), Criterion::D(), int_candidates(1, 61));
  REQUIRE(rep.converged);
  for (const auto& x : design.points) {
    const double d = directional_derivative(Criterion::D(), group_model(), design, x);
    CHECK(std::abs(d) <= 10 * rep.eq_tolerance);
  }
  CHECK(rep.support_residual <= 10 * rep.eq_tolerance);
}

TEST_CASE("dprofile matches pointwise directional derivatives") {
  const auto cands = int_candidates(1, 61);
  const auto [design, rep] = solve_single(group_model(), Criterion::D(), cands);
  const auto prof = dprofile(group_model(), Criterion::D(), design, cands);
  REQUIRE(prof.size() == cands.size());
  Rng rng(4);
  for (int k = 0; k < 12; ++k) {
    const std::size_t j = rng.index(cands.size());
    CHECK(prof[j] == doctest::Approx(directional_derivative(
                         Criterion::D(), group_model(), design, cands[j]))
                         .epsilon(1e-9));
  }
}

TEST_CASE("nested candidate sets cannot worsen the solved loss") {
  // refining the grid keeps every coarse candidate available
  const ModelSpec m = make_preset(PresetId::Logit2Interaction, v({-3, 4, 6, 1}));
  ApproxSolveOptions opts;
  opts.eq_tolerance = 1e-6;
  const Vec lo = v({0, 0}), hi = v({1, 1});
  double prev = kSingularLoss;
  for (int k : {6, 11, 21}) {
    const auto cands = DesignSpace::grid(lo, hi, {k, k}).enumerate();
    const auto [design, rep] = solve_single(m, Criterion::D(), cands, opts);
    CHECK(rep.loss <= prev + opts.eq_tolerance);
    prev = rep.loss;
  }
}

TEST_CASE("D duality bound: efficiency at least q/(q+max_d)") {
  const ModelSpec m = group_model();
  const auto cands = int_candidates(1, 61);
  ApproxSolveOptions tight;
  tight.eq_tolerance = 1e-10;
  const auto [opt, orep] = solve_single(m, Criterion::D(), cands, tight);

  // a crude design with a large gap still satisfies the certified bound
  const auto unif = ApproximateDesign::make(
      cands, std::vector<double>(cands.size(), 1.0 / cands.size()));
  const auto [maxd, where] = verify_equivalence(m, Criterion::D(), unif, cands);
  const double eff =
      orep.loss / criterion_loss(Criterion::D(), info_matrix(m, unif));
  const double q = 3.0;
  CHECK(eff >= q / (q + maxd) - 1e-9);

  // and the converged run certifies essentially unit efficiency
  CHECK(orep.eq_residual <= tight.eq_tolerance);
  CHECK(q / (q + orep.eq_residual) <= 1.0);
}

TEST_CASE("infeasible candidate sets are reported explicitly") {
  // two candidates cannot span a 3-parameter model
  CHECK_THROWS_AS(solve_single(group_model(), Criterion::D(), {v({1}), v({2})}),
                  InfeasibleError);
  // a single repeated direction keeps the uniform matrix singular
  const ModelSpec quad = make_preset(PresetId::PolyLinear, v({0, 0, 0}));
  CHECK_THROWS_AS(
      solve_single(quad, Criterion::D(), {v({1}), v({1 + 1e-15}), v({1 - 1e-15})}),
      InfeasibleError);
}

TEST_CASE("options are validated") {
  ApproxSolveOptions bad;
  bad.prune_threshold = 0.003;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad.prune_threshold = 0.01;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  ApproxSolveOptions ok;
  ok.prune_threshold = 0.0029;
  CHECK_NOTHROW(ok.validate());
}

TEST_CASE("maximin with a duplicated objective collapses to the single solve") {
  const ModelSpec m = group_model();
  const auto cands = int_candidates(1, 61);
  const auto [single, srep] = solve_single(m, Criterion::D(), cands);

  MaximinProblem prob;
  prob.objectives = {{m, Criterion::D()}, {m, Criterion::D()}};
  prob.reference_losses = {srep.loss, srep.loss};
  const auto [design, rep] = solve_maximin(prob, cands);
  CHECK(rep.min_eff == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(criterion_loss(Criterion::D(), info_matrix(m, design)) ==
        doctest::Approx(srep.loss).epsilon(1e-4));
}

TEST_CASE("maximin dominates single-objective optima and the uniform design") {
  // two-objective problem: line and quadratic fits on the same grid
  const ModelSpec lin = line_model();
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

  CHECK(rep.min_eff == doctest::Approx(min_eff_of(design)).epsilon(1e-9));
  CHECK(rep.min_eff > min_eff_of(dquad));
  CHECK(rep.min_eff > min_eff_of(unif));
  // the line-only optimum is singular for the quadratic: its min-eff is 0
  CHECK(rep.min_eff > 0.5);
  REQUIRE(rep.objective_efficiencies.size() == 2);
  CHECK(std::min(rep.objective_efficiencies[0], rep.objective_efficiencies[1]) ==
        doctest::Approx(rep.min_eff).epsilon(1e-12));
}

TEST_CASE("maximin validates its problem statement") {
  MaximinProblem p;
  p.objectives = {{line_model(), Criterion::D()}};
  p.reference_losses = {1.0};
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.objectives.push_back({line_model(), Criterion::A(2)});
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);  // ref count mismatch
  p.reference_losses = {1.0, -1.0};
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}
