#ifndef OPTDES_APPROX_SOLVER_HPP
#define OPTDES_APPROX_SOLVER_HPP

#include <stdexcept>
#include <utility>
#include <vector>

#include "optdes/criteria.hpp"
#include "optdes/design.hpp"
#include "optdes/design_space.hpp"

namespace optdes {

struct ApproxSolveOptions {
  /// Stopping threshold on the maximum directional derivative over the
  /// candidate set. Non-positive means automatic: 1e-5 times the
  /// criterion loss of the uniform design on the candidates.
  double eq_tolerance = 0.0;
  int max_iterations = 20000;
  /// Weights below this are dropped and the rest renormalized. Must stay
  /// below 3e-3 so genuine small-weight support survives.
  double prune_threshold = 1e-4;

  void validate() const;
};

struct SolveReport {
  double loss = 0.0;
  double eq_residual = 0.0;       // max d over all candidates at the solution
  double support_residual = 0.0;  // max |d| over the support
  double eq_tolerance = 0.0;      // resolved threshold actually used
  int iterations = 0;
  bool converged = false;
  std::vector<double> loss_history;  // one entry per outer iteration

  // maximin only
  double min_eff = 0.0;
  std::vector<double> objective_efficiencies;
};

/// Raised when no candidate weighting yields an invertible information
/// matrix (q > N, or the candidates do not span enough directions).
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Minimizes the criterion over the weight simplex on the candidate set.
/// Vertex-direction iterations (weight moved toward the candidate with the
/// largest directional derivative, plus a draining exchange against the
/// worst support point) with exact line search, and a multiplicative
/// acceleration pass for the D-criterion. Stops once the equivalence
/// condition holds to eq_tolerance; non-convergence within max_iterations
/// returns the best iterate with converged=false.
std::pair<ApproximateDesign, SolveReport> solve_single(
    const ModelSpec& model, const Criterion& criterion,
    const std::vector<Vec>& candidates, const ApproxSolveOptions& opts = {});

/// Maximum directional derivative over the candidates and where it occurs.
std::pair<double, Vec> verify_equivalence(const ModelSpec& model,
                                          const Criterion& criterion,
                                          const ApproximateDesign& design,
                                          const std::vector<Vec>& candidates);

/// d_phi(u_j) for every candidate, in candidate order.
std::vector<double> dprofile(const ModelSpec& model, const Criterion& criterion,
                             const ApproximateDesign& design,
                             const std::vector<Vec>& candidates);

struct MaximinProblem {
  std::vector<std::pair<ModelSpec, Criterion>> objectives;
  std::vector<double> reference_losses;  // per-objective optimal losses

  void validate() const;
};

/// Maximizes the minimum per-objective efficiency over the simplex, by
/// minimizing the largest reference-scaled loss through a log-sum-exp
/// smoothing with decreasing temperature, driven by the same
/// vertex-direction engine. The report carries the achieved minimum
/// efficiency and all per-objective efficiencies; eq_residual is the
/// final smoothed-objective gap.
std::pair<ApproximateDesign, SolveReport> solve_maximin(
    const MaximinProblem& problem, const std::vector<Vec>& candidates,
    const ApproxSolveOptions& opts = {});

}  // namespace optdes

#endif
