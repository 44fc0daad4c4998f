#ifndef OPTDES_EXACT_SOLVER_HPP
#define OPTDES_EXACT_SOLVER_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "optdes/approx_solver.hpp"
#include "optdes/criteria.hpp"
#include "optdes/design.hpp"
#include "optdes/design_space.hpp"
#include "optdes/rng.hpp"

namespace optdes {

struct AnnealConfig {
  double T0 = 0.0;     // <= 0: 0.1 x |loss of the initial rounded design|
  double T_min = 0.0;  // <= 0: 1e-6 x T0
  double alpha = 0.9;  // cooling factor in (0,1)
  int K = 0;           // iterations per temperature; <= 0: 50 x n
  double delta = 1e-5; // tolerance on successive accepted losses
  int restarts = 10;   // independent annealing runs
  std::uint64_t seed = 0;

  void validate() const;
  double resolve_T0(double init_loss) const;
  double resolve_T_min(double t0) const;
  int resolve_K(int n) const;
};

struct AnnealTrace {
  struct Record {
    std::int64_t iteration;
    double temperature;
    double proposed_loss;
    bool accepted;
    double best_loss;
  };
  std::vector<Record> records;
};

/// Loss of an exact design given as a flat list of its n run locations.
using ExactLossFn = std::function<double(const std::vector<Vec>&)>;

/// Loss function for (model, criterion); the singular sentinel makes the
/// annealer reject proposals that break invertibility.
ExactLossFn exact_loss_fn(const ModelSpec& model, const Criterion& criterion);

/// Negated minimum efficiency over the objectives, the annealed quantity
/// for maximin exact search.
ExactLossFn maximin_exact_loss_fn(const MaximinProblem& problem);

/// Integer run counts from weights: floor everything, hand the shortfall
/// to the largest fractional parts (ties to the lowest index), drop
/// zero-count points. When the support exceeds n, the n heaviest points
/// get one run each.
ExactDesign round_to_exact(const ApproximateDesign& approx, int n);

/// Floor/ceiling apportionment on the full support; requires n*w_i >= 1
/// for every support point (throws std::invalid_argument otherwise).
ExactDesign theorem1_construction(const ApproximateDesign& approx, int n);

/// One simulated-annealing run: random single-run moves via the space's
/// neighbor kernel, Metropolis acceptance exp(-dPhi/T) > u, geometric
/// cooling every K iterations, stop at T_min or when two successive
/// accepted losses agree to delta (honored only once a full temperature
/// level has elapsed). Returns the last accepted design and the trace.
std::pair<ExactDesign, AnnealTrace> anneal_once(const ExactLossFn& loss,
                                                const ExactDesign& init,
                                                const DesignSpace& space,
                                                const AnnealConfig& cfg,
                                                Rng& rng);

struct RestartReport {
  int restart = 0;
  double final_loss = 0.0;
  double efficiency = 0.0;  // modified efficiency (min-efficiency for maximin)
  std::int64_t iterations = 0;
  std::int64_t accepted = 0;
  bool ok = true;
  std::string message;
};

struct SearchResult {
  ExactDesign design;
  double loss = 0.0;
  double efficiency = 0.0;
  int chosen_restart = 0;
  std::vector<RestartReport> restart_reports;
  std::vector<AnnealTrace> traces;  // one per restart
};

/// Full exact-design search: round the approximate reference to n runs,
/// anneal M times with streams split from (seed, restart), keep the
/// restart with the highest modified efficiency (ties to the lowest
/// index). Restarts run on worker threads without affecting results.
SearchResult search(const ModelSpec& model, const Criterion& criterion,
                    const ApproximateDesign& approx_ref, int n,
                    const DesignSpace& space, const AnnealConfig& cfg);

/// Maximin variant: anneals -min_i Eff_i with the problem's reference
/// losses; efficiency reported is the achieved minimum efficiency.
SearchResult search_maximin(const MaximinProblem& problem,
                            const ApproximateDesign& approx_ref, int n,
                            const DesignSpace& space, const AnnealConfig& cfg);

/// Worker threads used for restart parallelism; reads OPTDES_THREADS,
/// defaulting to the hardware concurrency.
int worker_threads();

}  // namespace optdes

#endif
