#include "optdes/exact_solver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace optdes {

void AnnealConfig::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("cooling factor alpha must lie in (0,1)");
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  if (restarts < 1) throw std::invalid_argument("need at least one restart");
  if (T0 > 0.0 && T_min > 0.0 && !(T_min < T0))
    throw std::invalid_argument("T_min must be below T0");
}

double AnnealConfig::resolve_T0(double init_loss) const {
  if (T0 > 0.0) return T0;
  const double base = std::abs(init_loss);
  return 0.1 * (base > 0.0 ? base : 1.0);
}

double AnnealConfig::resolve_T_min(double t0) const {
  return T_min > 0.0 ? T_min : 1e-6 * t0;
}

int AnnealConfig::resolve_K(int n) const { return K > 0 ? K : 50 * n; }

ExactLossFn exact_loss_fn(const ModelSpec& model, const Criterion& criterion) {
  return [model, criterion](const std::vector<Vec>& runs) {
    Mat M = Mat::Zero(model.q, model.q);
    for (const Vec& x : runs) {
      const Vec f = model.regressor(x);
      M.selfadjointView<Eigen::Lower>().rankUpdate(f, model.info_weight(x));
    }
    M.triangularView<Eigen::StrictlyUpper>() = M.transpose();
    M /= static_cast<double>(runs.size());
    return criterion_loss(criterion, M);
  };
}

ExactLossFn maximin_exact_loss_fn(const MaximinProblem& problem) {
  problem.validate();
  return [problem](const std::vector<Vec>& runs) {
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < problem.objectives.size(); ++i) {
      const auto& [model, crit] = problem.objectives[i];
      const double loss = exact_loss_fn(model, crit)(runs);
      if (!std::isfinite(loss)) return kSingularLoss;
      worst = std::min(worst, problem.reference_losses[i] / loss);
    }
    return -worst;
  };
}

namespace {

std::vector<int> largest_remainder(const std::vector<double>& weights, int n) {
  const std::size_t m = weights.size();
  std::vector<int> counts(m);
  std::vector<double> frac(m);
  int assigned = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double a = weights[i] * n;
    counts[i] = static_cast<int>(std::floor(a));
    frac[i] = a - counts[i];
    assigned += counts[i];
  }
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return frac[a] > frac[b]; });
  for (int k = 0; k < n - assigned; ++k) counts[order[k]] += 1;
  return counts;
}

}  // namespace

ExactDesign round_to_exact(const ApproximateDesign& approx, int n) {
  if (n < 1) throw std::invalid_argument("run count n must be >= 1");
  const std::size_t m = approx.size();

  if (static_cast<int>(m) > n) {
    // more support points than runs: one run at each of the n heaviest
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return approx.weights[a] > approx.weights[b];
    });
    std::vector<Vec> pts;
    std::vector<int> cnt;
    for (int k = 0; k < n; ++k) {
      pts.push_back(approx.points[order[k]]);
      cnt.push_back(1);
    }
    return ExactDesign::make(std::move(pts), std::move(cnt));
  }

  const std::vector<int> counts = largest_remainder(approx.weights, n);
  std::vector<Vec> pts;
  std::vector<int> cnt;
  for (std::size_t i = 0; i < m; ++i) {
    if (counts[i] > 0) {
      pts.push_back(approx.points[i]);
      cnt.push_back(counts[i]);
    }
  }
  return ExactDesign::make(std::move(pts), std::move(cnt));
}

ExactDesign theorem1_construction(const ApproximateDesign& approx, int n) {
  if (n < 1) throw std::invalid_argument("run count n must be >= 1");
  for (double w : approx.weights) {
    if (w * n < 1.0)
      throw std::invalid_argument(
          "theorem1_construction requires n*w >= 1 at every support point; "
          "use the annealing search for small n");
  }
  const std::vector<int> counts = largest_remainder(approx.weights, n);
  return ExactDesign::make(approx.points, counts);
}

std::pair<ExactDesign, AnnealTrace> anneal_once(const ExactLossFn& loss,
                                                const ExactDesign& init,
                                                const DesignSpace& space,
                                                const AnnealConfig& cfg,
                                                Rng& rng) {
  cfg.validate();
  std::vector<Vec> runs = init.runs();
  const int n = init.n;
  for (const Vec& x : runs)
    if (!space.contains(x))
      throw std::invalid_argument("initial design point outside the design space");

  double cur = loss(runs);
  if (!std::isfinite(cur))
    throw std::runtime_error(
        "initial design has a singular information matrix; restart aborted");

  const double t0 = cfg.resolve_T0(cur);
  const double t_min = cfg.resolve_T_min(t0);
  const int K = cfg.resolve_K(n);

  AnnealTrace trace;
  double best = cur;
  double l1 = 1.0, l2 = 0.0;  // successive accepted losses
  double T = t0;
  std::int64_t t = 1;
  int level = 0;
  bool stop = false;

  Vec scale;
  if (space.kind() != DesignSpace::Kind::FiniteSet) {
    scale = space.high() - space.low();
  }

  while (T > t_min && !stop) {
    Vec step_scale;
    if (scale.size() > 0)
      step_scale = scale * std::max(0.05 * T / t0, 0.005);
    for (int k = 0; k < K; ++k) {
      if (level >= 1 && std::abs(l2 - l1) <= cfg.delta) {
        stop = true;
        break;
      }
      const std::size_t i = rng.index(runs.size());
      const Vec old = runs[i];
      runs[i] = space.propose_neighbor(old, step_scale, rng);
      if ((runs[i] - old).norm() == 0.0) {
        // clipping can park the proposal exactly on the current point;
        // nothing moved, so the accepted-loss pair stays untouched
        trace.records.push_back({t, T, cur, true, best});
        continue;
      }
      const double proposed = loss(runs);
      const bool accepted = std::exp(-(proposed - cur) / T) > rng.uniform();
      if (accepted) {
        // exact ties happen structurally (permuted run counts share one
        // loss); a lateral move carries no convergence signal, so it
        // leaves the accepted-loss pair alone
        if (std::abs(proposed - cur) > 1e-14 * std::max(std::abs(cur), 1.0)) {
          l1 = cur;
          l2 = proposed;
        }
        cur = proposed;
        ++t;
        if (cur < best) best = cur;
      } else {
        runs[i] = old;
      }
      trace.records.push_back({t, T, proposed, accepted, best});
    }
    T *= cfg.alpha;
    ++level;
  }
  return {ExactDesign::from_runs(runs), std::move(trace)};
}

int worker_threads() {
  if (const char* env = std::getenv("OPTDES_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<int>(v);
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

namespace {

// Shared restart driver. eff_of maps a final loss to the efficiency used
// for selecting the winner (higher is better, ties to the lowest index).
SearchResult run_restarts(const ExactLossFn& loss, const ExactDesign& init,
                          const DesignSpace& space, const AnnealConfig& cfg,
                          const std::function<double(double)>& eff_of) {
  const int M = cfg.restarts;
  std::vector<std::optional<std::pair<ExactDesign, AnnealTrace>>> outs(M);
  std::vector<RestartReport> reports(M);

  const int threads = std::min(worker_threads(), M);
  std::atomic<int> next{0};
  auto work = [&]() {
    for (;;) {
      const int j = next.fetch_add(1);
      if (j >= M) break;
      Rng rng = Rng::for_stream(cfg.seed, static_cast<std::uint64_t>(j));
      RestartReport rr;
      rr.restart = j;
      try {
        auto out = anneal_once(loss, init, space, cfg, rng);
        rr.final_loss = loss(out.first.runs());
        rr.efficiency = eff_of(rr.final_loss);
        rr.iterations = static_cast<std::int64_t>(out.second.records.size());
        for (const auto& rec : out.second.records) rr.accepted += rec.accepted;
        outs[j] = std::move(out);
      } catch (const std::exception& e) {
        rr.ok = false;
        rr.message = e.what();
      }
      reports[j] = std::move(rr);
    }
  };
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  int winner = -1;
  for (int j = 0; j < M; ++j) {
    if (!reports[j].ok) continue;
    if (winner < 0 || reports[j].efficiency > reports[winner].efficiency) winner = j;
  }
  if (winner < 0) {
    std::string detail;
    for (const auto& rr : reports)
      detail += "\n  restart " + std::to_string(rr.restart) + ": " + rr.message;
    throw std::runtime_error("all annealing restarts failed:" + detail);
  }

  SearchResult res;
  res.design = std::move(outs[winner]->first);
  res.loss = reports[winner].final_loss;
  res.efficiency = reports[winner].efficiency;
  res.chosen_restart = winner;
  res.restart_reports = std::move(reports);
  res.traces.reserve(M);
  for (int j = 0; j < M; ++j) {
    if (outs[j])
      res.traces.push_back(std::move(outs[j]->second));
    else
      res.traces.emplace_back();
  }
  return res;
}

}  // namespace

SearchResult search(const ModelSpec& model, const Criterion& criterion,
                    const ApproximateDesign& approx_ref, int n,
                    const DesignSpace& space, const AnnealConfig& cfg) {
  const double ref_loss = criterion_loss(criterion, info_matrix(model, approx_ref));
  if (!std::isfinite(ref_loss))
    throw std::runtime_error("approximate reference design is singular");
  const ExactDesign init = round_to_exact(approx_ref, n);
  const ExactLossFn loss = exact_loss_fn(model, criterion);
  return run_restarts(loss, init, space, cfg,
                      [ref_loss](double l) { return ref_loss / l; });
}

SearchResult search_maximin(const MaximinProblem& problem,
                            const ApproximateDesign& approx_ref, int n,
                            const DesignSpace& space, const AnnealConfig& cfg) {
  const ExactDesign init = round_to_exact(approx_ref, n);
  const ExactLossFn loss = maximin_exact_loss_fn(problem);
  // annealed objective is -min_eff, so the efficiency is its negation
  return run_restarts(loss, init, space, cfg, [](double l) { return -l; });
}

}  // namespace optdes
