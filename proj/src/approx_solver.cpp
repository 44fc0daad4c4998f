#include "optdes/approx_solver.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace optdes {

namespace {

constexpr double kAutoTolFactor = 1e-5;

Mat build_candidate_matrix(const ModelSpec& model, const std::vector<Vec>& candidates) {
  if (candidates.empty()) throw std::invalid_argument("candidate set is empty");
  Mat G(candidates.size(), model.q);
  for (std::size_t j = 0; j < candidates.size(); ++j) {
    const double lw = eval_info_weight(model, candidates[j]);
    G.row(j) = std::sqrt(lw) * eval_regressor(model, candidates[j]).transpose();
  }
  return G;
}

// deterministic ties: lowest index wins
int argmax_lowest(const Vec& v) {
  int best = 0;
  for (int j = 1; j < v.size(); ++j)
    if (v[j] > v[best]) best = j;
  return best;
}

int argmin_support(const Vec& v, const Vec& w) {
  int best = -1;
  for (int j = 0; j < v.size(); ++j) {
    if (w[j] <= 0.0) continue;
    if (best < 0 || v[j] < v[best]) best = j;
  }
  return best;
}

// minimize a unimodal function on [lo, hi]
double golden_min(double lo, double hi, const std::function<double(double)>& f) {
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < 90; ++i) {
    if (fc < fd) {
      b = d; d = c; fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

// Single-criterion state over a fixed candidate set.
class SimplexEngine {
 public:
  SimplexEngine(const Criterion& crit, Mat G)
      : crit_(crit), G_(std::move(G)), N_(static_cast<int>(G_.rows())),
        q_(static_cast<int>(G_.cols())), WG_(N_, q_) {}

  int candidates() const { return N_; }
  int q() const { return q_; }

  Mat info_of(const Vec& w) const {
    WG_ = G_;
    WG_.array().colwise() *= w.array();
    Mat M(q_, q_);
    M.noalias() = G_.transpose() * WG_;
    return M;
  }

  double loss_of(const Mat& M) const { return criterion_loss(crit_, M); }
  double loss_at(const Vec& w) const { return loss_of(info_of(w)); }

  struct Profile {
    Vec d;        // directional derivative per candidate
    Vec raw;      // D: g'M^-1 g; TraceC: ||C'M^-1 g||^2
    double loss = 0.0;
    bool singular = false;
  };

  Profile profile(const Mat& M) const {
    Profile pr;
    Eigen::LLT<Mat> llt(M);
    if (llt.info() != Eigen::Success) {
      pr.singular = true;
      return pr;
    }
    pr.loss = loss_of(M);
    if (!std::isfinite(pr.loss)) {
      pr.singular = true;
      return pr;
    }
    if (crit_.is_d()) {
      const Mat A = llt.solve(G_.transpose());  // q x N
      pr.raw = A.cwiseProduct(G_.transpose()).colwise().sum().transpose();
      pr.d = pr.raw.array() - double(q_);
    } else {
      const Mat X = llt.solve(crit_.C);  // q x r
      pr.raw = (G_ * X).rowwise().squaredNorm();
      pr.d = pr.raw.array() - pr.loss;
    }
    return pr;
  }

  // Move weight alpha toward candidate jstar; closed form for D, exact
  // 1-D search otherwise. Returns the step actually applied.
  double forward_step(Vec& w, Mat& M, const Profile& pr, int jstar) const {
    double alpha;
    const Mat A = G_.row(jstar).transpose() * G_.row(jstar);
    if (crit_.is_d()) {
      const double v = pr.raw[jstar];
      alpha = (v - q_) / (q_ * (v - 1.0));
    } else {
      alpha = golden_min(0.0, 1.0 - 1e-12, [&](double a) {
        return loss_of(((1.0 - a) * M + a * A).eval());
      });
    }
    alpha = std::clamp(alpha, 0.0, 1.0 - 1e-12);
    if (alpha <= 0.0) return 0.0;
    const Mat Mnew = (1.0 - alpha) * M + alpha * A;
    if (loss_of(Mnew) > pr.loss) return 0.0;
    w *= (1.0 - alpha);
    w[jstar] += alpha;
    M = Mnew;
    return alpha;
  }

  // Transfer weight from the worst support point toward the best
  // candidate, zeroing the source when the exchange is one-sided.
  // Returns true if a full drain happened (another pass may pay off).
  bool exchange_step(Vec& w, Mat& M, bool* moved) const {
    *moved = false;
    Eigen::LLT<Mat> llt(M);
    if (llt.info() != Eigen::Success) return false;
    const Profile pr = profile(M);
    if (pr.singular) return false;
    const int jp = argmax_lowest(pr.d);
    const int jm = argmin_support(pr.d, w);
    if (jm < 0 || jp == jm) return false;

    const Vec gp = G_.row(jp).transpose();
    const Vec gm = G_.row(jm).transpose();
    double t;
    if (crit_.is_d()) {
      const double a = gp.dot(llt.solve(gp));
      const double b = gm.dot(llt.solve(gm));
      const double c = gp.dot(llt.solve(gm));
      const double den = a * b - c * c;
      if (!(den > 1e-300)) return false;
      t = (a - b) / (2.0 * den);
    } else {
      const Mat D2 = gp * gp.transpose() - gm * gm.transpose();
      t = golden_min(0.0, w[jm], [&](double tt) {
        return loss_of((M + tt * D2).eval());
      });
      // golden search never lands on the endpoint; snap to a full drain
      // whenever that is at least as good, so support points can vanish
      const double l_full = loss_of((M + w[jm] * D2).eval());
      const double l_t = loss_of((M + t * D2).eval());
      if (l_full <= l_t * (1.0 + 1e-12)) t = w[jm];
    }
    t = std::clamp(t, 0.0, w[jm]);
    if (t <= 0.0) return false;
    const Mat Mnew = M + t * (gp * gp.transpose() - gm * gm.transpose());
    if (loss_of(Mnew) > pr.loss) return false;
    const bool drained = (t == w[jm]);
    w[jm] -= t;
    if (drained) w[jm] = 0.0;
    w[jp] += t;
    M = Mnew;
    *moved = true;
    return drained;
  }

  // D: w <- w .* (g'M^-1 g)/q; TraceC: w <- w .* sqrt(||C'M^-1 g||^2),
  // renormalized. Applied only if the loss does not increase.
  void multiplicative_pass(Vec& w, Mat& M) const {
    const Profile pr = profile(M);
    if (pr.singular) return;
    Vec wn;
    if (crit_.is_d()) {
      wn = w.cwiseProduct(pr.raw) / double(q_);
    } else {
      wn = w.cwiseProduct(pr.raw.cwiseMax(0.0).cwiseSqrt());
    }
    const double s = wn.sum();
    if (!(s > 0.0) || !std::isfinite(s)) return;
    wn /= s;
    const Mat Mnew = info_of(wn);
    if (loss_of(Mnew) <= pr.loss * (1.0 + 1e-12)) {
      w = wn;
      M = Mnew;
    }
  }

  const Mat& G() const { return G_; }

 private:
  Criterion crit_;
  Mat G_;
  int N_, q_;
  mutable Mat WG_;
};

ApproximateDesign design_from_weights(const std::vector<Vec>& candidates,
                                      const Vec& w) {
  std::vector<Vec> pts;
  std::vector<double> wt;
  double total = 0.0;
  for (int j = 0; j < w.size(); ++j)
    if (w[j] > 0.0) total += w[j];
  for (int j = 0; j < w.size(); ++j) {
    if (w[j] > 0.0) {
      pts.push_back(candidates[j]);
      wt.push_back(w[j] / total);
    }
  }
  return ApproximateDesign::make(std::move(pts), std::move(wt));
}

// Drops weights below the threshold and renormalizes. Returns true if
// anything was removed.
bool prune_weights(Vec& w, double threshold) {
  bool pruned = false;
  for (int j = 0; j < w.size(); ++j) {
    if (w[j] > 0.0 && w[j] < threshold) {
      w[j] = 0.0;
      pruned = true;
    }
  }
  if (pruned) w /= w.sum();
  return pruned;
}

}  // namespace

void ApproxSolveOptions::validate() const {
  if (prune_threshold >= 0.003)
    throw std::invalid_argument("prune_threshold must stay below 0.003");
  if (prune_threshold < 0.0)
    throw std::invalid_argument("prune_threshold must be nonnegative");
  if (max_iterations < 1)
    throw std::invalid_argument("max_iterations must be positive");
}

std::pair<ApproximateDesign, SolveReport> solve_single(
    const ModelSpec& model, const Criterion& criterion,
    const std::vector<Vec>& candidates, const ApproxSolveOptions& opts) {
  opts.validate();
  const int N = static_cast<int>(candidates.size());
  if (model.q > N)
    throw InfeasibleError("need at least q=" + std::to_string(model.q) +
                          " candidates, got " + std::to_string(N));

  SimplexEngine eng(criterion, build_candidate_matrix(model, candidates));
  Vec w = Vec::Constant(N, 1.0 / N);
  Mat M = eng.info_of(w);
  const double loss_unif = eng.loss_of(M);
  if (!std::isfinite(loss_unif))
    throw InfeasibleError(
        "uniform design on the candidates has a singular information matrix; "
        "no weighting can be invertible");

  SolveReport rep;
  rep.eq_tolerance =
      opts.eq_tolerance > 0.0 ? opts.eq_tolerance : kAutoTolFactor * loss_unif;

  int it = 0;
  bool converged = false;
  while (it < opts.max_iterations) {
    M = eng.info_of(w);
    SimplexEngine::Profile pr = eng.profile(M);
    if (pr.singular) break;  // cannot happen with guarded steps
    const int jstar = argmax_lowest(pr.d);
    if (pr.d[jstar] <= rep.eq_tolerance) {
      if (!prune_weights(w, opts.prune_threshold)) {
        converged = true;
        break;
      }
      continue;  // re-verify the pruned iterate
    }
    rep.loss_history.push_back(pr.loss);
    ++it;
    eng.forward_step(w, M, pr, jstar);
    for (int s = 0; s < 64; ++s) {
      bool moved = false;
      const bool drained = eng.exchange_step(w, M, &moved);
      if (!moved || !drained) break;
    }
    eng.multiplicative_pass(w, M);
  }
  if (!converged) prune_weights(w, opts.prune_threshold);

  ApproximateDesign design = design_from_weights(candidates, w);
  M = info_matrix(model, design);
  rep.loss = criterion_loss(criterion, M);
  rep.iterations = it;
  rep.converged = converged;

  const auto [maxd, where] = verify_equivalence(model, criterion, design, candidates);
  (void)where;
  rep.eq_residual = maxd;
  double sup = 0.0;
  for (const Vec& x : design.points)
    sup = std::max(sup, std::abs(directional_derivative(criterion, model, design, x)));
  rep.support_residual = sup;
  return {std::move(design), std::move(rep)};
}

std::pair<double, Vec> verify_equivalence(const ModelSpec& model,
                                          const Criterion& criterion,
                                          const ApproximateDesign& design,
                                          const std::vector<Vec>& candidates) {
  const std::vector<double> prof = dprofile(model, criterion, design, candidates);
  int best = 0;
  for (std::size_t j = 1; j < prof.size(); ++j)
    if (prof[j] > prof[best]) best = static_cast<int>(j);
  return {prof[best], candidates[best]};
}

std::vector<double> dprofile(const ModelSpec& model, const Criterion& criterion,
                             const ApproximateDesign& design,
                             const std::vector<Vec>& candidates) {
  if (candidates.empty()) throw std::invalid_argument("candidate set is empty");
  const Mat M = info_matrix(model, design);
  Eigen::LLT<Mat> llt(M);
  if (llt.info() != Eigen::Success || !std::isfinite(criterion_loss(criterion, M)))
    throw std::runtime_error("singular information matrix in equivalence check");
  const Mat G = build_candidate_matrix(model, candidates);
  Vec d;
  if (criterion.is_d()) {
    const Mat A = llt.solve(G.transpose());
    d = (A.cwiseProduct(G.transpose()).colwise().sum().array() - double(model.q))
            .transpose();
  } else {
    const Mat X = llt.solve(criterion.C);
    const double L = (criterion.C.transpose() * X).trace();
    d = ((G * X).rowwise().squaredNorm().array() - L).matrix();
  }
  return {d.data(), d.data() + d.size()};
}

void MaximinProblem::validate() const {
  if (objectives.size() < 2)
    throw std::invalid_argument("maximin needs at least two objectives");
  if (reference_losses.size() != objectives.size())
    throw std::invalid_argument("one reference loss per objective required");
  for (double r : reference_losses)
    if (!(r > 0.0) || !std::isfinite(r))
      throw std::invalid_argument("reference losses must be positive and finite");
}

namespace {

// Smoothed-minimax state: h_i(w) = loss_i(w)/ref_i, objective
// F_tau = tau * log sum exp(h_i/tau), an upper envelope of max h_i.
class MaximinEngine {
 public:
  MaximinEngine(const MaximinProblem& prob, const std::vector<Vec>& candidates)
      : refs_(prob.reference_losses) {
    engines_.reserve(prob.objectives.size());
    for (const auto& [model, crit] : prob.objectives)
      engines_.emplace_back(crit, build_candidate_matrix(model, candidates));
  }

  std::size_t size() const { return engines_.size(); }

  Vec losses_at(const Vec& w) const {
    Vec h(engines_.size());
    for (std::size_t i = 0; i < engines_.size(); ++i)
      h[i] = engines_[i].loss_at(w) / refs_[i];
    return h;
  }

  static double smooth_max(const Vec& h, double tau) {
    const double hmax = h.maxCoeff();
    if (!std::isfinite(hmax)) return kSingularLoss;
    double s = 0.0;
    for (int i = 0; i < h.size(); ++i) s += std::exp((h[i] - hmax) / tau);
    return hmax + tau * std::log(s);
  }

  double F_at(const Vec& w, double tau) const { return smooth_max(losses_at(w), tau); }

  // Gradient of F_tau wrt w, plus the current scaled losses.
  void gradient(const Vec& w, double tau, Vec& grad, Vec& h) const {
    h = Vec(engines_.size());
    const int N = static_cast<int>(w.size());
    grad = Vec::Zero(N);
    std::vector<SimplexEngine::Profile> prof(engines_.size());
    for (std::size_t i = 0; i < engines_.size(); ++i) {
      const Mat M = engines_[i].info_of(w);
      prof[i] = engines_[i].profile(M);
      if (prof[i].singular) {
        h[i] = kSingularLoss;
        continue;
      }
      h[i] = prof[i].loss / refs_[i];
    }
    const double hmax = h.maxCoeff();
    if (!std::isfinite(hmax)) return;  // guarded steps keep iterates regular
    double z = 0.0;
    Vec s = Vec::Zero(h.size());
    for (int i = 0; i < h.size(); ++i) {
      s[i] = std::exp((h[i] - hmax) / tau);
      z += s[i];
    }
    s /= z;
    for (std::size_t i = 0; i < engines_.size(); ++i) {
      if (s[i] <= 0.0 || prof[i].singular) continue;
      // d loss / d w_j: D scale gives -(loss/q) * raw_j, trace gives -raw_j
      if (engines_[i].is_d()) {
        grad -= (s[i] * prof[i].loss / (engines_[i].q() * refs_[i])) * prof[i].raw;
      } else {
        grad -= (s[i] / refs_[i]) * prof[i].raw;
      }
    }
  }

 private:
  struct ObjEngine : SimplexEngine {
    ObjEngine(const Criterion& c, Mat G) : SimplexEngine(c, std::move(G)), d_(c.is_d()) {}
    bool is_d() const { return d_; }
    bool d_;
  };
  std::vector<ObjEngine> engines_;
  std::vector<double> refs_;
};

}  // namespace

std::pair<ApproximateDesign, SolveReport> solve_maximin(
    const MaximinProblem& problem, const std::vector<Vec>& candidates,
    const ApproxSolveOptions& opts) {
  opts.validate();
  problem.validate();
  const int N = static_cast<int>(candidates.size());
  MaximinEngine eng(problem, candidates);

  Vec w = Vec::Constant(N, 1.0 / N);
  Vec h = eng.losses_at(w);
  for (int i = 0; i < h.size(); ++i) {
    if (!std::isfinite(h[i]))
      throw InfeasibleError("objective " + std::to_string(i) +
                            " is singular at the uniform design");
  }
  const double H0 = h.maxCoeff();

  SolveReport rep;
  rep.eq_tolerance =
      opts.eq_tolerance > 0.0 ? opts.eq_tolerance : kAutoTolFactor * H0;

  double tau = 0.1 * H0;
  const double tau_min = std::max(rep.eq_tolerance, 1e-9);
  int it = 0;
  bool converged = false;
  Vec grad;
  double gap = kSingularLoss;
  while (it < opts.max_iterations) {
    eng.gradient(w, tau, grad, h);
    int jp = 0;
    for (int j = 1; j < N; ++j)
      if (grad[j] < grad[jp]) jp = j;
    gap = w.dot(grad) - grad[jp];
    if (gap <= std::max(rep.eq_tolerance, 0.2 * tau)) {
      if (tau > tau_min) {
        tau = std::max(tau / 4.0, tau_min);
        continue;
      }
      if (!prune_weights(w, opts.prune_threshold)) {
        converged = true;
        break;
      }
      continue;
    }
    rep.loss_history.push_back(h.maxCoeff());
    ++it;
    int jm = -1;
    for (int j = 0; j < N; ++j) {
      if (w[j] <= 0.0) continue;
      if (jm < 0 || grad[j] > grad[jm]) jm = j;
    }
    const double Fcur = MaximinEngine::smooth_max(h, tau);
    // forward step
    Vec e = Vec::Zero(N);
    e[jp] = 1.0;
    const double alpha = golden_min(0.0, 1.0 - 1e-12, [&](double a) {
      return eng.F_at(((1.0 - a) * w + a * e).eval(), tau);
    });
    Vec w1 = (1.0 - alpha) * w + alpha * e;
    double F1 = eng.F_at(w1, tau);
    // pairwise transfer, preferring a full drain on near-ties so support
    // points can vanish exactly
    if (jm >= 0 && jm != jp && w[jm] > 0.0) {
      const double wjm = w[jm];
      auto F_transfer = [&](double tt) {
        Vec wv = w;
        wv[jm] -= tt;
        wv[jp] += tt;
        return eng.F_at(wv, tau);
      };
      double t = golden_min(0.0, wjm, F_transfer);
      if (F_transfer(wjm) <= F_transfer(t) * (1.0 + 1e-12)) t = wjm;
      Vec w2 = w;
      w2[jm] -= t;
      if (t == wjm) w2[jm] = 0.0;
      w2[jp] += t;
      const double F2 = eng.F_at(w2, tau);
      if (F2 < F1) {
        w1 = std::move(w2);
        F1 = F2;
      }
    }
    if (F1 <= Fcur) w = std::move(w1);
  }

  ApproximateDesign design = design_from_weights(candidates, w);
  // efficiencies on the full-precision pruned design
  Vec wfinal = Vec::Zero(N);
  {
    // re-evaluate through the engine on the pruned weights
    double tot = 0.0;
    for (int j = 0; j < N; ++j) tot += (w[j] > 0.0 ? w[j] : 0.0);
    for (int j = 0; j < N; ++j) wfinal[j] = w[j] > 0.0 ? w[j] / tot : 0.0;
  }
  h = eng.losses_at(wfinal);
  rep.objective_efficiencies.resize(h.size());
  for (int i = 0; i < h.size(); ++i) rep.objective_efficiencies[i] = 1.0 / h[i];
  rep.min_eff = 1.0 / h.maxCoeff();
  rep.loss = -rep.min_eff;
  rep.eq_residual = gap;
  rep.support_residual = gap;
  rep.iterations = it;
  rep.converged = converged;
  return {std::move(design), std::move(rep)};
}

}  // namespace optdes
