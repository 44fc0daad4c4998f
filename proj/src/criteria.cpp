#include "optdes/criteria.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <stdexcept>

namespace optdes {

namespace {
constexpr double kRcondGuard = 1e-12;

// Cholesky of M with a cheap reciprocal-condition proxy on the factor
// diagonal. Returns false when M should be treated as singular.
bool factor(const Mat& M, Eigen::LLT<Mat>& llt) {
  llt.compute(M);
  if (llt.info() != Eigen::Success) return false;
  const auto d = llt.matrixLLT().diagonal();
  const double lo = d.minCoeff(), hi = d.maxCoeff();
  if (!(lo > 0.0) || !std::isfinite(hi)) return false;
  const double r = (lo / hi) * (lo / hi);
  return r >= kRcondGuard;
}
}  // namespace

Criterion Criterion::c(const Vec& cvec) {
  if (cvec.size() == 0) throw std::invalid_argument("c vector must be nonempty");
  Mat C(cvec.size(), 1);
  C.col(0) = cvec;
  return Criterion{Kind::TraceC, C};
}

Criterion Criterion::trace(const Mat& C) {
  if (C.rows() == 0 || C.cols() == 0 || C.cols() > C.rows())
    throw std::invalid_argument("C must be q x r with 1 <= r <= q");
  return Criterion{Kind::TraceC, C};
}

Mat info_matrix(const ModelSpec& model, const ApproximateDesign& design) {
  Mat M = Mat::Zero(model.q, model.q);
  for (std::size_t i = 0; i < design.points.size(); ++i) {
    const Vec f = eval_regressor(model, design.points[i]);
    const double lw = eval_info_weight(model, design.points[i]);
    M.selfadjointView<Eigen::Lower>().rankUpdate(f, design.weights[i] * lw);
  }
  M.triangularView<Eigen::StrictlyUpper>() = M.transpose();
  return M;
}

Mat info_matrix(const ModelSpec& model, const ExactDesign& design) {
  return info_matrix(model, design.as_approximate());
}

double criterion_loss(const Criterion& crit, const Mat& M) {
  if (M.rows() != M.cols()) throw std::invalid_argument("M must be square");
  Eigen::LLT<Mat> llt;
  if (!factor(M, llt)) return kSingularLoss;
  if (crit.is_d()) {
    // det(M^-1)^(1/q) = exp(-logdet(M)/q), logdet from the factor diagonal
    const double q = static_cast<double>(M.rows());
    double logdet = 0.0;
    for (int i = 0; i < M.rows(); ++i)
      logdet += 2.0 * std::log(llt.matrixLLT()(i, i));
    return std::exp(-logdet / q);
  }
  if (crit.C.rows() != M.rows())
    throw std::invalid_argument("criterion matrix C has wrong row count");
  const Mat X = llt.solve(crit.C);  // M^-1 C
  return (crit.C.transpose() * X).trace();
}

double directional_derivative(const Criterion& crit, const ModelSpec& model,
                              const ApproximateDesign& design, const Vec& x) {
  const Mat M = info_matrix(model, design);
  Eigen::LLT<Mat> llt;
  if (!factor(M, llt))
    throw std::runtime_error("singular information matrix in directional derivative");
  const Vec g = std::sqrt(eval_info_weight(model, x)) * eval_regressor(model, x);
  if (crit.is_d()) return g.dot(llt.solve(g)) - static_cast<double>(model.q);
  const Vec h = crit.C.transpose() * llt.solve(g);  // C' M^-1 g
  const Mat X = llt.solve(crit.C);
  return h.squaredNorm() - (crit.C.transpose() * X).trace();
}

double efficiency(double loss, double reference_loss) {
  if (!(reference_loss > 0.0))
    throw std::invalid_argument("reference loss must be positive");
  return reference_loss / loss;
}

double modified_efficiency(const Criterion& crit, const ModelSpec& model,
                           const ExactDesign& exact,
                           const ApproximateDesign& approx_ref) {
  const double ref = criterion_loss(crit, info_matrix(model, approx_ref));
  const double val = criterion_loss(crit, info_matrix(model, exact));
  if (!std::isfinite(ref) || !std::isfinite(val))
    throw std::runtime_error("singular information matrix in modified efficiency");
  return ref / val;
}

double min_efficiency(const std::vector<std::pair<double, double>>& losses_refs) {
  if (losses_refs.empty())
    throw std::invalid_argument("min_efficiency needs at least one pair");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& [loss, ref] : losses_refs) {
    if (!(ref > 0.0)) throw std::invalid_argument("reference loss must be positive");
    best = std::min(best, ref / loss);
  }
  return best;
}

}  // namespace optdes
