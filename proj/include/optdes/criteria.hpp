#ifndef OPTDES_CRITERIA_HPP
#define OPTDES_CRITERIA_HPP

#include <limits>
#include <utility>
#include <vector>

#include "optdes/design.hpp"
#include "optdes/model.hpp"

namespace optdes {

/// Scalar design criterion applied to the inverse information matrix.
/// D returns det(M^-1)^(1/q); TraceC returns tr(C' M^-1 C), which covers
/// A- (C = I), c- (C a single column) and I-type (general C) criteria.
struct Criterion {
  enum class Kind { D, TraceC };
  Kind kind = Kind::D;
  Mat C;  // q x r, TraceC only

  static Criterion D() { return Criterion{Kind::D, Mat()}; }
  static Criterion A(int q) {
    return Criterion{Kind::TraceC, Mat::Identity(q, q)};
  }
  static Criterion c(const Vec& c);
  static Criterion trace(const Mat& C);

  bool is_d() const { return kind == Kind::D; }
};

/// Loss value used when the information matrix is singular or nearly so;
/// annealing treats it as an automatic rejection.
inline constexpr double kSingularLoss = std::numeric_limits<double>::infinity();

Mat info_matrix(const ModelSpec& model, const ApproximateDesign& design);
Mat info_matrix(const ModelSpec& model, const ExactDesign& design);

/// Loss for a given information matrix; kSingularLoss when M is not
/// positive definite with reciprocal condition above 1e-12.
double criterion_loss(const Criterion& crit, const Mat& M);

/// Equivalence-theorem function d_phi(x, design): <= 0 everywhere
/// certifies optimality, with equality at support points.
double directional_derivative(const Criterion& crit, const ModelSpec& model,
                              const ApproximateDesign& design, const Vec& x);

/// reference_loss / loss; requires reference_loss > 0.
double efficiency(double loss, double reference_loss);

/// Loss ratio of an exact design against a grid-restricted approximate
/// optimum; can exceed 1.
double modified_efficiency(const Criterion& crit, const ModelSpec& model,
                           const ExactDesign& exact,
                           const ApproximateDesign& approx_ref);

/// min_i reference_i / loss_i over (loss, reference) pairs.
double min_efficiency(const std::vector<std::pair<double, double>>& losses_refs);

}  // namespace optdes

#endif
