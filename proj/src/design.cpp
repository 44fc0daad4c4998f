#include "optdes/design.hpp"

#include <cmath>
#include <stdexcept>

namespace optdes {

namespace {
constexpr double kMergeDistance = 1e-9;
constexpr double kWeightSumTol = 1e-10;

bool same_point(const Vec& a, const Vec& b) {
  return a.size() == b.size() && (a - b).norm() <= kMergeDistance;
}
}  // namespace

ApproximateDesign ApproximateDesign::make(std::vector<Vec> points,
                                          std::vector<double> weights) {
  if (points.size() != weights.size())
    throw std::invalid_argument("points and weights differ in length");
  if (points.empty()) throw std::invalid_argument("design must be nonempty");

  ApproximateDesign d;
  double total = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double w = weights[i];
    if (!(w >= 0.0) || !std::isfinite(w))
      throw std::invalid_argument("design weight must be finite and >= 0");
    total += w;
    if (w == 0.0) continue;
    bool merged = false;
    for (std::size_t k = 0; k < d.points.size(); ++k) {
      if (same_point(d.points[k], points[i])) {
        d.weights[k] += w;
        merged = true;
        break;
      }
    }
    if (!merged) {
      d.points.push_back(std::move(points[i]));
      d.weights.push_back(w);
    }
  }
  if (std::abs(total - 1.0) > kWeightSumTol)
    throw std::invalid_argument("design weights sum to " + std::to_string(total) +
                                ", expected 1");
  if (d.points.empty()) throw std::invalid_argument("design has no support");
  return d;
}

ExactDesign ExactDesign::make(std::vector<Vec> points, std::vector<int> counts) {
  if (points.size() != counts.size())
    throw std::invalid_argument("points and counts differ in length");
  if (points.empty()) throw std::invalid_argument("design must be nonempty");

  ExactDesign d;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (counts[i] < 1) throw std::invalid_argument("run counts must be >= 1");
    bool merged = false;
    for (std::size_t k = 0; k < d.points.size(); ++k) {
      if (same_point(d.points[k], points[i])) {
        d.counts[k] += counts[i];
        merged = true;
        break;
      }
    }
    if (!merged) {
      d.points.push_back(std::move(points[i]));
      d.counts.push_back(counts[i]);
    }
    d.n += counts[i];
  }
  return d;
}

ApproximateDesign ExactDesign::as_approximate() const {
  std::vector<double> w(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i)
    w[i] = static_cast<double>(counts[i]) / static_cast<double>(n);
  return ApproximateDesign::make(points, w);
}

std::vector<Vec> ExactDesign::runs() const {
  std::vector<Vec> out;
  out.reserve(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < points.size(); ++i)
    for (int k = 0; k < counts[i]; ++k) out.push_back(points[i]);
  return out;
}

ExactDesign ExactDesign::from_runs(const std::vector<Vec>& runs) {
  if (runs.empty()) throw std::invalid_argument("run list must be nonempty");
  std::vector<Vec> pts;
  std::vector<int> cnt;
  for (const Vec& x : runs) {
    bool merged = false;
    for (std::size_t k = 0; k < pts.size(); ++k) {
      if (same_point(pts[k], x)) {
        ++cnt[k];
        merged = true;
        break;
      }
    }
    if (!merged) {
      pts.push_back(x);
      cnt.push_back(1);
    }
  }
  return ExactDesign::make(std::move(pts), std::move(cnt));
}

}  // namespace optdes
