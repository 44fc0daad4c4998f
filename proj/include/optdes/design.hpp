#ifndef OPTDES_DESIGN_HPP
#define OPTDES_DESIGN_HPP

#include <vector>

#include "optdes/model.hpp"

namespace optdes {

/// Probability distribution over support points. Construction merges
/// points closer than 1e-9 (summing their weights), drops exact zeros,
/// and validates weights >= 0 summing to 1 within 1e-10.
struct ApproximateDesign {
  std::vector<Vec> points;
  std::vector<double> weights;

  static ApproximateDesign make(std::vector<Vec> points,
                                std::vector<double> weights);
  std::size_t size() const { return points.size(); }
};

/// An implementable n-run design: positive integer counts per point.
struct ExactDesign {
  std::vector<Vec> points;
  std::vector<int> counts;
  int n = 0;

  static ExactDesign make(std::vector<Vec> points, std::vector<int> counts);
  /// Weight view with w_i = count_i / n.
  ApproximateDesign as_approximate() const;
  /// Flat list of n run locations (point i repeated count_i times).
  std::vector<Vec> runs() const;
  /// Groups a flat run list back into (point, count) form.
  static ExactDesign from_runs(const std::vector<Vec>& runs);
  std::size_t size() const { return points.size(); }
};

}  // namespace optdes

#endif
