#ifndef OPTDES_DESIGN_SPACE_HPP
#define OPTDES_DESIGN_SPACE_HPP

#include <vector>

#include "optdes/model.hpp"
#include "optdes/rng.hpp"

namespace optdes {

/// Where design points live: a continuous box, a Cartesian grid over a
/// box (the candidate set for approximate solves), or an explicit finite
/// set (integer spaces such as group sizes).
class DesignSpace {
 public:
  enum class Kind { Box, Grid, FiniteSet };

  static DesignSpace box(const Vec& low, const Vec& high);
  static DesignSpace grid(const Vec& low, const Vec& high,
                          const std::vector<int>& levels);
  static DesignSpace finite_set(std::vector<Vec> points);
  /// Convenience: the 1-D integer set {low, low+1, ..., high}.
  static DesignSpace integer_range(long low, long high);

  Kind kind() const { return kind_; }
  int dimension() const { return dim_; }
  const Vec& low() const { return low_; }
  const Vec& high() const { return high_; }
  const std::vector<int>& levels() const { return levels_; }

  /// All candidate points in lexicographic order (dimension 0 slowest).
  /// Throws std::logic_error for a Box; discretize it into a Grid first.
  std::vector<Vec> enumerate() const;
  std::size_t enumeration_size() const;

  /// Membership test: inside bounds for Box/Grid, exact member for
  /// FiniteSet. Throws std::invalid_argument on a dimension mismatch.
  bool contains(const Vec& x) const;

  /// Random local move used by annealing. Boxes and grids perturb within
  /// a per-dimension hyper-cube [-scale_d, scale_d] and clip to bounds;
  /// consecutive-integer sets step +-1 with boundary reflection; other
  /// finite sets jump to a uniformly random different member.
  Vec propose_neighbor(const Vec& x, const Vec& scale, Rng& rng) const;

  const std::vector<Vec>& finite_points() const { return points_; }
  bool is_integer_walk() const { return integer_walk_; }

 private:
  DesignSpace() = default;
  void check_dim(const Vec& x) const;

  Kind kind_ = Kind::Box;
  int dim_ = 0;
  Vec low_, high_;
  std::vector<int> levels_;
  std::vector<Vec> points_;   // FiniteSet only
  bool integer_walk_ = false; // FiniteSet of consecutive 1-D integers
};

}  // namespace optdes

#endif
