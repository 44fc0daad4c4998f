#include "optdes/design_space.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace optdes {

namespace {
void check_bounds(const Vec& low, const Vec& high) {
  if (low.size() == 0 || low.size() != high.size())
    throw std::invalid_argument("bounds must be nonempty and matched");
  for (int d = 0; d < low.size(); ++d)
    if (!(low[d] < high[d]))
      throw std::invalid_argument("bound low < high violated in dimension " +
                                  std::to_string(d));
}
}  // namespace

DesignSpace DesignSpace::box(const Vec& low, const Vec& high) {
  check_bounds(low, high);
  DesignSpace s;
  s.kind_ = Kind::Box;
  s.dim_ = static_cast<int>(low.size());
  s.low_ = low;
  s.high_ = high;
  return s;
}

DesignSpace DesignSpace::grid(const Vec& low, const Vec& high,
                              const std::vector<int>& levels) {
  check_bounds(low, high);
  if (static_cast<int>(levels.size()) != low.size())
    throw std::invalid_argument("levels must match the bound dimension");
  for (int lv : levels)
    if (lv < 2) throw std::invalid_argument("grid needs >= 2 levels per dimension");
  DesignSpace s;
  s.kind_ = Kind::Grid;
  s.dim_ = static_cast<int>(low.size());
  s.low_ = low;
  s.high_ = high;
  s.levels_ = levels;
  return s;
}

DesignSpace DesignSpace::finite_set(std::vector<Vec> points) {
  if (points.empty()) throw std::invalid_argument("finite set must be nonempty");
  const auto dim = points.front().size();
  for (const Vec& x : points) {
    if (x.size() != dim)
      throw std::invalid_argument("finite-set points differ in dimension");
  }
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j)
      if ((points[i] - points[j]).norm() == 0.0)
        throw std::invalid_argument("finite set contains duplicate points");

  DesignSpace s;
  s.kind_ = Kind::FiniteSet;
  s.dim_ = static_cast<int>(dim);
  s.points_ = std::move(points);

  // consecutive 1-D integers get the +-1 random-walk move kernel
  if (dim == 1) {
    std::vector<double> v(s.points_.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = s.points_[i][0];
    std::sort(v.begin(), v.end());
    bool walk = true;
    for (double x : v)
      if (std::abs(x - std::round(x)) > 1e-9) walk = false;
    for (std::size_t i = 1; walk && i < v.size(); ++i)
      if (std::abs(v[i] - v[i - 1] - 1.0) > 1e-9) walk = false;
    s.integer_walk_ = walk && v.size() >= 2;
    if (s.integer_walk_) {
      s.low_ = Vec::Constant(1, v.front());
      s.high_ = Vec::Constant(1, v.back());
    }
  }
  return s;
}

DesignSpace DesignSpace::integer_range(long low, long high) {
  if (low >= high) throw std::invalid_argument("integer range needs low < high");
  std::vector<Vec> pts;
  pts.reserve(static_cast<std::size_t>(high - low + 1));
  for (long v = low; v <= high; ++v) pts.push_back(Vec::Constant(1, double(v)));
  return finite_set(std::move(pts));
}

std::size_t DesignSpace::enumeration_size() const {
  switch (kind_) {
    case Kind::FiniteSet: return points_.size();
    case Kind::Grid: {
      std::size_t n = 1;
      for (int lv : levels_) n *= static_cast<std::size_t>(lv);
      return n;
    }
    case Kind::Box:
      throw std::logic_error("a continuous box has no enumeration; use a grid");
  }
  return 0;
}

std::vector<Vec> DesignSpace::enumerate() const {
  if (kind_ == Kind::FiniteSet) return points_;
  if (kind_ == Kind::Box)
    throw std::logic_error("a continuous box has no enumeration; use a grid");

  const std::size_t total = enumeration_size();
  std::vector<Vec> out;
  out.reserve(total);
  std::vector<int> idx(dim_, 0);
  Vec x(dim_);
  for (std::size_t k = 0; k < total; ++k) {
    for (int d = 0; d < dim_; ++d) {
      x[d] = low_[d] + (high_[d] - low_[d]) * idx[d] / double(levels_[d] - 1);
    }
    out.push_back(x);
    for (int d = dim_ - 1; d >= 0; --d) {  // dimension 0 varies slowest
      if (++idx[d] < levels_[d]) break;
      idx[d] = 0;
    }
  }
  return out;
}

void DesignSpace::check_dim(const Vec& x) const {
  if (x.size() != dim_)
    throw std::invalid_argument("point has dimension " + std::to_string(x.size()) +
                                ", space expects " + std::to_string(dim_));
}

bool DesignSpace::contains(const Vec& x) const {
  check_dim(x);
  if (kind_ == Kind::FiniteSet) {
    for (const Vec& p : points_)
      if ((p - x).norm() <= 1e-12) return true;
    return false;
  }
  for (int d = 0; d < dim_; ++d)
    if (x[d] < low_[d] || x[d] > high_[d]) return false;
  return true;
}

Vec DesignSpace::propose_neighbor(const Vec& x, const Vec& scale, Rng& rng) const {
  check_dim(x);
  if (kind_ == Kind::FiniteSet) {
    if (integer_walk_) {
      double step = rng.coin() ? 1.0 : -1.0;
      double v = x[0] + step;
      if (v < low_[0]) v = x[0] + 1.0;   // reflect at the ends
      if (v > high_[0]) v = x[0] - 1.0;
      return Vec::Constant(1, v);
    }
    if (points_.size() == 1) return x;
    // uniformly random member other than x
    for (;;) {
      const Vec& cand = points_[rng.index(points_.size())];
      if ((cand - x).norm() > 1e-12) return cand;
    }
  }
  Vec out(dim_);
  for (int d = 0; d < dim_; ++d) {
    const double s = scale.size() == dim_ ? scale[d] : scale[0];
    double v = x[d] + rng.uniform(-s, s);
    out[d] = std::clamp(v, low_[d], high_[d]);
  }
  return out;
}

}  // namespace optdes
