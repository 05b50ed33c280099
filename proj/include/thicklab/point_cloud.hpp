// thicklab/point_cloud.hpp
//
// Finite labeled subsets of l_p and the dyadic scale ladder used by the
// dimension estimators.

#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "thicklab/sparse_vector.hpp"

namespace thicklab {

struct LabeledPoint {
  std::string id;
  SparseVector x;
};

class PointCloud {
 public:
  PointCloud(std::vector<LabeledPoint> points, Exponent p)
      : points_(std::move(points)), p_(p) {
    if (points_.empty()) throw std::invalid_argument("PointCloud: empty cloud");
    std::unordered_set<std::string> seen;
    for (const auto& pt : points_) {
      if (!seen.insert(pt.id).second) {
        throw std::invalid_argument("PointCloud: duplicate id '" + pt.id + "'");
      }
    }
  }

  const std::vector<LabeledPoint>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  Exponent p() const { return p_; }
  const LabeledPoint& operator[](std::size_t i) const { return points_[i]; }

  std::size_t index_of(const std::string& id) const {
    for (std::size_t i = 0; i < points_.size(); ++i) {
      if (points_[i].id == id) return i;
    }
    throw std::invalid_argument("PointCloud: unknown id '" + id + "'");
  }

  double distance(std::size_t i, std::size_t j) const {
    return lp_distance(points_[i].x, points_[j].x, p_);
  }

  double diameter() const {
    double d = 0.0;
    for (std::size_t i = 0; i < points_.size(); ++i) {
      for (std::size_t j = i + 1; j < points_.size(); ++j) {
        d = std::max(d, distance(i, j));
      }
    }
    return d;
  }

 private:
  std::vector<LabeledPoint> points_;
  Exponent p_;
};

// Scales eps_n = 2^{-n} for n in [n_min, n_max]; strictly decreasing.
class EpsilonLadder {
 public:
  EpsilonLadder(int n_min, int n_max) : n_min_(n_min), n_max_(n_max) {
    if (n_min > n_max) throw std::invalid_argument("EpsilonLadder: n_min > n_max");
  }

  int n_min() const { return n_min_; }
  int n_max() const { return n_max_; }
  std::size_t size() const { return static_cast<std::size_t>(n_max_ - n_min_ + 1); }

  std::vector<double> scales() const {
    std::vector<double> s;
    s.reserve(size());
    for (int n = n_min_; n <= n_max_; ++n) s.push_back(std::ldexp(1.0, -n));
    return s;
  }

 private:
  int n_min_;
  int n_max_;
};

}  // namespace thicklab
