// thicklab/kuratowski.hpp
//
// Kuratowski embedding of a finite metric space: point i maps to its row
// of distances, and sup-norm distances of the images reproduce the metric
// exactly.  The input matrix is validated (symmetry, zero diagonal,
// triangle inequality) before any vector is built.

#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "thicklab/point_cloud.hpp"

namespace thicklab {

struct DistanceMatrix {
  std::vector<std::string> ids;
  std::vector<double> values;  // row-major, size ids.size()^2

  std::size_t size() const { return ids.size(); }
  double at(std::size_t i, std::size_t j) const { return values[i * ids.size() + j]; }
  double& at(std::size_t i, std::size_t j) { return values[i * ids.size() + j]; }
};

// Violations beyond this tolerance are errors; smaller ones are accepted.
inline constexpr double kMetricTolerance = 1e-9;

inline void validate_metric(const DistanceMatrix& d) {
  const std::size_t n = d.size();
  if (d.values.size() != n * n) {
    throw std::invalid_argument("distance matrix: expected " + std::to_string(n * n) +
                                " values");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (d.at(i, i) != 0.0) {
      throw std::invalid_argument("distance matrix: nonzero diagonal at '" + d.ids[i] + "'");
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (d.at(i, j) < 0.0) {
        throw std::invalid_argument("distance matrix: negative entry (" + d.ids[i] + "," +
                                    d.ids[j] + ")");
      }
      if (std::abs(d.at(i, j) - d.at(j, i)) > kMetricTolerance) {
        throw std::invalid_argument("distance matrix: asymmetric at (" + d.ids[i] + "," +
                                    d.ids[j] + ")");
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        if (d.at(i, j) > d.at(i, k) + d.at(k, j) + kMetricTolerance) {
          throw std::invalid_argument("distance matrix: triangle inequality fails for (" +
                                      d.ids[i] + "," + d.ids[j] + "," + d.ids[k] + ")");
        }
      }
    }
  }
}

// Point i -> (d(i,1), ..., d(i,n)) as a point of c_0; the images are an
// isometric copy of the metric space.
inline PointCloud kuratowski_embed(const DistanceMatrix& d) {
  validate_metric(d);
  const std::size_t n = d.size();
  std::vector<LabeledPoint> pts;
  pts.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Entry> e;
    e.reserve(n);
    for (std::size_t j = 0; j < n; ++j) {
      if (d.at(i, j) != 0.0) e.push_back({static_cast<std::uint32_t>(j + 1), d.at(i, j)});
    }
    pts.push_back({d.ids[i], SparseVector::from_entries(std::move(e))});
  }
  return PointCloud(std::move(pts), Exponent::linf());
}

}  // namespace thicklab
