// thicklab/sequences.hpp
//
// Generators and closed-form ground truth for the "orthogonal" sequences
// A = { alpha_n e_n } that drive the quantitative checks: with
// alpha_n = n^{-1/d} the box-counting dimension of A equals d in every
// l_p, the difference set doubles it, and the thickness admits the
// closed-form lower bound q d / (q + d).

#pragma once

#include <cmath>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <vector>

#include "thicklab/point_cloud.hpp"

namespace thicklab {

struct OrthogonalSequenceSpec {
  double decay_dimension = 1.0;  // d > 0, alpha_n = n^{-1/d}
  std::size_t count = 2;         // K >= 2
  Exponent p = Exponent::l2();
  // Optional explicit decreasing sequence (plateaus allowed); overrides the
  // power law when present.
  std::optional<std::vector<double>> alphas;

  std::vector<double> alpha_values() const {
    if (alphas) {
      if (alphas->size() < 2) throw std::invalid_argument("orthogonal sequence: need K >= 2");
      for (std::size_t i = 1; i < alphas->size(); ++i) {
        if ((*alphas)[i] > (*alphas)[i - 1] || (*alphas)[i] <= 0.0) {
          throw std::invalid_argument("orthogonal sequence: alphas must be positive and nonincreasing");
        }
      }
      return *alphas;
    }
    if (!(decay_dimension > 0.0)) throw std::invalid_argument("orthogonal sequence: d must be positive");
    if (count < 2) throw std::invalid_argument("orthogonal sequence: need K >= 2");
    std::vector<double> a(count);
    for (std::size_t n = 0; n < count; ++n) {
      a[n] = std::pow(static_cast<double>(n + 1), -1.0 / decay_dimension);
    }
    return a;
  }
};

inline PointCloud make_orthogonal_sequence(const OrthogonalSequenceSpec& spec) {
  const std::vector<double> alpha = spec.alpha_values();
  std::vector<LabeledPoint> pts;
  pts.reserve(alpha.size());
  for (std::size_t n = 0; n < alpha.size(); ++n) {
    char id[24];
    std::snprintf(id, sizeof(id), "a%05zu", n + 1);
    pts.push_back({id, SparseVector::unit(static_cast<std::uint32_t>(n + 1), alpha[n])});
  }
  return PointCloud(std::move(pts), spec.p);
}

// limsup log n / -log ||a_n||; equals d for the power law in every l_p.
// For explicit sequences the limsup is realized over the tail half of the
// truncation, like every other finite-scale limsup in the library.
inline double exact_box_dim(const OrthogonalSequenceSpec& spec) {
  if (!spec.alphas) return spec.decay_dimension;
  const auto& a = *spec.alphas;
  double sup = 0.0;
  for (std::size_t n = std::max<std::size_t>(1, a.size() / 2); n < a.size(); ++n) {
    if (a[n] < 1.0) {
      sup = std::max(sup, std::log(static_cast<double>(n + 1)) / -std::log(a[n]));
    }
  }
  return sup;
}

// q d / (q + d) with q conjugate to p; reduces to d itself when p = 1.
inline double thickness_lower_formula(const OrthogonalSequenceSpec& spec) {
  const double d = exact_box_dim(spec);
  if (spec.p.value() == 1.0) return d;  // q = inf
  const double q = spec.p.dual().value();
  return q * d / (q + d);
}

inline double expected_difference_dim(const OrthogonalSequenceSpec& spec) {
  return 2.0 * exact_box_dim(spec);
}

}  // namespace thicklab
