// thicklab/thickness.hpp
//
// Brackets for d(X, eps), the least dimension of a linear subspace within
// eps of every point of X.  The exact minimax problem is not computed;
// instead every scale gets
//   - a verified upper bound: the span of greedy-net centers always works
//     (every point is within eps of a center), and for p = 2 the best
//     rank-k singular subspace often does better;
//   - a certified lower bound: if no unit-l1 combination of k chosen
//     points has norm <= eps, any eps-approximation of those points spans
//     k independent directions, so d(X, eps) >= k.  For orthogonal-type
//     points the minimum is closed-form; otherwise the smallest singular
//     value gives the certificate.  For p = 2 and pairwise orthogonal
//     subsets the projection rank bound k (1 - eps/||a_k||)^2 applies too.
//
// Growth rates of the two sides are fitted exactly like the box-counting
// estimator and reported as a pair of slopes.

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "thicklab/covering.hpp"
#include "thicklab/dense.hpp"
#include "thicklab/dimension_fit.hpp"
#include "thicklab/subspace.hpp"

namespace thicklab {

// Span of the greedy net at radius eps; feasible by construction since
// every point lies within eps of a center.
inline Subspace thickness_upper_span_centers(const PointCloud& X, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("thickness_upper_span_centers: eps must be positive");
  const GreedyNet net = greedy_net_detailed(X, eps);
  std::vector<SparseVector> centers;
  centers.reserve(net.centers.size());
  for (std::size_t c : net.centers) centers.push_back(X[c].x);
  Subspace V = Subspace::span(centers, X.p());
  // cover certificate: dist(x, V) <= ||x - center(x)|| <= eps
  for (std::size_t i = 0; i < X.size(); ++i) {
    const double d = lp_distance(X[i].x, X[net.centers[net.assignment[i]]].x, X.p());
    if (d > eps * (1.0 + 1e-12)) {
      throw std::logic_error("thickness_upper_span_centers: cover certificate failed");
    }
  }
  return V;
}

// Residuals of the best rank-k orthogonal projections (p = 2), computed
// once and queried per scale.
class SvdResidualProfile {
 public:
  explicit SvdResidualProfile(const PointCloud& X) {
    if (X.p().value() != 2.0) {
      throw std::invalid_argument("SvdResidualProfile: requires p = 2");
    }
    std::vector<SparseVector> pts;
    pts.reserve(X.size());
    for (const auto& pt : X.points()) pts.push_back(pt.x);
    SupportMap sm = SupportMap::of(pts);
    sm.finish();
    const Eigen::MatrixXd M = sm.columns(pts);  // D x N, points as columns
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeThinU);
    const Eigen::MatrixXd proj = svd.matrixU().transpose() * M;  // r x N
    const Eigen::Index r = proj.rows();
    max_residual_.assign(static_cast<std::size_t>(r) + 1, 0.0);
    for (Eigen::Index i = 0; i < M.cols(); ++i) {
      double rem = M.col(i).squaredNorm();
      max_residual_[0] = std::max(max_residual_[0], rem);
      for (Eigen::Index k = 0; k < r; ++k) {
        rem -= proj(k, i) * proj(k, i);
        max_residual_[static_cast<std::size_t>(k) + 1] =
            std::max(max_residual_[static_cast<std::size_t>(k) + 1], std::max(rem, 0.0));
      }
    }
    for (double& v : max_residual_) v = std::sqrt(v);
  }

  std::size_t min_rank_for(double eps) const {
    for (std::size_t k = 0; k < max_residual_.size(); ++k) {
      if (max_residual_[k] <= eps) return k;
    }
    return max_residual_.size() - 1;  // full rank reproduces the cloud
  }

  double residual_at(std::size_t k) const { return max_residual_.at(k); }

 private:
  std::vector<double> max_residual_;
};

inline std::size_t thickness_upper_svd(const PointCloud& X, double eps) {
  return SvdResidualProfile(X).min_rank_for(eps);
}

namespace detail {

inline bool disjoint_supports(const std::vector<const SparseVector*>& pts) {
  std::vector<std::uint32_t> seen;
  for (const auto* v : pts) {
    for (const Entry& e : v->entries()) seen.push_back(e.index);
  }
  std::sort(seen.begin(), seen.end());
  return std::adjacent_find(seen.begin(), seen.end()) == seen.end();
}

// min over ||lambda||_1 = 1 of || sum lambda_i x_i ||_p for points with
// pairwise disjoint supports: (sum ||x_i||^{-q})^{-1/q}.
inline double disjoint_min_combination(const std::vector<const SparseVector*>& pts, Exponent p) {
  const Exponent q = p.dual();
  double mn = std::numeric_limits<double>::infinity();
  for (const auto* v : pts) mn = std::min(mn, lp_norm(*v, p));
  if (q.is_infinite() || mn == 0.0) return mn;
  double s = 0.0;
  for (const auto* v : pts) s += std::pow(lp_norm(*v, p), -q.value());
  return std::pow(s, -1.0 / q.value());
}

inline double sigma_min_bound(const std::vector<const SparseVector*>& pts, Exponent p) {
  std::vector<SparseVector> copy;
  copy.reserve(pts.size());
  for (const auto* v : pts) copy.push_back(*v);
  SupportMap sm = SupportMap::of(copy);
  sm.finish();
  const Eigen::MatrixXd M = sm.columns(copy);
  if (M.cols() > M.rows()) return 0.0;  // nontrivial kernel
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
  const double smin = svd.singularValues().size()
                          ? svd.singularValues()[svd.singularValues().size() - 1]
                          : 0.0;
  const double k = static_cast<double>(pts.size());
  double bound = smin / std::sqrt(k);  // ||.||_p >= ||.||_2 for p <= 2
  if (p.value() > 2.0) {
    const double D = static_cast<double>(sm.dim());
    const double expo = (p.is_infinite() ? 0.0 : 1.0 / p.value()) - 0.5;
    bound *= std::pow(D, expo);
  }
  return bound;
}

}  // namespace detail

// Certificate that d(X, eps) >= |subset|.  A false return means no
// certificate was found, not a disproof.
inline bool independence_lower_bound(const PointCloud& X, const std::vector<std::string>& subset,
                                     double eps) {
  std::vector<const SparseVector*> pts;
  pts.reserve(subset.size());
  for (const auto& id : subset) pts.push_back(&X[X.index_of(id)].x);  // throws on missing id
  for (const auto* v : pts) {
    if (v->is_zero()) return false;
  }
  double best = 0.0;
  if (detail::disjoint_supports(pts)) {
    best = detail::disjoint_min_combination(pts, X.p());
  }
  if (best <= eps) best = std::max(best, detail::sigma_min_bound(pts, X.p()));
  return best > eps;
}

// Rank bound for pairwise orthogonal points of l_2:
// d(X, eps) >= k (1 - eps / min ||x_i||)^2.
inline double hilbert_projection_lower_bound(const PointCloud& X, double eps) {
  if (X.p().value() != 2.0) {
    throw std::invalid_argument("hilbert_projection_lower_bound: requires p = 2");
  }
  double amin = std::numeric_limits<double>::infinity();
  for (const auto& pt : X.points()) amin = std::min(amin, lp_norm(pt.x, X.p()));
  for (std::size_t i = 0; i < X.size(); ++i) {
    for (std::size_t j = i + 1; j < X.size(); ++j) {
      double dot = 0.0;
      const Functional fi{X[i].x};
      dot = fi(X[j].x);
      const double scale = lp_norm(X[i].x, X.p()) * lp_norm(X[j].x, X.p());
      if (std::abs(dot) > 1e-12 * std::max(scale, 1e-300)) {
        throw std::invalid_argument("hilbert_projection_lower_bound: points are not orthogonal");
      }
    }
  }
  if (!(eps < amin)) {
    throw std::invalid_argument("hilbert_projection_lower_bound: eps must be below the smallest norm");
  }
  const double k = static_cast<double>(X.size());
  const double t = 1.0 - eps / amin;
  return k * t * t;
}

struct ThicknessBracket {
  double epsilon = 0.0;
  std::size_t lower = 0;
  std::size_t upper = 0;
  std::vector<std::string> lower_witness_ids;
  std::size_t upper_dim = 0;  // dimension of the verified upper subspace
};

struct ThicknessEstimate {
  DimensionEstimate lower_fit;
  DimensionEstimate upper_fit;
  std::vector<ThicknessBracket> brackets;
};

struct ThicknessOptions {
  std::size_t subset_budget = 64;       // greedy lower-bound search cap
  std::size_t svd_cells_limit = 1u << 22;  // points x support guard for the SVD route
};

inline ThicknessEstimate thickness_dim_estimate(const PointCloud& X, const EpsilonLadder& ladder,
                                                const ThicknessOptions& opts = {}) {
  const std::size_t n = X.size();

  // points ordered by norm, largest first
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> norms(n);
  for (std::size_t i = 0; i < n; ++i) norms[i] = lp_norm(X[i].x, X.p());
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (norms[a] != norms[b]) return norms[a] > norms[b];
    return a < b;
  });

  // optional SVD profile (p = 2, sizes permitting)
  std::unique_ptr<SvdResidualProfile> profile;
  if (X.p().value() == 2.0) {
    std::size_t support = 0;
    {
      std::vector<std::uint32_t> coords;
      for (const auto& pt : X.points()) {
        for (const Entry& e : pt.x.entries()) coords.push_back(e.index);
      }
      std::sort(coords.begin(), coords.end());
      coords.erase(std::unique(coords.begin(), coords.end()), coords.end());
      support = coords.size();
    }
    if (support * n <= opts.svd_cells_limit) {
      profile = std::make_unique<SvdResidualProfile>(X);
    }
  }

  const std::size_t kmax = std::min(opts.subset_budget, n);
  // prefix data over the norm-ordered points
  std::vector<const SparseVector*> prefix;
  prefix.reserve(kmax);

  ThicknessEstimate est;
  std::vector<std::pair<double, double>> lower_counts, upper_counts;
  for (double eps : ladder.scales()) {
    ThicknessBracket br;
    br.epsilon = eps;

    const Subspace span = thickness_upper_span_centers(X, eps);
    std::size_t upper = span.dim();
    if (profile) upper = std::min(upper, profile->min_rank_for(eps));
    br.upper = br.upper_dim = upper;

    // Greedy lower search over norm-ordered prefixes.  The closed-form
    // routes on disjoint prefixes are O(1) per k and scan the whole
    // budget; the singular-value route is the expensive fallback and
    // stops after a few consecutive misses (its bound is monotone).
    std::size_t lower = 0;
    std::vector<std::string> witness;
    prefix.clear();
    bool disjoint_so_far = true;
    double disjoint_sum = 0.0;  // sum of ||x||^{-q} when q finite
    const Exponent q = X.p().dual();
    int sigma_failures = 0;
    std::vector<std::uint32_t> support_seen;
    for (std::size_t k = 1; k <= kmax; ++k) {
      const SparseVector& next = X[order[k - 1]].x;
      if (next.is_zero()) break;
      prefix.push_back(&next);
      for (const Entry& e : next.entries()) support_seen.push_back(e.index);
      std::sort(support_seen.begin(), support_seen.end());
      disjoint_so_far = std::adjacent_find(support_seen.begin(), support_seen.end()) ==
                        support_seen.end();

      bool certified = false;
      if (disjoint_so_far) {
        double value;
        if (q.is_infinite()) {
          value = norms[order[k - 1]];  // smallest norm in the prefix
        } else {
          disjoint_sum += std::pow(norms[order[k - 1]], -q.value());
          value = std::pow(disjoint_sum, -1.0 / q.value());
        }
        certified = value > eps;
        // Hilbert projection bound on orthogonal prefixes
        if (X.p().value() == 2.0 && norms[order[k - 1]] > eps) {
          const double t = 1.0 - eps / norms[order[k - 1]];
          const std::size_t proj = static_cast<std::size_t>(
              std::ceil(static_cast<double>(k) * t * t - 1e-9));
          if (proj > lower) {
            lower = proj;
            witness.clear();
            for (std::size_t j = 0; j < k; ++j) witness.push_back(X[order[j]].id);
          }
        }
      } else {
        if (sigma_failures >= 3) break;
        certified = detail::sigma_min_bound(prefix, X.p()) > eps;
        sigma_failures = certified ? 0 : sigma_failures + 1;
      }
      if (certified && k > lower) {
        lower = k;
        witness.clear();
        for (std::size_t j = 0; j < k; ++j) witness.push_back(X[order[j]].id);
      }
    }
    br.lower = lower;
    br.lower_witness_ids = std::move(witness);
    if (br.lower > br.upper) {
      throw std::logic_error("thickness_dim_estimate: bracket inverted at eps = " +
                             std::to_string(eps));
    }

    lower_counts.emplace_back(eps, static_cast<double>(std::max<std::size_t>(br.lower, 1)));
    upper_counts.emplace_back(eps, static_cast<double>(std::max<std::size_t>(br.upper, 1)));
    est.brackets.push_back(std::move(br));
  }
  est.lower_fit = fit_dimension(std::move(lower_counts));
  est.upper_fit = fit_dimension(std::move(upper_counts));
  return est;
}

}  // namespace thicklab
