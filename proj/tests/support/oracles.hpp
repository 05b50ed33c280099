// Independent oracles shared by the unit and acceptance suites: an
// exhaustive subspace search for d(X, eps) on tiny instances, and a
// discretized determinant search for Auerbach volumes.  Neither calls the
// code path it validates.

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "thicklab/dense.hpp"
#include "thicklab/point_cloud.hpp"
#include "thicklab/rng.hpp"
#include "thicklab/subspace.hpp"

namespace testsupport {

// Exhaustive search over candidate subspaces for tiny p = 2 instances:
// spans of every point subset plus rank-k singular subspaces with a
// minimax reweighting refinement.
inline std::size_t exhaustive_min_dim(const thicklab::PointCloud& X, double eps) {
  using namespace thicklab;
  const std::size_t n = X.size();
  double maxnorm = 0.0;
  for (const auto& pt : X.points()) maxnorm = std::max(maxnorm, lp_norm(pt.x, X.p()));
  if (maxnorm <= eps) return 0;

  std::vector<SparseVector> pts;
  for (const auto& pt : X.points()) pts.push_back(pt.x);
  SupportMap sm = SupportMap::of(pts);
  sm.finish();
  const Eigen::MatrixXd M = sm.columns(pts);

  auto feasible = [&](const Subspace& V) {
    for (const auto& pt : X.points()) {
      if (dist_to_subspace(pt.x, V).upper > eps * (1.0 + 1e-9)) return false;
    }
    return true;
  };

  const std::size_t rank = static_cast<std::size_t>(M.colPivHouseholderQr().rank());
  for (std::size_t k = 1; k <= rank; ++k) {
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
      if (static_cast<std::size_t>(__builtin_popcount(mask)) != k) continue;
      std::vector<SparseVector> sel;
      for (std::size_t i = 0; i < n; ++i) {
        if (mask & (1u << i)) sel.push_back(pts[i]);
      }
      const Subspace V = Subspace::span(sel, X.p());
      if (V.dim() <= k && feasible(V)) return k;
    }
    Eigen::VectorXd w = Eigen::VectorXd::Ones(M.cols());
    for (int round = 0; round < 8; ++round) {
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(M * w.asDiagonal(), Eigen::ComputeThinU);
      const Eigen::MatrixXd U = svd.matrixU().leftCols(
          std::min<Eigen::Index>(static_cast<Eigen::Index>(k), svd.matrixU().cols()));
      std::vector<SparseVector> basis;
      for (Eigen::Index c = 0; c < U.cols(); ++c) basis.push_back(sm.to_sparse(U.col(c)));
      const Subspace V = Subspace::span(basis, X.p());
      if (feasible(V)) return k;
      Eigen::VectorXd res(M.cols());
      for (Eigen::Index i = 0; i < M.cols(); ++i) {
        res[i] = (M.col(i) - U * (U.transpose() * M.col(i))).norm();
      }
      const double mr = res.maxCoeff();
      if (mr <= 0.0) break;
      for (Eigen::Index i = 0; i < M.cols(); ++i) w[i] *= 0.2 + res[i] / mr;
    }
  }
  return rank;
}

inline double gram_volume(const std::vector<Eigen::VectorXd>& vs) {
  Eigen::MatrixXd M(vs[0].size(), static_cast<Eigen::Index>(vs.size()));
  for (std::size_t i = 0; i < vs.size(); ++i) M.col(static_cast<Eigen::Index>(i)) = vs[i];
  return std::sqrt(std::abs((M.transpose() * M).determinant()));
}

// Exhaustive determinant search over a discretized coefficient sphere
// with a continuous hill-climbing polish (dim 2 and 3).
inline double volume_oracle(const thicklab::Subspace& V) {
  using namespace thicklab;
  SupportMap sm = SupportMap::of(V.basis());
  sm.finish();
  const Eigen::MatrixXd B = sm.columns(V.basis());
  const std::size_t m = V.dim();

  std::vector<Eigen::VectorXd> dirs;
  if (m == 2) {
    for (int t = 0; t < 720; ++t) {
      const double a = 3.14159265358979323846 * t / 720.0;
      Eigen::VectorXd w(2);
      w << std::cos(a), std::sin(a);
      dirs.push_back(w);
    }
  } else {
    const int n = 2000;  // Fibonacci sphere
    for (int i = 0; i < n; ++i) {
      const double z = 1.0 - 2.0 * (i + 0.5) / n;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double a = 2.39996322972865332 * i;
      Eigen::VectorXd w(3);
      w << r * std::cos(a), r * std::sin(a), z;
      dirs.push_back(w);
    }
  }
  std::vector<Eigen::VectorXd> cand;
  cand.reserve(dirs.size());
  for (const auto& w : dirs) {
    Eigen::VectorXd v = B * w;
    cand.push_back(v / thicklab::detail::dense_lp_norm(v, V.p()));
  }

  double best = 0.0;
  for (std::size_t start = 0; start < 7; ++start) {
    std::vector<Eigen::VectorXd> tuple;
    for (std::size_t i = 0; i < m; ++i) {
      tuple.push_back(cand[(start * 131 + i * 71) % cand.size()]);
    }
    for (int round = 0; round < 6; ++round) {
      for (std::size_t slot = 0; slot < m; ++slot) {
        double loc = gram_volume(tuple);
        for (const auto& c : cand) {
          auto t2 = tuple;
          t2[slot] = c;
          const double v = gram_volume(t2);
          if (v > loc) {
            loc = v;
            tuple = t2;
          }
        }
      }
    }
    thicklab::Rng rng(start + 1);
    double sigma = 0.3;
    double cur = gram_volume(tuple);
    for (int it = 0; it < 600; ++it) {
      const std::size_t slot = it % m;
      const Eigen::VectorXd coef = B.colPivHouseholderQr().solve(tuple[slot]);
      Eigen::VectorXd w(static_cast<Eigen::Index>(m));
      for (Eigen::Index j = 0; j < w.size(); ++j) w[j] = coef[j] + sigma * rng.normal();
      Eigen::VectorXd v = B * w;
      const double nn = thicklab::detail::dense_lp_norm(v, V.p());
      if (nn < 1e-12) continue;
      auto t2 = tuple;
      t2[slot] = v / nn;
      const double val = gram_volume(t2);
      if (val > cur) {
        cur = val;
        tuple = t2;
      } else if (it % 50 == 49) {
        sigma *= 0.6;
      }
    }
    best = std::max(best, cur);
  }
  return best;
}

}  // namespace testsupport
