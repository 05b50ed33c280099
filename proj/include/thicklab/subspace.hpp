// thicklab/subspace.hpp
//
// Finite-dimensional linear subspaces of l_p, spanned by finitely
// supported vectors, and the distance from a point to such a subspace.
//
// For p = 2 the distance is an orthogonal projection residual (exact).
// For every other exponent it is a small convex minimization; the result
// carries both the primal value (a true upper bound: the norm at the
// returned nearest point) and a certified lower bound from a dual
// functional annihilating the subspace.

#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <utility>
#include <vector>

#include "thicklab/convex.hpp"
#include "thicklab/dense.hpp"
#include "thicklab/point_cloud.hpp"

namespace thicklab {

class Subspace {
 public:
  // Basis must be linearly independent; use span() to reduce a spanning set.
  Subspace(std::vector<SparseVector> basis, Exponent p) : basis_(std::move(basis)), p_(p) {
    if (!basis_.empty()) {
      const SupportMap sm = SupportMap::of(basis_);
      const Eigen::MatrixXd B = sm.columns(basis_);
      const auto qr = B.colPivHouseholderQr();
      if (static_cast<std::size_t>(qr.rank()) != basis_.size()) {
        throw std::invalid_argument("Subspace: basis is linearly dependent");
      }
    }
  }

  static Subspace zero(Exponent p) { return Subspace(std::vector<SparseVector>{}, p); }

  // Span of an arbitrary finite set: keeps a maximal independent subset
  // (column-pivoted QR; pivot order, so the kept vectors are originals).
  static Subspace span(const std::vector<SparseVector>& vectors, Exponent p) {
    std::vector<SparseVector> nonzero;
    for (const auto& v : vectors) {
      if (!v.is_zero()) nonzero.push_back(v);
    }
    if (nonzero.empty()) return zero(p);
    const SupportMap sm = SupportMap::of(nonzero);
    const Eigen::MatrixXd B = sm.columns(nonzero);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(B);
    const auto rank = qr.rank();
    std::vector<SparseVector> basis;
    basis.reserve(static_cast<std::size_t>(rank));
    const auto& perm = qr.colsPermutation().indices();
    for (Eigen::Index i = 0; i < rank; ++i) {
      basis.push_back(nonzero[static_cast<std::size_t>(perm[i])]);
    }
    return Subspace(std::move(basis), p);
  }

  const std::vector<SparseVector>& basis() const { return basis_; }
  std::size_t dim() const { return basis_.size(); }
  Exponent p() const { return p_; }

 private:
  std::vector<SparseVector> basis_;
  Exponent p_;
};

struct DistResult {
  double upper = 0.0;       // ||x - nearest||_p, a valid upper bound
  double lower = 0.0;       // dual-certified lower bound on dist(x, V)
  SparseVector nearest;     // the minimizing element of V found
  Eigen::VectorXd coeffs;   // its coordinates in the basis
};

inline DistResult dist_to_subspace(const SparseVector& x, const Subspace& V,
                                   const MinNormOptions& opts = {}) {
  DistResult out;
  if (V.dim() == 0) {
    out.upper = out.lower = lp_norm(x, V.p());
    return out;
  }
  SupportMap sm = SupportMap::of(V.basis());
  sm.absorb_vector(x);
  sm.finish();
  const Eigen::MatrixXd B = sm.columns(V.basis());
  const Eigen::VectorXd xd = sm.to_dense(x);

  const MinNormResult r = min_norm_affine(-B, xd, V.p(), opts);
  out.upper = r.value;
  out.lower = r.lower_bound;
  out.coeffs = r.u;
  out.nearest = sm.to_sparse(B * r.u);
  return out;
}

}  // namespace thicklab
