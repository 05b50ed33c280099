// thicklab/auerbach.hpp
//
// Auerbach systems: a basis {e_i} of a finite-dimensional subspace V of
// l_p together with dual functionals {f_i} of the ambient dual, with
//     ||e_i||_p = 1,   ||f_i||_q <= 1 (+ solver slack),   f_i(e_j) = delta_ij.
//
// Construction is the classical volume argument made algorithmic: among
// unit-norm bases, one maximizing the spanned volume has coordinate
// functionals of dual norm one.  The exchange loop below measures the
// dual norm of each coordinate functional by maximizing it over the unit
// ball of V (a convex solve); any value above one hands back the
// maximizer as a strictly volume-increasing replacement, so termination
// of the loop *is* the Auerbach property.  Dual functionals are then
// extended to the ambient dual by minimum-l_q-norm interpolation, which
// preserves the restricted norm (the Hahn-Banach step, solved exactly).

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "thicklab/convex.hpp"
#include "thicklab/errors.hpp"
#include "thicklab/rng.hpp"
#include "thicklab/dense.hpp"
#include "thicklab/subspace.hpp"

namespace thicklab {

struct AuerbachSystem {
  std::vector<SparseVector> basis;  // unit ambient norm
  std::vector<Functional> duals;    // ambient extensions
  double residual = 0.0;            // max |f_i(e_j) - delta_ij|
  double max_dual_norm = 0.0;       // max ||f_i||_q
};

struct AuerbachOptions {
  std::size_t dim_budget = 32;
  int max_sweeps = 60;
  int restarts = 3;            // volume-greedy starts; best final volume wins
  double sweep_tol = 1e-9;     // accept a sweep once all dual norms <= 1 + tol
  double accept_norm = 1e-6;   // returned system must have norms <= 1 + accept
  double fail_norm = 1e-3;     // beyond this the search has missed: error out
  bool force_exchange = false; // skip the p = 2 closed form (used by tests)
};

inline AuerbachSystem auerbach_basis(const Subspace& V, const AuerbachOptions& opts = {}) {
  const std::size_t m = V.dim();
  const Exponent p = V.p();
  const Exponent q = p.dual();
  if (m == 0) return {};
  if (m > opts.dim_budget) {
    throw budget_error("auerbach_basis: dimension " + std::to_string(m) +
                       " exceeds the search budget " + std::to_string(opts.dim_budget));
  }

  AuerbachSystem sys;

  if (m == 1) {
    const SparseVector e = (1.0 / lp_norm(V.basis()[0], p)) * V.basis()[0];
    const Functional f = norming_functional(e, p);
    sys.basis = {e};
    sys.duals = {f};
    sys.residual = std::abs(f(e) - 1.0);
    sys.max_dual_norm = lp_norm(f, q);
    return sys;
  }

  SupportMap sm = SupportMap::of(V.basis());
  sm.finish();
  const Eigen::Index D = static_cast<Eigen::Index>(sm.dim());
  const Eigen::Index mi = static_cast<Eigen::Index>(m);

  Eigen::MatrixXd B = sm.columns(V.basis());

  if (p.value() == 2.0 && !opts.force_exchange) {
    // Hilbert case: any orthonormal basis is Auerbach and self-dual.
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(B);
    const Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(D, mi);
    for (Eigen::Index i = 0; i < mi; ++i) {
      sys.basis.push_back(sm.to_sparse(Q.col(i)));
      sys.duals.push_back(sm.to_functional(Q.col(i)));
    }
    double res = 0.0, norm = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      norm = std::max(norm, lp_norm(sys.duals[i], q));
      for (std::size_t j = 0; j < m; ++j) {
        res = std::max(res, std::abs(sys.duals[i](sys.basis[j]) - (i == j ? 1.0 : 0.0)));
      }
    }
    sys.residual = res;
    sys.max_dual_norm = norm;
    return sys;
  }

  // Volume-greedy start: sample unit-norm candidates of V and pick the
  // spanning m-tuple greedily by orthogonal residual.  A good basin keeps
  // the exchange from stalling at shallow coordinate-wise optima; a few
  // restarts from different pools and the largest final volume guard
  // against the remaining ones.
  const auto greedy_start = [&](std::uint64_t pool_seed) {
    std::vector<Eigen::VectorXd> pool;
    for (Eigen::Index i = 0; i < mi; ++i) {
      pool.push_back(B.col(i) / detail::dense_lp_norm(B.col(i), p));
    }
    Rng rng(pool_seed);
    const std::size_t extra = 160 * m;
    for (std::size_t s = 0; s < extra; ++s) {
      Eigen::VectorXd w(mi);
      for (Eigen::Index j = 0; j < mi; ++j) w[j] = rng.normal();
      Eigen::VectorXd v = B * w;
      const double n = detail::dense_lp_norm(v, p);
      if (n > 1e-12) pool.push_back(v / n);
    }
    Eigen::MatrixXd start(D, mi);
    Eigen::MatrixXd proj = Eigen::MatrixXd::Zero(D, mi);  // orthonormalized picks
    for (Eigen::Index slot = 0; slot < mi; ++slot) {
      double best = -1.0;
      std::size_t pick = 0;
      for (std::size_t c = 0; c < pool.size(); ++c) {
        Eigen::VectorXd resid = pool[c];
        for (Eigen::Index s = 0; s < slot; ++s) resid -= proj.col(s).dot(pool[c]) * proj.col(s);
        const double score = resid.norm();
        if (score > best) {
          best = score;
          pick = c;
        }
      }
      start.col(slot) = pool[pick];
      Eigen::VectorXd r = pool[pick];
      for (Eigen::Index s = 0; s < slot; ++s) r -= proj.col(s).dot(pool[pick]) * proj.col(s);
      proj.col(slot) = r / r.norm();
    }
    return start;
  };

  // Exchange sweeps: f_i in coordinates over the current basis picks out
  // w_i, so its dual norm is max w_i over { w : ||E w||_p <= 1 }.  The
  // certified bound drives the stop so a sloppy inner solve cannot hide
  // an improving swap.
  const auto exchange = [&](Eigen::MatrixXd E, double& worst_out) {
    double worst = 0.0;
    for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
      bool swapped = false;
      worst = 0.0;
      for (Eigen::Index i = 0; i < mi; ++i) {
        Eigen::VectorXd psi = Eigen::VectorXd::Zero(mi);
        psi[i] = 1.0;
        const LinearMaxResult mx = max_linear_on_ball(E, psi, p);
        worst = std::max(worst, mx.certified_max);
        if (mx.certified_max > 1.0 + opts.sweep_tol && mx.value > 1.0) {
          const Eigen::VectorXd replacement = E * mx.maximizer;
          E.col(i) = replacement / detail::dense_lp_norm(replacement, p);
          swapped = true;
        }
      }
      if (!swapped) break;
    }
    worst_out = worst;
    return E;
  };

  const auto volume_of = [](const Eigen::MatrixXd& M) {
    return std::sqrt(std::abs((M.transpose() * M).determinant()));
  };

  // Among restarts whose dual norms certified cleanly take the largest
  // volume; otherwise fall back to the smallest certified norm.
  Eigen::MatrixXd E;
  double worst = std::numeric_limits<double>::infinity();
  double best_volume = -1.0;
  for (int restart = 0; restart < std::max(opts.restarts, 1); ++restart) {
    double w = 0.0;
    const Eigen::MatrixXd cand = exchange(
        greedy_start(0x5eedULL + static_cast<std::uint64_t>(m) +
                     1000ull * static_cast<std::uint64_t>(restart)),
        w);
    const double vol = volume_of(cand);
    const bool cand_clean = w <= 1.0 + opts.accept_norm;
    const bool cur_clean = worst <= 1.0 + opts.accept_norm;
    if ((cand_clean && (!cur_clean || vol > best_volume)) ||
        (!cand_clean && !cur_clean && w < worst)) {
      best_volume = vol;
      E = cand;
      worst = w;
    }
  }
  if (worst > 1.0 + opts.fail_norm) {
    throw std::runtime_error("auerbach_basis: Auerbach extension failed (dual norm " +
                             std::to_string(worst) + ")");
  }

  // Ambient dual extensions: minimize ||f||_q subject to f(e_j) = delta_ij.
  // The minimum-l_2-norm interpolant from the QR of E is the p = 2 closed
  // form and the particular solution for the general solve.
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(E);
  const Eigen::MatrixXd Qfull = qr.householderQ() * Eigen::MatrixXd::Identity(D, D);
  const Eigen::MatrixXd Qthin = Qfull.leftCols(mi);
  const Eigen::MatrixXd N = Qfull.rightCols(D - mi);
  const Eigen::MatrixXd R = qr.matrixQR().topRows(mi).triangularView<Eigen::Upper>();

  for (Eigen::Index i = 0; i < mi; ++i) {
    Eigen::VectorXd ei = Eigen::VectorXd::Zero(mi);
    ei[i] = 1.0;
    const Eigen::VectorXd f0 = Qthin * R.transpose().triangularView<Eigen::Lower>().solve(ei);
    Eigen::VectorXd f = f0;
    if (q.value() != 2.0 && D > mi) {
      const MinNormResult ext = min_norm_affine(N, f0, q);
      f = f0 + N * ext.u;
    }
    sys.duals.push_back(sm.to_functional(f));
  }
  for (Eigen::Index i = 0; i < mi; ++i) sys.basis.push_back(sm.to_sparse(E.col(i)));

  double res = 0.0, norm = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    norm = std::max(norm, lp_norm(sys.duals[i], q));
    for (std::size_t j = 0; j < m; ++j) {
      res = std::max(res, std::abs(sys.duals[i](sys.basis[j]) - (i == j ? 1.0 : 0.0)));
    }
  }
  sys.residual = res;
  sys.max_dual_norm = norm;
  if (sys.max_dual_norm > 1.0 + opts.fail_norm) {
    throw std::runtime_error("auerbach_basis: Auerbach extension failed (dual norm " +
                             std::to_string(sys.max_dual_norm) + ")");
  }
  return sys;
}

}  // namespace thicklab
