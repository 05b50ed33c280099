// thicklab/convex.hpp
//
// Small dense convex solver: minimize ||base + A u||_r over u, for any
// exponent r in [1, inf].  This single primitive backs the general-p
// distance to a subspace, minimum-dual-norm functional extensions, and
// linear maximization over unit balls of subspaces.
//
// r = 2 is solved in closed form (least squares).  r >= 2 runs damped
// Newton directly on sum |c_j|^r.  r in [1, 2) and r = inf run Newton on
// a smoothed surrogate with a continuation schedule on the smoothing
// width.  Every solve returns both the primal value (an upper bound on
// the true minimum) and a certified lower bound obtained from a dual
// feasible point: a vector g with ||g||_{r*} <= 1 annihilating the
// columns of A, whose pairing <g, base> no minimizer can beat.

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "thicklab/exponent.hpp"

namespace thicklab {

struct MinNormOptions {
  double tol = 1e-12;      // gradient tolerance, relative to the data scale
  int max_iter = 10000;    // total Newton iterations across stages
};

struct MinNormResult {
  Eigen::VectorXd u;         // argmin coefficients
  double value = 0.0;        // ||base + A u||_r at the returned u
  double lower_bound = 0.0;  // dual-certified lower bound on the minimum
  Eigen::VectorXd residual;  // base + A u
  Eigen::VectorXd dual;      // the certificate g (||g||_{r*} <= 1, A^T g = 0)
  bool converged = false;
  int iterations = 0;
};

namespace detail {

inline double dense_lp_norm(const Eigen::VectorXd& c, Exponent r) {
  if (c.size() == 0) return 0.0;
  if (r.is_infinite()) return c.lpNorm<Eigen::Infinity>();
  if (r.value() == 1.0) return c.lpNorm<1>();
  if (r.value() == 2.0) return c.norm();
  const double m = c.lpNorm<Eigen::Infinity>();
  if (m == 0.0) return 0.0;
  double s = 0.0;
  for (Eigen::Index j = 0; j < c.size(); ++j) {
    s += std::pow(std::abs(c[j]) / m, r.value());
  }
  return m * std::pow(s, 1.0 / r.value());
}

// Norming vector of c in the dual norm: ||s||_{r*} = 1, <s, c> = ||c||_r.
inline Eigen::VectorXd dense_norming(const Eigen::VectorXd& c, Exponent r) {
  Eigen::VectorXd s = Eigen::VectorXd::Zero(c.size());
  if (c.size() == 0) return s;
  if (r.is_infinite()) {
    Eigen::Index best = 0;
    for (Eigen::Index j = 1; j < c.size(); ++j) {
      if (std::abs(c[j]) > std::abs(c[best])) best = j;
    }
    if (c[best] != 0.0) s[best] = c[best] > 0 ? 1.0 : -1.0;
    return s;
  }
  if (r.value() == 1.0) {
    for (Eigen::Index j = 0; j < c.size(); ++j) {
      s[j] = (c[j] > 0.0) ? 1.0 : (c[j] < 0.0 ? -1.0 : 0.0);
    }
    return s;
  }
  const double n = dense_lp_norm(c, r);
  if (n == 0.0) return s;
  for (Eigen::Index j = 0; j < c.size(); ++j) {
    const double mag = std::pow(std::abs(c[j]) / n, r.value() - 1.0);
    s[j] = c[j] > 0 ? mag : -mag;
  }
  return s;
}

// Smoothed objective, gradient weights and Hessian weights at c.
//
// finite r:  F = sum (c^2 + d^2)^{r/2}           (d = 0 allowed for r >= 2)
// r = inf :  F = d * log sum [exp(c/d) + exp(-c/d)]   (stabilized)
struct SmoothEval {
  double f = 0.0;
  Eigen::VectorXd g1;  // dF/dc
  Eigen::VectorXd d2;  // diagonal Hessian weights
  Eigen::VectorXd s;   // extra rank-one term (LSE only): H = diag(d2) - s s^T / delta
  bool has_rank_one = false;
};

inline SmoothEval eval_smooth(const Eigen::VectorXd& c, Exponent r, double delta) {
  SmoothEval e;
  const Eigen::Index n = c.size();
  e.g1.resize(n);
  e.d2.resize(n);
  if (!r.is_infinite()) {
    const double rv = r.value();
    for (Eigen::Index j = 0; j < n; ++j) {
      const double t2 = c[j] * c[j] + delta * delta;
      const double t = std::sqrt(t2);
      e.f += std::pow(t, rv);
      const double p1 = rv * std::pow(t, rv - 2.0);
      e.g1[j] = p1 * c[j];
      e.d2[j] = p1 + rv * (rv - 2.0) * std::pow(t, rv - 4.0) * c[j] * c[j];
      if (e.d2[j] < 0.0) e.d2[j] = 0.0;
    }
    return e;
  }
  const double m = c.size() ? c.cwiseAbs().maxCoeff() : 0.0;
  double Z = 0.0;
  Eigen::VectorXd wp(n), wm(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    wp[j] = std::exp((c[j] - m) / delta);
    wm[j] = std::exp((-c[j] - m) / delta);
    Z += wp[j] + wm[j];
  }
  e.f = m + delta * std::log(Z);
  e.s.resize(n);
  e.has_rank_one = true;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double a = wp[j] / Z, b = wm[j] / Z;
    e.s[j] = a - b;
    e.d2[j] = (a + b) / delta;
  }
  e.g1 = e.s;
  return e;
}

}  // namespace detail

// Active-set polish for the kinked exponents.  The smoothed solve gets
// within ~1e-6; identifying the active set from it and solving the
// corresponding linear systems lands on the exact vertex and the exact
// dual multipliers.
inline void polish_l1(const Eigen::MatrixXd& A, const Eigen::VectorXd& base,
                      Eigen::VectorXd& u, Eigen::VectorXd& c, double& value,
                      Eigen::VectorXd& dual_seed, double scale) {
  const Eigen::Index D = base.size(), k = A.cols();
  const double thresh = 1e-4 * std::max(c.cwiseAbs().maxCoeff(), 1e-30 * scale);
  std::vector<Eigen::Index> Z;
  for (Eigen::Index j = 0; j < D; ++j) {
    if (std::abs(c[j]) < thresh) Z.push_back(j);
  }
  if (Z.empty()) return;

  Eigen::MatrixXd AZ(static_cast<Eigen::Index>(Z.size()), k);
  Eigen::VectorXd bZ(static_cast<Eigen::Index>(Z.size()));
  for (std::size_t i = 0; i < Z.size(); ++i) {
    AZ.row(static_cast<Eigen::Index>(i)) = A.row(Z[i]);
    bZ[static_cast<Eigen::Index>(i)] = base[Z[i]];
  }
  const Eigen::VectorXd u_try = AZ.colPivHouseholderQr().solve(-bZ);
  const Eigen::VectorXd c_try = base + A * u_try;
  const double v_try = c_try.lpNorm<1>();
  if (v_try <= value + 1e-12 * std::max(1.0, value)) {
    u = u_try;
    c = c_try;
    value = v_try;
  }

  // dual multipliers: signs off the zero set, solved magnitudes on it
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k);
  Eigen::VectorXd s = Eigen::VectorXd::Zero(D);
  for (Eigen::Index j = 0; j < D; ++j) {
    if (std::abs(c[j]) >= thresh) {
      s[j] = c[j] > 0 ? 1.0 : -1.0;
      rhs -= A.row(j).transpose() * s[j];
    }
  }
  Eigen::MatrixXd AZt(k, static_cast<Eigen::Index>(Z.size()));
  for (std::size_t i = 0; i < Z.size(); ++i) AZt.col(static_cast<Eigen::Index>(i)) = A.row(Z[i]).transpose();
  const Eigen::VectorXd sZ = AZt.colPivHouseholderQr().solve(rhs);
  if ((AZt * sZ - rhs).cwiseAbs().maxCoeff() <= 1e-8 * std::max(1.0, rhs.cwiseAbs().maxCoeff()) &&
      sZ.cwiseAbs().maxCoeff() <= 1.0 + 1e-7) {
    for (std::size_t i = 0; i < Z.size(); ++i) {
      s[Z[i]] = std::clamp(sZ[static_cast<Eigen::Index>(i)], -1.0, 1.0);
    }
    dual_seed = s;
  }
}

inline void polish_linf(const Eigen::MatrixXd& A, const Eigen::VectorXd& base,
                        Eigen::VectorXd& u, Eigen::VectorXd& c, double& value,
                        Eigen::VectorXd& dual_seed, double scale) {
  const Eigen::Index D = base.size(), k = A.cols();
  const double t0 = c.cwiseAbs().maxCoeff();
  if (t0 <= 1e-30 * scale) return;
  const double band = 1e-4 * t0;
  std::vector<Eigen::Index> M;
  for (Eigen::Index j = 0; j < D; ++j) {
    if (std::abs(c[j]) >= t0 - band) M.push_back(j);
  }
  if (M.empty()) return;

  // equioscillation solve for (u, t): A_j u - sigma_j t = -base_j on M
  Eigen::MatrixXd E(static_cast<Eigen::Index>(M.size()), k + 1);
  Eigen::VectorXd bM(static_cast<Eigen::Index>(M.size()));
  for (std::size_t i = 0; i < M.size(); ++i) {
    E.row(static_cast<Eigen::Index>(i)).head(k) = A.row(M[i]);
    E(static_cast<Eigen::Index>(i), k) = c[M[i]] > 0 ? -1.0 : 1.0;
    bM[static_cast<Eigen::Index>(i)] = -base[M[i]];
  }
  const Eigen::VectorXd ut = E.colPivHouseholderQr().solve(bM);
  const Eigen::VectorXd u_try = ut.head(k);
  const Eigen::VectorXd c_try = base + A * u_try;
  const double v_try = c_try.lpNorm<Eigen::Infinity>();
  if (v_try <= value + 1e-12 * std::max(1.0, value)) {
    u = u_try;
    c = c_try;
    value = v_try;
  }

  // dual weights on the active set: sum w_j sigma_j A_j = 0, sum w_j = 1, w >= 0
  Eigen::MatrixXd W(k + 1, static_cast<Eigen::Index>(M.size()));
  for (std::size_t i = 0; i < M.size(); ++i) {
    const double sigma = c[M[i]] > 0 ? 1.0 : -1.0;
    W.col(static_cast<Eigen::Index>(i)).head(k) = sigma * A.row(M[i]).transpose();
    W(k, static_cast<Eigen::Index>(i)) = 1.0;
  }
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k + 1);
  rhs[k] = 1.0;
  const Eigen::VectorXd w = W.colPivHouseholderQr().solve(rhs);
  if ((W * w - rhs).cwiseAbs().maxCoeff() <= 1e-8 && w.minCoeff() >= -1e-7) {
    Eigen::VectorXd s = Eigen::VectorXd::Zero(D);
    for (std::size_t i = 0; i < M.size(); ++i) {
      const double wi = std::max(w[static_cast<Eigen::Index>(i)], 0.0);
      s[M[i]] = (c[M[i]] > 0 ? 1.0 : -1.0) * wi;
    }
    dual_seed = s;
  }
}

inline MinNormResult min_norm_affine(const Eigen::MatrixXd& A, const Eigen::VectorXd& base,
                                     Exponent r, const MinNormOptions& opts = {}) {
  const Eigen::Index D = base.size();
  const Eigen::Index k = A.cols();
  if (A.rows() != D) throw std::invalid_argument("min_norm_affine: dimension mismatch");

  MinNormResult res;
  res.u = Eigen::VectorXd::Zero(k);

  const double scale = std::max({base.size() ? base.cwiseAbs().maxCoeff() : 0.0,
                                 A.size() ? A.cwiseAbs().maxCoeff() : 0.0, 1e-300});

  if (k == 0) {
    res.residual = base;
    res.value = detail::dense_lp_norm(base, r);
    res.lower_bound = res.value;
    res.dual = detail::dense_norming(base, r);
    res.converged = true;
    return res;
  }

  // Dual seed: a subdifferential element of the norm at the final residual.
  // For kinked norms (r = 1, r = inf) the smoothed gradient resolves ties
  // into the convex combination that the optimality condition demands.
  Eigen::VectorXd dual_seed;

  if (r.value() == 2.0) {
    res.u = A.colPivHouseholderQr().solve(-base);
    res.converged = true;
  } else {
    // Newton with Armijo damping; smoothing continuation where the
    // objective has kinks (r < 2 at zero residuals, r = inf at ties).
    std::vector<double> deltas;
    if (r.is_infinite() || r.value() < 2.0) {
      for (double d = 1e-1; d > 2e-12; d *= 0.05) deltas.push_back(d * scale);
    } else {
      deltas.push_back(0.0);
    }
    // warm start from the least-squares solution
    res.u = A.colPivHouseholderQr().solve(-base);
    Eigen::VectorXd c = base + A * res.u;
    int iters = 0;
    for (double delta : deltas) {
      for (int it = 0; it < 60 && iters < opts.max_iter; ++it, ++iters) {
        const detail::SmoothEval e = detail::eval_smooth(c, r, delta);
        dual_seed = e.g1;
        Eigen::VectorXd grad = A.transpose() * e.g1;
        const double gnorm = grad.cwiseAbs().maxCoeff();
        if (gnorm <= opts.tol * std::max(1.0, std::abs(e.f))) break;
        Eigen::MatrixXd H = A.transpose() * e.d2.asDiagonal() * A;
        if (e.has_rank_one) {
          const Eigen::VectorXd As = A.transpose() * e.s;
          H -= As * As.transpose() / delta;
          // LSE Hessian is PSD in exact arithmetic; nudge for safety
        }
        double lam = 1e-12 * std::max(1.0, H.diagonal().cwiseAbs().maxCoeff());
        Eigen::VectorXd step;
        for (;;) {
          Eigen::LDLT<Eigen::MatrixXd> ldlt(H + lam * Eigen::MatrixXd::Identity(k, k));
          step = ldlt.solve(-grad);
          if (ldlt.info() == Eigen::Success && step.allFinite()) break;
          lam *= 16.0;
          if (lam > 1e30) { step = -grad; break; }
        }
        const double slope = grad.dot(step);
        if (!(slope < 0.0)) break;
        double t = 1.0;
        const double f0 = e.f;
        Eigen::VectorXd u_try;
        for (int ls = 0; ls < 60; ++ls) {
          u_try = res.u + t * step;
          const Eigen::VectorXd c_try = base + A * u_try;
          if (detail::eval_smooth(c_try, r, delta).f <= f0 + 1e-4 * t * slope) break;
          t *= 0.5;
        }
        const Eigen::VectorXd u_new = res.u + t * step;
        if ((u_new - res.u).cwiseAbs().maxCoeff() <= 1e-16 * std::max(1.0, res.u.cwiseAbs().maxCoeff())) {
          res.u = u_new;
          c = base + A * res.u;
          break;
        }
        res.u = u_new;
        c = base + A * res.u;
      }
    }
    res.iterations = iters;
    res.converged = iters < opts.max_iter;
  }

  res.residual = base + A * res.u;
  res.value = detail::dense_lp_norm(res.residual, r);

  if (r.value() == 1.0) {
    polish_l1(A, base, res.u, res.residual, res.value, dual_seed, scale);
  } else if (r.is_infinite()) {
    polish_linf(A, base, res.u, res.residual, res.value, dual_seed, scale);
  }

  // Dual certificate: subgradient of the norm at the residual, projected
  // onto the annihilator of col(A) and renormalized in the dual norm.
  const Exponent rstar = r.dual();
  Eigen::VectorXd s = (dual_seed.size() == D) ? dual_seed
                                              : detail::dense_norming(res.residual, r);
  if (s.size() && s.cwiseAbs().maxCoeff() > 0.0) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(A);
    Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(D, std::min(D, k));
    Eigen::VectorXd g = s - Q * (Q.transpose() * s);
    const double gn = detail::dense_lp_norm(g, rstar);
    if (gn > 1e-300) {
      g /= gn;
      res.dual = g;
      res.lower_bound = std::min(std::abs(g.dot(base)), res.value);
    }
  } else {
    res.lower_bound = 0.0;
  }
  return res;
}

struct LinearMaxResult {
  Eigen::VectorXd maximizer;    // coefficients u with ||A u||_r = 1
  double value = 0.0;           // attained value (a lower bound on the max)
  double certified_max = 0.0;   // dual-certified upper bound on the max
};

// Maximize <psi, u> subject to ||A u||_r <= 1, via the equivalent
// min-norm problem on the hyperplane <psi, u> = 1.
inline LinearMaxResult max_linear_on_ball(const Eigen::MatrixXd& A, const Eigen::VectorXd& psi,
                                          Exponent r, const MinNormOptions& opts = {}) {
  const Eigen::Index k = psi.size();
  if (A.cols() != k) throw std::invalid_argument("max_linear_on_ball: dimension mismatch");
  const double pn = psi.norm();
  if (pn == 0.0) throw std::invalid_argument("max_linear_on_ball: zero objective");

  const Eigen::VectorXd u0 = psi / (pn * pn);
  Eigen::VectorXd w_best;
  MinNormResult inner;
  if (k == 1) {
    inner.value = detail::dense_lp_norm(A * u0, r);
    inner.u = Eigen::VectorXd::Zero(0);
  } else {
    // null-space basis of psi^T from a full QR of psi
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(psi);
    const Eigen::MatrixXd Qfull = qr.householderQ() * Eigen::MatrixXd::Identity(k, k);
    const Eigen::MatrixXd N = Qfull.rightCols(k - 1);
    inner = min_norm_affine(A * N, A * u0, r, opts);
  }
  if (!(inner.value > 0.0)) {
    throw std::runtime_error("max_linear_on_ball: objective unbounded on the ball (A not injective)");
  }
  LinearMaxResult out;
  Eigen::VectorXd u = u0;
  if (k > 1) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(psi);
    const Eigen::MatrixXd Qfull = qr.householderQ() * Eigen::MatrixXd::Identity(k, k);
    u += Qfull.rightCols(k - 1) * inner.u;
  }
  out.maximizer = u / inner.value;
  out.value = 1.0 / inner.value;
  out.certified_max = (inner.lower_bound > 0.0) ? 1.0 / inner.lower_bound
                                                : std::numeric_limits<double>::infinity();
  return out;
}

}  // namespace thicklab
