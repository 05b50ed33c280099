// thicklab/ensemble.hpp
//
// The random ensemble of linear maps into R^k whose rows are weighted
// sums L_i = sum_n n^{-alpha} phi_{i,n} with phi_{i,n} drawn uniformly
// from the unit ball of a dual subspace G_n.  The G_n come from Auerbach
// duals of subspaces approximating X on the dyadic accuracy schedule
// 2^{-theta beta n} / 3, beta = 1 / (1 - tau).
//
// The ball B_n is identified with a coefficient body in the Auerbach
// coordinates: a uniform sample of the l_q coefficient ball scaled by
// d_n^{-(1 - 1/q)}, which guarantees the realized functional stays inside
// the true dual ball (the identification changes the body only up to a
// recorded constant, and null sets are preserved either way).
//
// Everything is reproducible: per-trial generators derive from
// (master seed, trial index), so trials are order-independent.

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "thicklab/auerbach.hpp"
#include "thicklab/errors.hpp"
#include "thicklab/covering.hpp"
#include "thicklab/embedding.hpp"
#include "thicklab/rng.hpp"
#include "thicklab/thickness.hpp"

namespace thicklab {

struct EnsembleLevel {
  int n = 1;
  std::vector<Functional> dual_basis;  // unit-norm Auerbach extensions spanning G_n
  std::size_t dim = 0;                 // d_n
  double coeff_scale = 1.0;            // d_n^{-(1-1/q)}
  double accuracy = 0.0;               // verified dist(X, V_n)
};

struct EnsembleSpec {
  std::vector<EnsembleLevel> levels;
  double alpha = 2.0;     // weight exponent, n^{-alpha}
  int k = 1;              // rows of the sampled maps
  Exponent q = Exponent::l2();  // dual exponent of the ambient space

  double row_norm_bound() const {
    double s = 0.0;
    for (const auto& lv : levels) s += std::pow(static_cast<double>(lv.n), -alpha);
    return s;
  }
};

// Approximating subspaces and their dual bases along the accuracy
// schedule dist(X, V_n) <= 2^{-theta beta n} / 3.
inline EnsembleSpec build_subspace_sequence(const PointCloud& X, double tau, double theta,
                                            int n_max, int k, double alpha = 2.0,
                                            std::size_t dim_budget = 64) {
  if (!(tau > 0.0 && tau < 1.0)) {
    throw std::invalid_argument("build_subspace_sequence: tau must lie in (0, 1)");
  }
  if (!(theta > 0.0)) throw std::invalid_argument("build_subspace_sequence: theta must be positive");
  if (n_max < 1 || k < 1) throw std::invalid_argument("build_subspace_sequence: need n_max, k >= 1");
  if (!(alpha > 1.0)) throw std::invalid_argument("build_subspace_sequence: weight exponent alpha must exceed 1");
  const double beta = 1.0 / (1.0 - tau);

  EnsembleSpec spec;
  spec.alpha = alpha;
  spec.k = k;
  spec.q = X.p().dual();
  for (int n = 1; n <= n_max; ++n) {
    const double acc = std::pow(2.0, -theta * beta * n) / 3.0;
    const Subspace V = thickness_upper_span_centers(X, acc);
    if (V.dim() > dim_budget) {
      throw budget_error("build_subspace_sequence: accuracy schedule infeasible at n = " +
                               std::to_string(n) + " within dimension budget (achieved " +
                               std::to_string(acc) + " needs dimension " +
                               std::to_string(V.dim()) + ")");
    }
    AuerbachOptions opts;
    opts.dim_budget = dim_budget;
    const AuerbachSystem sys = auerbach_basis(V, opts);

    EnsembleLevel lv;
    lv.n = n;
    lv.dual_basis = sys.duals;
    lv.dim = sys.duals.size();
    const double qv = spec.q.value();
    lv.coeff_scale = lv.dim == 0
                         ? 1.0
                         : std::pow(static_cast<double>(lv.dim),
                                    -(1.0 - (spec.q.is_infinite() ? 0.0 : 1.0 / qv)));
    lv.accuracy = acc;
    spec.levels.push_back(std::move(lv));
  }
  return spec;
}

// Uniform sample from the unit l_q ball of R^dim: normalized generalized
// Gaussian direction (cone measure of the ball's boundary) and radial
// factor U^{1/dim}.
inline Eigen::VectorXd sample_unit_ball(int dim, Exponent q, Rng& rng) {
  if (dim < 1) throw std::invalid_argument("sample_unit_ball: dim must be >= 1");
  Eigen::VectorXd x(dim);
  if (q.is_infinite()) {
    for (int i = 0; i < dim; ++i) x[i] = rng.uniform(-1.0, 1.0);
    return x;
  }
  const double qv = q.value();
  for (int i = 0; i < dim; ++i) {
    const double g = std::pow(rng.gamma(1.0 / qv), 1.0 / qv);
    x[i] = rng.coin() ? g : -g;
  }
  double s = 0.0;
  for (int i = 0; i < dim; ++i) s += std::pow(std::abs(x[i]), qv);
  const double norm = std::pow(s, 1.0 / qv);
  const double radius = std::pow(rng.uniform01(), 1.0 / dim);
  return x * (radius / norm);
}

struct SampledMap {
  int k = 0;
  std::uint64_t seed = 0;
  // coefficient draws per row and level, in ball coordinates
  std::vector<std::vector<Eigen::VectorXd>> coeffs;
  std::vector<Functional> rows;  // realized row functionals

  SparseVector apply(const SparseVector& x) const {
    std::vector<Entry> out;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const double v = rows[i](x);
      if (v != 0.0) out.push_back({static_cast<std::uint32_t>(i + 1), v});
    }
    return SparseVector::from_entries(std::move(out));
  }
};

inline SampledMap sample_map(const EnsembleSpec& spec, std::uint64_t seed) {
  SampledMap map;
  map.k = spec.k;
  map.seed = seed;
  map.coeffs.resize(static_cast<std::size_t>(spec.k));
  map.rows.reserve(static_cast<std::size_t>(spec.k));
  for (int i = 0; i < spec.k; ++i) {
    Rng rng = Rng::derive(seed, static_cast<std::uint64_t>(i));
    SparseVector row;
    auto& draws = map.coeffs[static_cast<std::size_t>(i)];
    draws.reserve(spec.levels.size());
    for (const auto& lv : spec.levels) {
      if (lv.dim == 0) {
        draws.emplace_back();
        continue;
      }
      const Eigen::VectorXd c = sample_unit_ball(static_cast<int>(lv.dim), spec.q, rng);
      draws.push_back(c);
      const double wn = std::pow(static_cast<double>(lv.n), -spec.alpha) * lv.coeff_scale;
      for (std::size_t j = 0; j < lv.dim; ++j) {
        row = SparseVector::merge(row, lv.dual_basis[j].vector(), 1.0, wn * c[static_cast<Eigen::Index>(j)]);
      }
    }
    map.rows.push_back(Functional(row));
  }
  return map;
}

// Composition T . Phi of a sampled map with a block map; the realized
// rows become functionals on the block map's domain.
inline SampledMap compose_embedding(const BlockMap& Phi, const SampledMap& T) {
  for (const auto& row : T.rows) {
    if (row.vector().max_index() > Phi.output_dim()) {
      throw std::invalid_argument("compose_embedding: row index " +
                                  std::to_string(row.vector().max_index()) +
                                  " exceeds the block map output dimension " +
                                  std::to_string(Phi.output_dim()));
    }
  }
  SampledMap out;
  out.k = T.k;
  out.seed = T.seed;
  out.rows.reserve(T.rows.size());
  // row of the composition: sum over output coordinates c of
  // T_{i,c} * weight(block(c)) * functional(block(c), c)
  std::vector<std::pair<double, const Functional*>> columns;  // per output coord
  for (const auto& blk : Phi.blocks()) {
    for (const auto& f : blk.functionals) columns.emplace_back(blk.weight, &f);
  }
  for (const auto& row : T.rows) {
    SparseVector acc;
    for (const Entry& e : row.vector().entries()) {
      const auto& [w, f] = columns[e.index - 1];
      acc = SparseVector::merge(acc, f->vector(), 1.0, e.value * w);
    }
    out.rows.push_back(Functional(acc));
  }
  return out;
}

struct SlabCheckResult {
  double empirical = 0.0;  // frequency of |a + phi(x)| <= eps under lambda_n
  double bound = 0.0;      // d_n * eps / |g(x)|
  double std_error = 0.0;  // binomial standard error of the frequency
};

// Monte-Carlo check of the slab bound at level n.  g is given in ball
// coordinates and must have g(x) != 0.
inline SlabCheckResult check_slab_bound(const EnsembleSpec& spec, std::size_t level_index,
                                        const SparseVector& x, double a, double eps,
                                        const Eigen::VectorXd& g_coeffs, std::size_t trials,
                                        std::uint64_t seed) {
  const EnsembleLevel& lv = spec.levels.at(level_index);
  if (static_cast<std::size_t>(g_coeffs.size()) != lv.dim) {
    throw std::invalid_argument("check_slab_bound: coefficient size mismatch");
  }
  // realized g and its value at x
  double gx = 0.0;
  for (std::size_t j = 0; j < lv.dim; ++j) {
    gx += g_coeffs[static_cast<Eigen::Index>(j)] * lv.coeff_scale * lv.dual_basis[j](x);
  }
  if (gx == 0.0) throw std::invalid_argument("check_slab_bound: g(x) = 0");

  // phi(x) for a draw c is the dot of c with the per-basis values
  Eigen::VectorXd vals(static_cast<Eigen::Index>(lv.dim));
  for (std::size_t j = 0; j < lv.dim; ++j) {
    vals[static_cast<Eigen::Index>(j)] = lv.coeff_scale * lv.dual_basis[j](x);
  }
  std::size_t hits = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng = Rng::derive(seed, t);
    const Eigen::VectorXd c = sample_unit_ball(static_cast<int>(lv.dim), spec.q, rng);
    if (std::abs(a + c.dot(vals)) <= eps) ++hits;
  }
  SlabCheckResult res;
  res.empirical = static_cast<double>(hits) / static_cast<double>(trials);
  res.bound = static_cast<double>(lv.dim) * eps / std::abs(gx);
  res.std_error = std::sqrt(std::max(res.empirical * (1.0 - res.empirical), 1e-12) /
                            static_cast<double>(trials));
  return res;
}

// Fraction of sampled maps L with |Lz| <= 2^{-n} for some difference z
// with ||z|| >= 2^{-theta n}.
inline double estimate_bad_set(const EnsembleSpec& spec, const PointCloud& X, double theta,
                               int n, std::size_t trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("estimate_bad_set: need trials >= 1");
  const PointCloud Z = difference_set(X);
  const double zfloor = std::pow(2.0, -theta * n);
  const double threshold = std::ldexp(1.0, -n);

  std::vector<const SparseVector*> zs;
  for (const auto& zpt : Z.points()) {
    if (lp_norm(zpt.x, X.p()) >= zfloor) zs.push_back(&zpt.x);
  }
  if (zs.empty()) return 0.0;

  std::size_t bad = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    const SampledMap L = sample_map(spec, seed + t);
    bool in_q = false;
    for (const auto* z : zs) {
      double s = 0.0;
      for (const auto& row : L.rows) {
        const double v = row(*z);
        s += v * v;
      }
      if (std::sqrt(s) <= threshold) {
        in_q = true;
        break;
      }
    }
    if (in_q) ++bad;
  }
  return static_cast<double>(bad) / static_cast<double>(trials);
}

struct TheoremRateResult {
  double success_fraction = 0.0;
  double threshold = 0.0;            // the admissible theta bound
  std::vector<double> trial_thetas;  // fitted exponent per map, -inf on collapse
};

// Fraction of sampled maps whose Holder fit reaches the requested
// exponent on every pair of X.  The threshold check can be lifted for
// diagnostic sweeps above the admissible range.
inline TheoremRateResult verify_theorem_rate(const PointCloud& X, int k, double theta, double tau,
                                             std::size_t trials, std::uint64_t seed,
                                             int n_max = 24, std::size_t dim_budget = 64,
                                             bool enforce_threshold = true) {
  const EpsilonLadder ladder(1, 8);
  const double d_hat = box_dim_estimate(X, ladder).bracket.second;
  if (!(static_cast<double>(k) > 2.0 * d_hat)) {
    throw std::invalid_argument("verify_theorem_rate: need k > 2 d (k = " + std::to_string(k) +
                                ", estimated d = " + std::to_string(d_hat) + ")");
  }
  const double threshold =
      (1.0 - tau) * (static_cast<double>(k) - 2.0 * d_hat) / (static_cast<double>(k) * (1.0 + tau));
  if (enforce_threshold && !(theta > 0.0 && theta < threshold)) {
    throw std::invalid_argument(
        "verify_theorem_rate: theta must satisfy 0 < theta < (1 - tau)(k - 2d)/(k (1 + tau)) = " +
        std::to_string(threshold));
  }
  const EnsembleSpec spec = build_subspace_sequence(X, tau, theta, n_max, k, 2.0, dim_budget);

  TheoremRateResult res;
  res.threshold = threshold;
  res.trial_thetas.reserve(trials);
  std::size_t ok = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    const SampledMap L = sample_map(spec, seed + t);
    try {
      const HolderFit fit = holder_fit(L, X);
      res.trial_thetas.push_back(fit.theta);
      if (fit.theta >= theta) ++ok;
    } catch (const std::invalid_argument&) {
      // collapsed pair: the map fails for this draw
      res.trial_thetas.push_back(-std::numeric_limits<double>::infinity());
    }
  }
  res.success_fraction = static_cast<double>(ok) / static_cast<double>(trials);
  return res;
}

}  // namespace thicklab
