// thicklab/embedding.hpp
//
// Explicit linear embeddings with Holder-continuous inverses on a finite
// cloud X.
//
// A level-n block phi_n separates differences at the dyadic scale 2^{-n}:
//   - cover blocks: norming functionals of a net of X - X at radius
//     2^{-(n+2)}; any z with ||z|| >= 2^{-n} is seen at level 2^{-(n+1)};
//   - thickness blocks: ambient Auerbach duals of a subspace within
//     2^{-(beta n + 2)} of X (beta = 1/(1 - tau)); qualifying z is seen
//     at level 2^{-(beta n + 1)}.
// Both guarantees are verified exhaustively over the difference set at
// construction time.
//
// The block map Phi stacks weighted blocks into one map to a Euclidean
// direct sum; with cover weights 2^{(1-alpha)n} the pair bounds
//   C^{-1} ||x-y||^alpha <= ||Phi x - Phi y|| <= C ||x-y||
// hold on all pairs at scales above the truncation.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "thicklab/auerbach.hpp"
#include "thicklab/errors.hpp"
#include "thicklab/covering.hpp"
#include "thicklab/thickness.hpp"

namespace thicklab {

struct FunctionalBlock {
  int level = 1;          // n
  double weight = 1.0;    // coefficient of this block inside the direct sum
  std::vector<Functional> functionals;
  double guaranteed_level = 0.0;  // verified |phi(z)| floor for ||z|| >= 2^{-n}

  std::size_t size() const { return functionals.size(); }
};

namespace detail {

// Exhaustive separation check over the difference set.
inline bool verify_block_separation(const FunctionalBlock& block, const PointCloud& Z,
                                    double pair_floor, double level) {
  for (const auto& zpt : Z.points()) {
    if (lp_norm(zpt.x, Z.p()) < pair_floor) continue;
    bool hit = false;
    for (const auto& f : block.functionals) {
      if (std::abs(f(zpt.x)) >= level) {
        hit = true;
        break;
      }
    }
    if (!hit) return false;
  }
  return true;
}

}  // namespace detail

// Cover block at level n: norming functionals of the net centers of X - X.
inline FunctionalBlock build_phi_n(const PointCloud& X, int n) {
  if (n < 1) throw std::invalid_argument("build_phi_n: n must be >= 1");
  const PointCloud Z = difference_set(X);
  const double radius = std::ldexp(1.0, -(n + 2));
  const GreedyNet net = greedy_net_detailed(Z, radius);

  FunctionalBlock block;
  block.level = n;
  block.guaranteed_level = std::ldexp(1.0, -(n + 1));
  for (std::size_t c : net.centers) {
    if (Z[c].x.is_zero()) continue;
    block.functionals.push_back(norming_functional(Z[c].x, X.p()));
  }
  if (!detail::verify_block_separation(block, Z, std::ldexp(1.0, -n), block.guaranteed_level)) {
    throw std::logic_error("build_phi_n: separation verification failed (covering bug)");
  }
  return block;
}

// Thickness block at level n: Auerbach duals of an approximating subspace.
// Retries at tighter accuracies before giving up; the error carries the
// accuracy that was achieved.
inline FunctionalBlock build_phi_n_thickness(const PointCloud& X, int n, double tau,
                                             std::size_t dim_budget = 32) {
  if (!(tau > 0.0 && tau < 1.0)) {
    throw std::invalid_argument("build_phi_n_thickness: tau must lie in (0, 1)");
  }
  if (n < 1) throw std::invalid_argument("build_phi_n_thickness: n must be >= 1");
  const double beta = 1.0 / (1.0 - tau);
  const double target = std::pow(2.0, -(beta * n + 2.0));
  const PointCloud Z = difference_set(X);
  const double level = std::pow(2.0, -(beta * n + 1.0));

  double achieved = std::numeric_limits<double>::infinity();
  for (int attempt = 0; attempt < 3; ++attempt) {
    const double acc = target / static_cast<double>(1 << attempt);
    const Subspace V = thickness_upper_span_centers(X, acc);
    if (V.dim() > dim_budget) {
      throw budget_error(
          "build_phi_n_thickness: no feasible subspace within dimension budget " +
          std::to_string(dim_budget) + " (achieved accuracy " + std::to_string(achieved) + ")");
    }
    achieved = std::min(achieved, acc);
    AuerbachOptions opts;
    opts.dim_budget = dim_budget;
    const AuerbachSystem sys = auerbach_basis(V, opts);

    FunctionalBlock block;
    block.level = n;
    block.guaranteed_level = level;
    block.functionals = sys.duals;
    if (detail::verify_block_separation(block, Z, std::ldexp(1.0, -n), level)) {
      return block;
    }
  }
  throw std::runtime_error("build_phi_n_thickness: separation not achieved at accuracy " +
                           std::to_string(achieved));
}

enum class EmbeddingMode { cover, thickness };

class BlockMap {
 public:
  BlockMap() = default;
  BlockMap(std::vector<FunctionalBlock> blocks, double tail_bound)
      : blocks_(std::move(blocks)), tail_bound_(tail_bound) {
    offsets_.reserve(blocks_.size());
    std::uint32_t off = 0;
    for (std::size_t b = 0; b + 1 <= blocks_.size(); ++b) {
      if (b > 0 && !(blocks_[b].weight < blocks_[b - 1].weight)) {
        throw std::invalid_argument("BlockMap: weights must decrease with the level");
      }
      offsets_.push_back(off);
      off += static_cast<std::uint32_t>(blocks_[b].size());
    }
    output_dim_ = off;
  }

  const std::vector<FunctionalBlock>& blocks() const { return blocks_; }
  double tail_bound() const { return tail_bound_; }
  std::size_t output_dim() const { return output_dim_; }

  // Concatenated weighted coordinates; the image lives in the Euclidean
  // direct sum of the block ranges.
  SparseVector apply(const SparseVector& x) const {
    std::vector<Entry> out;
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
      const auto& blk = blocks_[b];
      for (std::size_t j = 0; j < blk.functionals.size(); ++j) {
        const double v = blk.weight * blk.functionals[j](x);
        if (v != 0.0) {
          out.push_back({offsets_[b] + static_cast<std::uint32_t>(j) + 1, v});
        }
      }
    }
    return SparseVector::from_entries(std::move(out));
  }


  // sqrt(sum_n w_n^2 m_n): operator bound of the truncated sum.
  double upper_lipschitz() const {
    double s = 0.0;
    for (const auto& b : blocks_) {
      s += b.weight * b.weight * static_cast<double>(b.size());
    }
    return std::sqrt(s);
  }

 private:
  std::vector<FunctionalBlock> blocks_;
  std::vector<std::uint32_t> offsets_;
  double tail_bound_ = 0.0;
  std::size_t output_dim_ = 0;
};

struct EmbeddingOptions {
  double tau = 0.5;             // thickness mode only
  std::size_t dim_budget = 32;  // thickness mode Auerbach budget
};

inline BlockMap build_hilbert_embedding(const PointCloud& X, double alpha, EmbeddingMode mode,
                                        int n_max, const EmbeddingOptions& opts = {}) {
  if (n_max < 4) throw std::invalid_argument("build_hilbert_embedding: n_max must be >= 4");

  std::vector<FunctionalBlock> blocks;
  double growth_rate = 0.0;  // log2 growth of m_n for the tail estimate

  if (mode == EmbeddingMode::cover) {
    const EpsilonLadder ladder(1, std::max(4, std::min(n_max, 10)));
    const double d_hat = box_dim_estimate(X, ladder).bracket.second;
    if (!(alpha > 1.0 + d_hat)) {
      throw std::invalid_argument("build_hilbert_embedding: cover mode needs alpha > 1 + d, got alpha = " +
                                  std::to_string(alpha) + " with estimated d = " + std::to_string(d_hat));
    }
    for (int n = 1; n <= n_max; ++n) {
      FunctionalBlock blk = build_phi_n(X, n);
      blk.weight = std::pow(2.0, (1.0 - alpha) * n);
      blocks.push_back(std::move(blk));
    }
    growth_rate = 2.0 * d_hat;
  } else {
    const double tau = opts.tau;
    const double beta = 1.0 / (1.0 - tau);
    if (!(alpha > (1.0 + tau) / (1.0 - tau))) {
      throw std::invalid_argument(
          "build_hilbert_embedding: thickness mode needs alpha > (1 + tau)/(1 - tau) = " +
          std::to_string((1.0 + tau) / (1.0 - tau)) + ", got alpha = " + std::to_string(alpha));
    }
    for (int n = 1; n <= n_max; ++n) {
      FunctionalBlock blk = build_phi_n_thickness(X, n, tau, opts.dim_budget);
      blk.weight = std::pow(2.0, (beta - alpha) * n);
      blocks.push_back(std::move(blk));
    }
    growth_rate = beta * tau;
  }

  // Truncation tail on the Lipschitz constant: fit the block-size growth
  // m_n <= C 2^{g n} on the built blocks and sum the remaining geometric
  // series of w_n sqrt(m_n).
  double C = 1.0;
  for (const auto& b : blocks) {
    C = std::max(C, static_cast<double>(b.size()) / std::pow(2.0, growth_rate * b.level));
  }
  const double log2w = (mode == EmbeddingMode::cover)
                           ? (1.0 - alpha)
                           : (1.0 / (1.0 - opts.tau) - alpha);
  const double ratio = std::pow(2.0, log2w + growth_rate / 2.0);
  double tail = 0.0;
  if (ratio < 1.0) {
    tail = std::sqrt(C) * std::pow(ratio, n_max + 1) / (1.0 - ratio);
  } else {
    tail = std::numeric_limits<double>::infinity();
  }
  return BlockMap(std::move(blocks), tail);
}

struct HolderFit {
  double theta = 1.0;
  double constant = 1.0;             // smallest C with ||x-y|| <= C |Lx-Ly|^theta
  std::pair<std::string, std::string> worst_pair;
  double residual = 0.0;             // max slack of the fitted inequality (<= 0)
  double lipschitz = 0.0;            // forward constant max |Lx-Ly| / ||x-y||
};

// Exact fit over the finite pair set: theta is the steepest supporting
// slope through the pair of smallest image distance in log-log
// coordinates (the slope that stays valid as scales shrink), capped at 1;
// C is then the smallest constant making the inequality hold on every
// pair.
template <typename Map>
HolderFit holder_fit(const Map& map, const PointCloud& X) {
  const std::size_t n = X.size();
  if (n < 2) throw std::invalid_argument("holder_fit: need at least two points");

  std::vector<SparseVector> images;
  images.reserve(n);
  for (const auto& pt : X.points()) images.push_back(map.apply(pt.x));

  struct PairLog {
    double u, v;
    std::size_t i, j;
  };
  std::vector<PairLog> pairs;
  pairs.reserve(n * (n - 1) / 2);
  double lip = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double du = lp_distance(X[i].x, X[j].x, X.p());
      if (du == 0.0) continue;  // coincident source points carry no constraint
      const double dv = lp_distance(images[i], images[j], Exponent::l2());
      if (dv < 1e-14) {
        throw std::invalid_argument("holder_fit: map not injective on X (pair " + X[i].id +
                                    ", " + X[j].id + " collapses)");
      }
      pairs.push_back({std::log(du), std::log(dv), i, j});
      lip = std::max(lip, dv / du);
    }
  }
  if (pairs.empty()) throw std::invalid_argument("holder_fit: no separated pairs");

  std::size_t a = 0;
  for (std::size_t t = 1; t < pairs.size(); ++t) {
    if (pairs[t].v < pairs[a].v || (pairs[t].v == pairs[a].v && pairs[t].u > pairs[a].u)) a = t;
  }
  double theta = 1.0;
  if (pairs.size() > 1) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < pairs.size(); ++t) {
      if (t == a || pairs[t].v <= pairs[a].v) continue;
      best = std::max(best, (pairs[t].u - pairs[a].u) / (pairs[t].v - pairs[a].v));
    }
    if (std::isfinite(best)) theta = std::min(best, 1.0);
  }

  HolderFit fit;
  fit.theta = theta;
  double logc = -std::numeric_limits<double>::infinity();
  std::size_t worst = 0;
  for (std::size_t t = 0; t < pairs.size(); ++t) {
    const double c = pairs[t].u - theta * pairs[t].v;
    if (c > logc) {
      logc = c;
      worst = t;
    }
  }
  fit.constant = std::exp(logc);
  fit.worst_pair = {X[pairs[worst].i].id, X[pairs[worst].j].id};
  double resid = -std::numeric_limits<double>::infinity();
  for (const auto& pr : pairs) resid = std::max(resid, pr.u - theta * pr.v - logc);
  fit.residual = resid;
  fit.lipschitz = lip;
  return fit;
}

}  // namespace thicklab
