// thicklab/covering.hpp
//
// Epsilon-nets, exact covers and packings, difference sets, and the
// box-counting dimension estimator.
//
// Conventions: balls are closed and "separated" means distance >= eps.
// The greedy net is a farthest-point traversal seeded at the
// lexicographically smallest id; its centers are pairwise > eps apart and
// every point lies within eps of a center, so the result is simultaneously
// a cover and a packing and the sandwich
//     N_exact <= |greedy| <= M_exact
// holds at every scale.

#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "thicklab/dimension_fit.hpp"
#include "thicklab/errors.hpp"
#include "thicklab/point_cloud.hpp"

namespace thicklab {

// All pairwise differences x - y, deduplicated exactly on coordinates.
// Always contains the zero vector and is symmetric under negation.
inline PointCloud difference_set(const PointCloud& X) {
  std::vector<SparseVector> diffs;
  diffs.reserve(X.size() * X.size());
  for (std::size_t i = 0; i < X.size(); ++i) {
    for (std::size_t j = 0; j < X.size(); ++j) {
      diffs.push_back(X[i].x - X[j].x);
    }
  }
  std::sort(diffs.begin(), diffs.end());
  diffs.erase(std::unique(diffs.begin(), diffs.end()), diffs.end());

  std::vector<LabeledPoint> pts;
  pts.reserve(diffs.size());
  for (std::size_t i = 0; i < diffs.size(); ++i) {
    pts.push_back({"z" + std::to_string(i), std::move(diffs[i])});
  }
  return PointCloud(std::move(pts), X.p());
}

struct GreedyNet {
  std::vector<std::size_t> centers;      // indices into the cloud
  std::vector<std::size_t> assignment;   // per point: position in `centers` covering it
};

namespace detail {

// Contiguous copy of a cloud's entries; the greedy net scans millions of
// point pairs and the flat layout keeps that scan in cache.  Per-point
// masses (sum |z_i|^p, or the max for p = inf) give distances between
// support-disjoint points in O(1), which is the common case on
// difference sets of near-orthogonal data.
struct FlatCloud {
  std::vector<std::uint32_t> idx;
  std::vector<double> val;
  std::vector<std::size_t> off;  // size n + 1
  std::vector<double> mass;      // sum of |v|^p per point (max for p = inf)

  FlatCloud(const PointCloud& X, Exponent p) {
    off.reserve(X.size() + 1);
    off.push_back(0);
    std::size_t total = 0;
    for (const auto& pt : X.points()) total += pt.x.support_size();
    idx.reserve(total);
    val.reserve(total);
    mass.reserve(X.size());
    for (const auto& pt : X.points()) {
      double m = 0.0;
      for (const Entry& e : pt.x.entries()) {
        idx.push_back(e.index);
        val.push_back(e.value);
        if (p.is_infinite()) {
          m = std::max(m, std::abs(e.value));
        } else if (p.value() == 2.0) {
          m += e.value * e.value;
        } else if (p.value() == 1.0) {
          m += std::abs(e.value);
        } else {
          m += std::pow(std::abs(e.value), p.value());
        }
      }
      mass.push_back(m);
      off.push_back(idx.size());
    }
  }

  bool disjoint(std::size_t a, std::size_t b) const {
    std::size_t i = off[a], iend = off[a + 1];
    std::size_t j = off[b], jend = off[b + 1];
    while (i < iend && j < jend) {
      if (idx[i] < idx[j]) {
        ++i;
      } else if (idx[j] < idx[i]) {
        ++j;
      } else {
        return false;
      }
    }
    return true;
  }

  // Exact distance between support-disjoint points from the cached masses;
  // +inf when it is >= cap.
  double disjoint_distance_below(std::size_t a, std::size_t b, Exponent p, double cap) const {
    const double inf = std::numeric_limits<double>::infinity();
    if (p.is_infinite()) {
      const double d = std::max(mass[a], mass[b]);
      return d >= cap ? inf : d;
    }
    const double s = mass[a] + mass[b];
    if (p.value() == 2.0) {
      if (s >= cap * cap) return inf;
      return std::sqrt(s);
    }
    if (p.value() == 1.0) return s >= cap ? inf : s;
    const double d = std::pow(s, 1.0 / p.value());
    return d >= cap ? inf : d;
  }

  // Mirrors lp_distance_below entry-for-entry so results match exactly.
  double distance_below(std::size_t a, std::size_t b, Exponent p, double cap) const {
    std::size_t i = off[a], iend = off[a + 1];
    std::size_t j = off[b], jend = off[b + 1];
    const double inf = std::numeric_limits<double>::infinity();
    if (p.is_infinite()) {
      double m = 0.0;
      while (i < iend || j < jend) {
        double d;
        if (j == jend || (i < iend && idx[i] < idx[j])) {
          d = std::abs(val[i++]);
        } else if (i == iend || idx[j] < idx[i]) {
          d = std::abs(val[j++]);
        } else {
          d = std::abs(val[i++] - val[j++]);
        }
        if (d >= cap) return inf;
        m = std::max(m, d);
      }
      return m;
    }
    if (p.value() == 2.0) {
      const double cap2 = cap * cap;
      double s = 0.0;
      while (i < iend || j < jend) {
        double d;
        if (j == jend || (i < iend && idx[i] < idx[j])) {
          d = val[i++];
        } else if (i == iend || idx[j] < idx[i]) {
          d = val[j++];
        } else {
          d = val[i++] - val[j++];
        }
        s += d * d;
        if (s >= cap2) return inf;
      }
      return std::sqrt(s);
    }
    if (p.value() == 1.0) {
      double s = 0.0;
      while (i < iend || j < jend) {
        if (j == jend || (i < iend && idx[i] < idx[j])) {
          s += std::abs(val[i++]);
        } else if (i == iend || idx[j] < idx[i]) {
          s += std::abs(val[j++]);
        } else {
          s += std::abs(val[i++] - val[j++]);
        }
        if (s >= cap) return inf;
      }
      return s;
    }
    // general exponent: fall back to the entry-merging norm
    std::vector<Entry> ea, eb;
    for (std::size_t t = off[a]; t < off[a + 1]; ++t) ea.push_back({idx[t], val[t]});
    for (std::size_t t = off[b]; t < off[b + 1]; ++t) eb.push_back({idx[t], val[t]});
    const double d = lp_distance(SparseVector::from_entries(std::move(ea)),
                                 SparseVector::from_entries(std::move(eb)), p);
    return d >= cap ? inf : d;
  }
};

}  // namespace detail

// Farthest-point traversal.  Ties on the farthest distance keep the point
// with the smallest cloud index; the seed is the lexicographically
// smallest id.
inline GreedyNet greedy_net_detailed(const PointCloud& X, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("greedy_net: eps must be positive");
  const std::size_t n = X.size();

  std::size_t seed = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (X[i].id < X[seed].id) seed = i;
  }

  const Exponent p = X.p();
  const detail::FlatCloud F(X, p);
  std::vector<double> norms(n);
  for (std::size_t i = 0; i < n; ++i) norms[i] = lp_norm(X[i].x, p);

  GreedyNet net;
  net.assignment.assign(n, 0);
  net.centers.push_back(seed);

  // Only points not yet covered (dmin > eps) can become centers; covered
  // points keep their assignment and drop out of the scan.  A candidate
  // center cannot improve dmin when the norm gap already rules it out,
  // and the evaluation aborts once the partial sum passes dmin.
  std::vector<std::size_t> active;
  std::vector<double> dmin(n, 0.0);
  active.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i == seed) continue;
    dmin[i] = X.distance(i, seed);
    if (dmin[i] > eps) {
      active.push_back(i);
    } else {
      net.assignment[i] = 0;
    }
  }

  std::vector<std::size_t> still;
  while (!active.empty()) {
    std::size_t best = active[0];
    for (std::size_t idx : active) {
      if (dmin[idx] > dmin[best] || (dmin[idx] == dmin[best] && idx < best)) best = idx;
    }
    const std::size_t c = net.centers.size();
    net.centers.push_back(best);
    net.assignment[best] = c;

    still.clear();
    still.reserve(active.size());
    const double cnorm = norms[best];
    for (std::size_t idx : active) {
      if (idx == best) continue;
      if (std::abs(norms[idx] - cnorm) < dmin[idx]) {
        const double d = F.disjoint(idx, best)
                             ? F.disjoint_distance_below(idx, best, p, dmin[idx])
                             : F.distance_below(idx, best, p, dmin[idx]);
        if (d < dmin[idx]) {
          dmin[idx] = d;
          if (d <= eps) {
            net.assignment[idx] = c;
            continue;
          }
        }
      }
      still.push_back(idx);
    }
    active.swap(still);
  }
  return net;
}

inline std::vector<std::size_t> greedy_net(const PointCloud& X, double eps) {
  return greedy_net_detailed(X, eps).centers;
}

inline constexpr std::size_t kExactGuard = 20;

// Exact N(X, eps): minimum number of closed eps-balls with centers in X
// covering X, by set-cover dynamic programming.  Guarded to |X| <= 20.
inline std::size_t exact_min_cover(const PointCloud& X, double eps) {
  const std::size_t n = X.size();
  if (n > kExactGuard) {
    throw budget_error("exact_min_cover: size guard exceeded (|X| = " +
                       std::to_string(n) + " > 20)");
  }
  std::vector<std::uint32_t> ball(n, 0);
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t i = 0; i < n; ++i) {
      if (X.distance(c, i) <= eps) ball[c] |= (1u << i);
    }
  }
  const std::uint32_t full = (n == 32) ? 0xffffffffu : ((1u << n) - 1);
  const std::size_t INF = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> dp(full + 1, INF);
  dp[0] = 0;
  for (std::uint32_t mask = 0; mask <= full; ++mask) {
    if (dp[mask] == INF) continue;
    if (mask == full) break;
    std::uint32_t lowest = 0;
    while (mask & (1u << lowest)) ++lowest;
    for (std::size_t c = 0; c < n; ++c) {
      if (!(ball[c] & (1u << lowest))) continue;
      const std::uint32_t next = mask | ball[c];
      if (dp[next] > dp[mask] + 1) dp[next] = dp[mask] + 1;
    }
  }
  return dp[full];
}

namespace detail {

inline void max_separated(const std::vector<std::uint32_t>& compat, std::uint32_t cand,
                          std::size_t chosen, std::size_t& best) {
  if (chosen > best) best = chosen;
  while (cand) {
    const std::uint32_t rest = static_cast<std::uint32_t>(__builtin_popcount(cand));
    if (chosen + rest <= best) return;
    const int i = __builtin_ctz(cand);
    cand &= cand - 1;
    max_separated(compat, cand & compat[static_cast<std::size_t>(i)], chosen + 1, best);
  }
}

}  // namespace detail

// M(X, eps): maximum number of pairwise >= eps separated points.  Exact
// (branch and bound) for |X| <= 20, greedy lower bound otherwise.
inline std::size_t packing_number(const PointCloud& X, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("packing_number: eps must be positive");
  const std::size_t n = X.size();
  if (n > kExactGuard) return greedy_net(X, eps).size();
  std::vector<std::uint32_t> compat(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && X.distance(i, j) >= eps) compat[i] |= (1u << j);
    }
  }
  std::size_t best = 0;
  const std::uint32_t all = (n == 32) ? 0xffffffffu : ((1u << n) - 1);
  detail::max_separated(compat, all, 0, best);
  return best;
}

// Box-counting estimator: greedy-net counts per scale, fitted log-log.
inline DimensionEstimate box_dim_estimate(const PointCloud& X, const EpsilonLadder& ladder) {
  if (ladder.size() < 4) throw std::invalid_argument("box_dim_estimate: ladder needs >= 4 scales");
  std::vector<std::pair<double, double>> counts;
  counts.reserve(ladder.size());
  for (double eps : ladder.scales()) {
    counts.emplace_back(eps, static_cast<double>(greedy_net(X, eps).size()));
  }
  return fit_dimension(std::move(counts));
}

}  // namespace thicklab
