// thicklab/sparse_vector.hpp
//
// Finitely supported vectors and dual functionals of l_p.  Every point the
// library touches (points of a cloud, cover centers, differences, dual
// functionals) is a sorted list of (index, value) pairs with no stored
// zeros, so all arithmetic is exact on the union of supports.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "thicklab/exponent.hpp"

namespace thicklab {

struct Entry {
  std::uint32_t index = 0;  // 1-based coordinate of the ambient sequence space
  double value = 0.0;

  friend bool operator==(const Entry& a, const Entry& b) {
    return a.index == b.index && a.value == b.value;
  }
};

class SparseVector {
 public:
  SparseVector() = default;

  // Entries must have strictly increasing indices; zero values are dropped.
  static SparseVector from_entries(std::vector<Entry> entries) {
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return a.index < b.index; });
    for (std::size_t i = 1; i < entries.size(); ++i) {
      if (entries[i].index == entries[i - 1].index) {
        throw std::invalid_argument("SparseVector: duplicate index " +
                                    std::to_string(entries[i].index));
      }
    }
    SparseVector v;
    v.entries_.reserve(entries.size());
    for (const Entry& e : entries) {
      if (e.index == 0) throw std::invalid_argument("SparseVector: indices are 1-based");
      if (e.value != 0.0) v.entries_.push_back(e);
    }
    return v;
  }

  static SparseVector unit(std::uint32_t index, double value = 1.0) {
    return from_entries({{index, value}});
  }

  // Dense prefix starting at coordinate 1.
  static SparseVector dense(const std::vector<double>& values) {
    std::vector<Entry> e;
    e.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (values[i] != 0.0) e.push_back({static_cast<std::uint32_t>(i + 1), values[i]});
    }
    return from_entries(std::move(e));
  }

  const std::vector<Entry>& entries() const { return entries_; }
  bool is_zero() const { return entries_.empty(); }
  std::size_t support_size() const { return entries_.size(); }

  double coeff(std::uint32_t index) const {
    auto it = std::lower_bound(
        entries_.begin(), entries_.end(), index,
        [](const Entry& e, std::uint32_t i) { return e.index < i; });
    return (it != entries_.end() && it->index == index) ? it->value : 0.0;
  }

  std::uint32_t max_index() const {
    return entries_.empty() ? 0 : entries_.back().index;
  }

  friend bool operator==(const SparseVector& a, const SparseVector& b) {
    return a.entries_ == b.entries_;
  }

  // Exact lexicographic order on (index, value) pairs; used for deduplication.
  friend bool operator<(const SparseVector& a, const SparseVector& b) {
    const auto na = a.entries_.size(), nb = b.entries_.size();
    for (std::size_t i = 0; i < std::min(na, nb); ++i) {
      if (a.entries_[i].index != b.entries_[i].index)
        return a.entries_[i].index < b.entries_[i].index;
      if (a.entries_[i].value != b.entries_[i].value)
        return a.entries_[i].value < b.entries_[i].value;
    }
    return na < nb;
  }

  friend SparseVector operator+(const SparseVector& a, const SparseVector& b) {
    return merge(a, b, 1.0, 1.0);
  }
  friend SparseVector operator-(const SparseVector& a, const SparseVector& b) {
    return merge(a, b, 1.0, -1.0);
  }
  friend SparseVector operator*(double s, const SparseVector& v) {
    SparseVector r;
    if (s == 0.0) return r;
    r.entries_ = v.entries_;
    for (Entry& e : r.entries_) e.value *= s;
    return r;
  }
  SparseVector operator-() const { return -1.0 * *this; }

  // a*x + b*y with exact-zero entries dropped.
  static SparseVector merge(const SparseVector& x, const SparseVector& y, double a,
                            double b) {
    SparseVector r;
    r.entries_.reserve(x.entries_.size() + y.entries_.size());
    std::size_t i = 0, j = 0;
    while (i < x.entries_.size() || j < y.entries_.size()) {
      if (j == y.entries_.size() ||
          (i < x.entries_.size() && x.entries_[i].index < y.entries_[j].index)) {
        const double v = a * x.entries_[i].value;
        if (v != 0.0) r.entries_.push_back({x.entries_[i].index, v});
        ++i;
      } else if (i == x.entries_.size() || y.entries_[j].index < x.entries_[i].index) {
        const double v = b * y.entries_[j].value;
        if (v != 0.0) r.entries_.push_back({y.entries_[j].index, v});
        ++j;
      } else {
        const double v = a * x.entries_[i].value + b * y.entries_[j].value;
        if (v != 0.0) r.entries_.push_back({x.entries_[i].index, v});
        ++i;
        ++j;
      }
    }
    return r;
  }

 private:
  std::vector<Entry> entries_;
};

// An element of the dual l_q, stored exactly like a point.
class Functional {
 public:
  Functional() = default;
  explicit Functional(SparseVector v) : v_(std::move(v)) {}

  const SparseVector& vector() const { return v_; }
  const std::vector<Entry>& entries() const { return v_.entries(); }
  bool is_zero() const { return v_.is_zero(); }

  // f(x) = sum_i f_i x_i over the common support.
  double operator()(const SparseVector& x) const {
    const auto& f = v_.entries();
    const auto& g = x.entries();
    double s = 0.0;
    std::size_t i = 0, j = 0;
    while (i < f.size() && j < g.size()) {
      if (f[i].index < g[j].index) {
        ++i;
      } else if (g[j].index < f[i].index) {
        ++j;
      } else {
        s += f[i].value * g[j].value;
        ++i;
        ++j;
      }
    }
    return s;
  }

  friend bool operator==(const Functional& a, const Functional& b) {
    return a.v_ == b.v_;
  }

 private:
  SparseVector v_;
};

inline double apply_functional(const Functional& f, const SparseVector& x) {
  return f(x);
}

// (sum |v_i|^p)^{1/p}, max |v_i| when p = inf; 0 for the empty vector.
inline double lp_norm(const SparseVector& v, Exponent p) {
  if (v.is_zero()) return 0.0;
  double m = 0.0;
  for (const Entry& e : v.entries()) m = std::max(m, std::abs(e.value));
  if (m == 0.0) return 0.0;
  if (p.is_infinite()) return m;
  if (p.value() == 1.0) {
    double s = 0.0;
    for (const Entry& e : v.entries()) s += std::abs(e.value);
    return s;
  }
  if (p.value() == 2.0) {
    double s = 0.0;
    for (const Entry& e : v.entries()) s += e.value * e.value;
    return std::sqrt(s);
  }
  // Scale by the max entry so pow never overflows.
  double s = 0.0;
  for (const Entry& e : v.entries()) s += std::pow(std::abs(e.value) / m, p.value());
  return m * std::pow(s, 1.0 / p.value());
}

inline double lp_norm(const Functional& f, Exponent q) { return lp_norm(f.vector(), q); }

// ||x - y||_p without building the difference.
inline double lp_distance(const SparseVector& x, const SparseVector& y, Exponent p) {
  const auto& a = x.entries();
  const auto& b = y.entries();
  const double pv = p.value();
  const bool inf = p.is_infinite();
  double acc = 0.0;  // running sum, or running max when p = inf
  std::size_t i = 0, j = 0;
  if (inf) {
    while (i < a.size() || j < b.size()) {
      double d;
      if (j == b.size() || (i < a.size() && a[i].index < b[j].index)) {
        d = std::abs(a[i++].value);
      } else if (i == a.size() || b[j].index < a[i].index) {
        d = std::abs(b[j++].value);
      } else {
        d = std::abs(a[i++].value - b[j++].value);
      }
      acc = std::max(acc, d);
    }
    return acc;
  }
  if (pv == 2.0) {
    while (i < a.size() || j < b.size()) {
      double d;
      if (j == b.size() || (i < a.size() && a[i].index < b[j].index)) {
        d = a[i++].value;
      } else if (i == a.size() || b[j].index < a[i].index) {
        d = b[j++].value;
      } else {
        d = a[i++].value - b[j++].value;
      }
      acc += d * d;
    }
    return std::sqrt(acc);
  }
  if (pv == 1.0) {
    while (i < a.size() || j < b.size()) {
      if (j == b.size() || (i < a.size() && a[i].index < b[j].index)) {
        acc += std::abs(a[i++].value);
      } else if (i == a.size() || b[j].index < a[i].index) {
        acc += std::abs(b[j++].value);
      } else {
        acc += std::abs(a[i++].value - b[j++].value);
      }
    }
    return acc;
  }
  return lp_norm(x - y, p);
}

// ||x - y||_p, aborting with +inf once the partial accumulation proves the
// distance is >= cap.  Exact when the true distance is below cap.
inline double lp_distance_below(const SparseVector& x, const SparseVector& y, Exponent p,
                                double cap) {
  const auto& a = x.entries();
  const auto& b = y.entries();
  const double inf = std::numeric_limits<double>::infinity();
  std::size_t i = 0, j = 0;
  if (p.is_infinite()) {
    double m = 0.0;
    while (i < a.size() || j < b.size()) {
      double d;
      if (j == b.size() || (i < a.size() && a[i].index < b[j].index)) {
        d = std::abs(a[i++].value);
      } else if (i == a.size() || b[j].index < a[i].index) {
        d = std::abs(b[j++].value);
      } else {
        d = std::abs(a[i++].value - b[j++].value);
      }
      if (d >= cap) return inf;
      m = std::max(m, d);
    }
    return m;
  }
  if (p.value() == 2.0) {
    const double cap2 = cap * cap;
    double s = 0.0;
    while (i < a.size() || j < b.size()) {
      double d;
      if (j == b.size() || (i < a.size() && a[i].index < b[j].index)) {
        d = a[i++].value;
      } else if (i == a.size() || b[j].index < a[i].index) {
        d = b[j++].value;
      } else {
        d = a[i++].value - b[j++].value;
      }
      s += d * d;
      if (s >= cap2) return inf;
    }
    return std::sqrt(s);
  }
  if (p.value() == 1.0) {
    double s = 0.0;
    while (i < a.size() || j < b.size()) {
      if (j == b.size() || (i < a.size() && a[i].index < b[j].index)) {
        s += std::abs(a[i++].value);
      } else if (i == a.size() || b[j].index < a[i].index) {
        s += std::abs(b[j++].value);
      } else {
        s += std::abs(a[i++].value - b[j++].value);
      }
      if (s >= cap) return inf;
    }
    return s;
  }
  const double d = lp_distance(x, y, p);
  return d >= cap ? inf : d;
}

// Hahn-Banach witness: f with ||f||_q = 1 and f(v) = ||v||_p, explicit in l_p.
// For p = inf the smallest maximal-magnitude coordinate is picked.
inline Functional norming_functional(const SparseVector& v, Exponent p) {
  if (v.is_zero()) throw std::invalid_argument("norming_functional: no norming functional for the zero vector");
  std::vector<Entry> out;
  if (p.is_infinite()) {
    const Entry* best = &v.entries().front();
    for (const Entry& e : v.entries()) {
      if (std::abs(e.value) > std::abs(best->value)) best = &e;
    }
    out.push_back({best->index, best->value > 0 ? 1.0 : -1.0});
    return Functional(SparseVector::from_entries(std::move(out)));
  }
  if (p.value() == 1.0) {
    out.reserve(v.support_size());
    for (const Entry& e : v.entries()) out.push_back({e.index, e.value > 0 ? 1.0 : -1.0});
    return Functional(SparseVector::from_entries(std::move(out)));
  }
  const double n = lp_norm(v, p);
  const double pm1 = p.value() - 1.0;
  out.reserve(v.support_size());
  for (const Entry& e : v.entries()) {
    const double mag = std::pow(std::abs(e.value) / n, pm1);
    out.push_back({e.index, e.value > 0 ? mag : -mag});
  }
  return Functional(SparseVector::from_entries(std::move(out)));
}

}  // namespace thicklab
