// thicklab/dense.hpp
//
// Bridge between sparse ambient vectors and dense Eigen blocks over a
// union support.  Computations stay exact because every vector involved
// has finite support.

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cstdint>
#include <vector>

#include "thicklab/sparse_vector.hpp"

namespace thicklab {

class SupportMap {
 public:
  SupportMap() = default;

  template <typename Iterable>
  static SupportMap of(const Iterable& vectors) {
    SupportMap m;
    for (const auto& v : vectors) m.absorb(coords_of(v));
    m.finish();
    return m;
  }

  void absorb_vector(const SparseVector& v) { absorb(coords_of(v)); }
  void absorb_vector(const Functional& f) { absorb(coords_of(f)); }

  void finish() {
    std::sort(coords_.begin(), coords_.end());
    coords_.erase(std::unique(coords_.begin(), coords_.end()), coords_.end());
  }

  std::size_t dim() const { return coords_.size(); }
  std::uint32_t coord(std::size_t row) const { return coords_[row]; }

  Eigen::VectorXd to_dense(const SparseVector& v) const {
    Eigen::VectorXd d = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(coords_.size()));
    for (const Entry& e : v.entries()) {
      const auto it = std::lower_bound(coords_.begin(), coords_.end(), e.index);
      d[it - coords_.begin()] = e.value;
    }
    return d;
  }
  Eigen::VectorXd to_dense(const Functional& f) const { return to_dense(f.vector()); }

  SparseVector to_sparse(const Eigen::VectorXd& d) const {
    std::vector<Entry> e;
    for (Eigen::Index i = 0; i < d.size(); ++i) {
      if (d[i] != 0.0) e.push_back({coords_[static_cast<std::size_t>(i)], d[i]});
    }
    return SparseVector::from_entries(std::move(e));
  }
  Functional to_functional(const Eigen::VectorXd& d) const { return Functional(to_sparse(d)); }

  template <typename Iterable>
  Eigen::MatrixXd columns(const Iterable& vectors) const {
    std::size_t n = 0;
    for (const auto& v : vectors) {
      (void)v;
      ++n;
    }
    Eigen::MatrixXd M(static_cast<Eigen::Index>(coords_.size()), static_cast<Eigen::Index>(n));
    Eigen::Index c = 0;
    for (const auto& v : vectors) M.col(c++) = to_dense(v);
    return M;
  }

 private:
  static const SparseVector& coords_of(const SparseVector& v) { return v; }
  static const SparseVector& coords_of(const Functional& f) { return f.vector(); }

  void absorb(const SparseVector& v) {
    for (const Entry& e : v.entries()) coords_.push_back(e.index);
  }

  std::vector<std::uint32_t> coords_;
};

}  // namespace thicklab
