// thicklab/exponent.hpp
//
// The norm exponent p of an ambient sequence space l_p, with p = inf
// standing for c_0 (null sequences under the sup norm).

#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace thicklab {

class Exponent {
 public:
  explicit Exponent(double p) : p_(p) {
    if (!(p >= 1.0)) {
      throw std::invalid_argument("Exponent: p must satisfy p >= 1, got " +
                                  std::to_string(p));
    }
  }

  static Exponent l1() { return Exponent(1.0); }
  static Exponent l2() { return Exponent(2.0); }
  static Exponent linf() { return Exponent(std::numeric_limits<double>::infinity()); }

  double value() const { return p_; }
  bool is_infinite() const { return std::isinf(p_); }

  // Conjugate exponent q with 1/p + 1/q = 1; q = inf when p = 1, q = 1 when p = inf.
  Exponent dual() const {
    if (p_ == 1.0) return linf();
    if (is_infinite()) return l1();
    return Exponent(p_ / (p_ - 1.0));
  }

  bool operator==(const Exponent& o) const { return p_ == o.p_; }
  bool operator!=(const Exponent& o) const { return p_ != o.p_; }

 private:
  double p_;
};

}  // namespace thicklab
