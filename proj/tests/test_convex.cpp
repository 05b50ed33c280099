#include <catch2/catch.hpp>

#include <cmath>

#include "support/corpus.hpp"
#include "thicklab/convex.hpp"
#include "thicklab/subspace.hpp"

using namespace thicklab;
using testsupport::random_cloud;

namespace {

// Independent oracle: nested grid search over the coefficients of a one-
// or two-dimensional subspace.
double dist_oracle(const SparseVector& x, const Subspace& V, double radius = 8.0) {
  const auto& basis = V.basis();
  REQUIRE(basis.size() <= 2);
  double c1 = 0.0, c2 = 0.0, best = lp_norm(x, V.p());
  double r = radius;
  for (int round = 0; round < 40; ++round) {
    double b1 = c1, b2 = c2;
    const int steps = 12;
    for (int i = -steps; i <= steps; ++i) {
      for (int j = -(basis.size() > 1 ? steps : 0); j <= (basis.size() > 1 ? steps : 0); ++j) {
        const double t1 = c1 + r * i / steps;
        const double t2 = c2 + r * j / steps;
        SparseVector v = t1 * basis[0];
        if (basis.size() > 1) v = v + t2 * basis[1];
        const double d = lp_norm(x - v, V.p());
        if (d < best) {
          best = d;
          b1 = t1;
          b2 = t2;
        }
      }
    }
    c1 = b1;
    c2 = b2;
    r *= 0.35;
  }
  return best;
}

}  // namespace

TEST_CASE("dist_to_subspace closed cases") {
  SECTION("points inside the span have distance 0") {
    const Subspace V({SparseVector::dense({1.0, 2.0}), SparseVector::unit(3)}, Exponent::l2());
    const SparseVector x = SparseVector::dense({2.0, 4.0, -1.0});
    const DistResult r = dist_to_subspace(x, V);
    CHECK(r.upper < 1e-10);
  }
  SECTION("e2 against span{e1} in l2") {
    const Subspace V({SparseVector::unit(1)}, Exponent::l2());
    const DistResult r = dist_to_subspace(SparseVector::unit(2), V);
    CHECK(r.upper == Approx(1.0));
    CHECK(r.lower == Approx(1.0).epsilon(1e-9));
  }
  SECTION("(1,1) against span{(1,0)} in l1") {
    const Subspace V({SparseVector::unit(1)}, Exponent::l1());
    const DistResult r = dist_to_subspace(SparseVector::dense({1.0, 1.0}), V);
    CHECK(r.upper == Approx(1.0).epsilon(1e-8));
    CHECK(r.lower == Approx(1.0).epsilon(1e-6));
  }
  SECTION("zero subspace returns the norm") {
    const Subspace V = Subspace::zero(Exponent::l1());
    const SparseVector x = SparseVector::dense({1.0, -2.0});
    const DistResult r = dist_to_subspace(x, V);
    CHECK(r.upper == Approx(3.0));
    CHECK(r.lower == Approx(3.0));
  }
}

TEST_CASE("dist_to_subspace agrees with grid-search oracle") {
  Rng rng(2025);
  const std::vector<Exponent> ps = {Exponent(1.0), Exponent(1.5), Exponent(2.0),
                                    Exponent(3.0), Exponent::linf()};
  int done = 0;
  for (int trial = 0; done < 40; ++trial) {
    const Exponent p = ps[trial % ps.size()];
    const PointCloud C = random_cloud(rng, 3, 5, p);
    if (C[0].x.is_zero() || C[1].x.is_zero()) continue;
    std::vector<SparseVector> basis = {C[0].x};
    if (!C[1].x.is_zero() && trial % 2 == 0) basis.push_back(C[1].x);
    Subspace V = Subspace::span(basis, p);
    if (V.dim() == 0) continue;
    const SparseVector& x = C[2].x;
    const DistResult r = dist_to_subspace(x, V);
    const double oracle = dist_oracle(x, V);
    CHECK(r.upper <= oracle + 1e-6);
    CHECK(r.lower <= oracle + 1e-8);
    CHECK(r.upper - r.lower <= 1e-6 * std::max(1.0, r.upper));
    ++done;
  }
}

TEST_CASE("duality gap stays certified across exponents") {
  Rng rng(31337);
  const std::vector<Exponent> ps = {Exponent(1.0), Exponent(1.2), Exponent(2.0),
                                    Exponent(4.0), Exponent::linf()};
  for (int trial = 0; trial < 60; ++trial) {
    const Exponent p = ps[trial % ps.size()];
    const PointCloud C = random_cloud(rng, 5, 6, p);
    std::vector<SparseVector> basis(C.points().size() - 1);
    for (std::size_t i = 0; i + 1 < C.size(); ++i) basis[i] = C[i].x;
    const Subspace V = Subspace::span(basis, p);
    const DistResult r = dist_to_subspace(C[C.size() - 1].x, V);
    CHECK(r.lower <= r.upper + 1e-12);
    CHECK(r.upper - r.lower <= 2e-6 * std::max(1.0, r.upper));
    // the nearest point really lives in V and attains the upper bound
    CHECK(lp_norm(C[C.size() - 1].x - r.nearest, p) == Approx(r.upper).margin(1e-12));
  }
}

TEST_CASE("max_linear_on_ball maximizes over the section") {
  // ball of span{e1,e2} in various norms; objective picks out known corners
  const Eigen::MatrixXd A = Eigen::MatrixXd::Identity(2, 2);
  Eigen::VectorXd psi(2);
  psi << 1.0, 1.0;
  SECTION("l_inf ball: corner (1,1)") {
    const LinearMaxResult r = max_linear_on_ball(A, psi, Exponent::linf());
    CHECK(r.value == Approx(2.0).epsilon(1e-8));
  }
  SECTION("l_1 ball: value 1") {
    const LinearMaxResult r = max_linear_on_ball(A, psi, Exponent::l1());
    CHECK(r.value == Approx(1.0).epsilon(1e-8));
  }
  SECTION("l_2 ball: value sqrt(2)") {
    const LinearMaxResult r = max_linear_on_ball(A, psi, Exponent::l2());
    CHECK(r.value == Approx(std::sqrt(2.0)).epsilon(1e-10));
  }
}
