#include <catch2/catch.hpp>

#include <cmath>
#include <vector>

#include "support/corpus.hpp"
#include "thicklab/kuratowski.hpp"
#include "thicklab/sparse_vector.hpp"

using namespace thicklab;

TEST_CASE("lp_norm closed forms") {
  const SparseVector v34 = SparseVector::dense({3.0, 4.0});
  const SparseVector v12 = SparseVector::dense({1.0, -2.0});
  CHECK(lp_norm(v34, Exponent::l2()) == Approx(5.0));
  CHECK(lp_norm(v12, Exponent::l1()) == Approx(3.0));
  CHECK(lp_norm(v12, Exponent::linf()) == Approx(2.0));
  CHECK(lp_norm(SparseVector(), Exponent::l2()) == 0.0);
  CHECK(lp_norm(SparseVector(), Exponent::linf()) == 0.0);
}

TEST_CASE("norming functional attains the norm") {
  const SparseVector v34 = SparseVector::dense({3.0, 4.0});
  const Functional f2 = norming_functional(v34, Exponent::l2());
  CHECK(f2.vector().coeff(1) == Approx(0.6));
  CHECK(f2.vector().coeff(2) == Approx(0.8));
  CHECK(f2(v34) == Approx(5.0));

  const SparseVector v12 = SparseVector::dense({1.0, -2.0});
  const Functional f1 = norming_functional(v12, Exponent::l1());
  CHECK(f1.vector().coeff(1) == 1.0);
  CHECK(f1.vector().coeff(2) == -1.0);
  CHECK(lp_norm(f1, Exponent::linf()) == 1.0);
  CHECK(f1(v12) == Approx(3.0));

  const Functional finf = norming_functional(v12, Exponent::linf());
  CHECK(finf.vector().coeff(1) == 0.0);
  CHECK(finf.vector().coeff(2) == -1.0);
  CHECK(lp_norm(finf, Exponent::l1()) == 1.0);
  CHECK(finf(v12) == Approx(2.0));

  CHECK_THROWS(norming_functional(SparseVector(), Exponent::l2()));

  // smallest maximal-magnitude index wins the p = inf tie-break
  const SparseVector tie = SparseVector::dense({-2.0, 2.0});
  CHECK(norming_functional(tie, Exponent::linf()).vector().coeff(1) == -1.0);

  // general p, checked by direct numerical evaluation of both norms
  Rng rng(41);
  const Exponent p3(3.0);
  for (int trial = 0; trial < 50; ++trial) {
    const PointCloud X = testsupport::random_cloud(rng, 1, 8, p3);
    const SparseVector& v = X[0].x;
    if (v.is_zero()) continue;
    const Functional f = norming_functional(v, p3);
    CHECK(f(v) == Approx(lp_norm(v, p3)).epsilon(1e-12));
    CHECK(lp_norm(f, p3.dual()) == Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("apply_functional is the dual pairing") {
  const SparseVector v34 = SparseVector::dense({3.0, 4.0});
  CHECK(apply_functional(Functional(SparseVector::unit(1)), v34) == 3.0);
  CHECK(apply_functional(norming_functional(v34, Exponent::l2()), SparseVector()) == 0.0);

  Rng rng(7);
  for (double pv : {1.0, 1.5, 2.0, 4.0}) {
    const Exponent p(pv);
    const PointCloud X = testsupport::random_cloud(rng, 4, 6, p);
    for (const auto& pt : X.points()) {
      if (pt.x.is_zero()) continue;
      CHECK(apply_functional(norming_functional(pt.x, p), pt.x) ==
            Approx(lp_norm(pt.x, p)).epsilon(1e-12));
    }
  }
}

TEST_CASE("duality: norming functionals never exceed the norm") {
  Rng rng(99);
  for (double pv : {1.0, 1.5, 2.0, 3.0}) {
    const Exponent p(pv);
    const PointCloud X = testsupport::random_cloud(rng, 6, 6, p);
    for (const auto& pt : X.points()) {
      if (pt.x.is_zero()) continue;
      const Functional f = norming_functional(pt.x, p);
      for (const auto& other : X.points()) {
        const double nw = lp_norm(other.x, p);
        CHECK(std::abs(f(other.x)) <= nw + 1e-10);
      }
      const SparseVector unit_v = (1.0 / lp_norm(pt.x, p)) * pt.x;
      CHECK(f(unit_v) == Approx(1.0).epsilon(1e-10));
    }
  }
}

TEST_CASE("norm monotonicity in p") {
  Rng rng(3);
  const std::vector<Exponent> ps = {Exponent(1.0), Exponent(1.5), Exponent(2.0),
                                    Exponent(4.0), Exponent::linf()};
  const PointCloud X = testsupport::random_cloud(rng, 10, 8, Exponent::l2());
  for (const auto& pt : X.points()) {
    for (std::size_t a = 0; a + 1 < ps.size(); ++a) {
      CHECK(lp_norm(pt.x, ps[a + 1]) <= lp_norm(pt.x, ps[a]) + 1e-14);
    }
  }
}

TEST_CASE("kuratowski embedding of tiny metrics") {
  SECTION("two points at distance 1") {
    DistanceMatrix d{{"a", "b"}, {0, 1, 1, 0}};
    const PointCloud X = kuratowski_embed(d);
    CHECK(X.p().is_infinite());
    CHECK(X[0].x.coeff(2) == 1.0);
    CHECK(X[1].x.coeff(1) == 1.0);
    CHECK(X.distance(0, 1) == 1.0);
  }
  SECTION("equilateral triple") {
    DistanceMatrix d{{"a", "b", "c"}, {0, 1, 1, 1, 0, 1, 1, 1, 0}};
    const PointCloud X = kuratowski_embed(d);
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = i + 1; j < 3; ++j) CHECK(X.distance(i, j) == 1.0);
    }
  }
  SECTION("one point maps to the zero vector") {
    DistanceMatrix d{{"a"}, {0}};
    const PointCloud X = kuratowski_embed(d);
    CHECK(X[0].x.is_zero());
  }
  SECTION("triangle violations are named") {
    DistanceMatrix d{{"a", "b", "c"}, {0, 1, 5, 1, 0, 1, 5, 1, 0}};
    CHECK_THROWS_WITH(kuratowski_embed(d), Catch::Contains("triangle"));
  }
}

TEST_CASE("kuratowski isometry is exact") {
  // Integer-coordinate grids under sup distance give integer metrics, so
  // the max-of-differences reproduces the matrix without rounding.
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + rng.uniform_index(6);
    std::vector<std::vector<double>> grid(n, std::vector<double>(3));
    for (auto& row : grid) {
      for (double& c : row) c = static_cast<double>(rng.uniform_index(16));
    }
    DistanceMatrix d;
    for (std::size_t i = 0; i < n; ++i) d.ids.push_back("g" + std::to_string(i));
    d.values.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        double m = 0;
        for (std::size_t c = 0; c < 3; ++c) m = std::max(m, std::abs(grid[i][c] - grid[j][c]));
        d.at(i, j) = m;
      }
    }
    const PointCloud X = kuratowski_embed(d);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        CHECK(X.distance(i, j) == d.at(i, j));
      }
    }
  }
}
