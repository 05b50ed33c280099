#include <catch2/catch.hpp>

#include <cmath>

#include "thicklab/covering.hpp"
#include "thicklab/sequences.hpp"

using namespace thicklab;

TEST_CASE("orthogonal sequence construction") {
  OrthogonalSequenceSpec spec;
  spec.decay_dimension = 1.0;
  spec.count = 3;
  const PointCloud A = make_orthogonal_sequence(spec);
  REQUIRE(A.size() == 3);
  CHECK(A[0].x.coeff(1) == 1.0);
  CHECK(A[1].x.coeff(2) == 0.5);
  CHECK(A[2].x.coeff(3) == Approx(1.0 / 3.0));

  SECTION("sup distances are the larger magnitude") {
    OrthogonalSequenceSpec s2 = spec;
    s2.count = 12;
    s2.p = Exponent::linf();
    const PointCloud B = make_orthogonal_sequence(s2);
    for (std::size_t i = 0; i < B.size(); ++i) {
      for (std::size_t j = i + 1; j < B.size(); ++j) {
        const double am = lp_norm(B[i].x, B.p());
        const double an = lp_norm(B[j].x, B.p());
        CHECK(B.distance(i, j) == std::max(am, an));
      }
    }
  }
  SECTION("euclidean distances are hypotenuses") {
    OrthogonalSequenceSpec s2 = spec;
    s2.count = 8;
    const PointCloud B = make_orthogonal_sequence(s2);
    for (std::size_t i = 0; i < B.size(); ++i) {
      for (std::size_t j = i + 1; j < B.size(); ++j) {
        const double am = lp_norm(B[i].x, B.p());
        const double an = lp_norm(B[j].x, B.p());
        CHECK(B.distance(i, j) == Approx(std::hypot(am, an)));
      }
    }
  }
}

TEST_CASE("closed-form exponents") {
  OrthogonalSequenceSpec spec;
  spec.count = 16;

  spec.decay_dimension = 0.5;
  CHECK(exact_box_dim(spec) == 0.5);
  CHECK(expected_difference_dim(spec) == 1.0);

  spec.decay_dimension = 2.0;
  CHECK(exact_box_dim(spec) == 2.0);
  CHECK(expected_difference_dim(spec) == 4.0);

  SECTION("exponential decay has dimension zero") {
    OrthogonalSequenceSpec e;
    e.count = 24;
    std::vector<double> alphas;
    for (std::size_t n = 1; n <= e.count; ++n) alphas.push_back(std::exp(-static_cast<double>(n)));
    e.alphas = alphas;
    // partial suprema of log n / -log alpha_n tend to zero
    CHECK(exact_box_dim(e) < 0.2);
    CHECK(expected_difference_dim(e) < 0.4);
  }
}

TEST_CASE("thickness lower formula") {
  OrthogonalSequenceSpec spec;
  spec.count = 8;

  spec.decay_dimension = 1.0;
  spec.p = Exponent::l1();
  CHECK(thickness_lower_formula(spec) == 1.0);  // q = inf collapses to d

  spec.p = Exponent::l2();
  CHECK(thickness_lower_formula(spec) == Approx(2.0 / 3.0));

  spec.p = Exponent::linf();
  CHECK(thickness_lower_formula(spec) == Approx(0.5));
}

TEST_CASE("user-supplied plateau sequences") {
  OrthogonalSequenceSpec spec;
  spec.count = 6;
  spec.alphas = std::vector<double>{1.0, 0.5, 0.5, 0.5, 0.25, 0.125};
  const PointCloud A = make_orthogonal_sequence(spec);
  CHECK(A.size() == 6);
  CHECK(A[2].x.coeff(3) == 0.5);

  spec.alphas = std::vector<double>{0.5, 0.75};  // increasing: rejected
  CHECK_THROWS(make_orthogonal_sequence(spec));
}

TEST_CASE("estimator consistency across exponents") {
  // box-dimension bracket contains d at the full truncation, every p
  for (double d : {0.5, 1.0, 2.0}) {
    for (double pv : {1.0, 2.0, 4.0, 0.0}) {
      OrthogonalSequenceSpec spec;
      spec.decay_dimension = d;
      spec.count = 4096;
      spec.p = pv == 0.0 ? Exponent::linf() : Exponent(pv);
      const PointCloud A = make_orthogonal_sequence(spec);
      const EpsilonLadder ladder(d < 2.0 ? 2 : 1, d < 1.0 ? 11 : (d < 2.0 ? 11 : 6));
      const DimensionEstimate est = box_dim_estimate(A, ladder);
      CHECK(est.bracket.first <= d + 0.15);
      CHECK(est.bracket.second >= d - 0.15);
    }
  }
}
