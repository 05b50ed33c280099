#include <catch2/catch.hpp>

#include <algorithm>
#include <cmath>
#include <set>

#include "support/corpus.hpp"
#include "thicklab/covering.hpp"
#include "thicklab/sequences.hpp"

using namespace thicklab;
using testsupport::line_cloud;
using testsupport::random_cloud;

TEST_CASE("difference_set enumerates exactly") {
  SECTION("one point") {
    const PointCloud X = line_cloud({0.7}, Exponent::l2());
    const PointCloud Z = difference_set(X);
    REQUIRE(Z.size() == 1);
    CHECK(Z[0].x.is_zero());
  }
  SECTION("three generic points give 7 differences") {
    const PointCloud X = line_cloud({0.0, 0.25, 1.0}, Exponent::l2());
    CHECK(difference_set(X).size() == 7);
  }
  SECTION("two orthogonal points") {
    OrthogonalSequenceSpec spec;
    spec.decay_dimension = 1.0;
    spec.count = 2;
    const PointCloud A = make_orthogonal_sequence(spec);
    const PointCloud Z = difference_set(A);
    REQUIRE(Z.size() == 3);  // 0 and +-(a1 - a2)
    bool has_zero = false;
    for (const auto& z : Z.points()) has_zero |= z.x.is_zero();
    CHECK(has_zero);
  }
  SECTION("contains zero and is symmetric") {
    Rng rng(17);
    for (int trial = 0; trial < 25; ++trial) {
      const PointCloud X = random_cloud(rng, 5, 4, Exponent::l1());
      const PointCloud Z = difference_set(X);
      std::set<SparseVector> zs;
      for (const auto& z : Z.points()) zs.insert(z.x);
      CHECK(zs.count(SparseVector()) == 1);
      for (const auto& z : zs) CHECK(zs.count(-z) == 1);
    }
  }
}

TEST_CASE("greedy net on the line") {
  SECTION("{0, 0.4, 1} at eps = 0.5 needs exactly the centers 0 and 1") {
    const PointCloud X = line_cloud({0.0, 0.4, 1.0}, Exponent::l2());
    const auto centers = greedy_net(X, 0.5);
    REQUIRE(centers.size() == 2);
    CHECK(X[centers[0]].x.is_zero());
    CHECK(X[centers[1]].x.coeff(1) == 1.0);
    // brute force: one ball cannot cover, two suffice
    CHECK(testsupport::brute_min_cover(X, 0.5) == 2);
  }
  SECTION("single point") {
    const PointCloud X = line_cloud({3.0}, Exponent::l2());
    CHECK(greedy_net(X, 0.25).size() == 1);
  }
  SECTION("{0,1,2} at eps = 0.6: min pairwise gap exceeds eps") {
    const PointCloud X = line_cloud({0.0, 1.0, 2.0}, Exponent::l2());
    CHECK(greedy_net(X, 0.6).size() == 3);
  }
}

TEST_CASE("exact_min_cover") {
  const PointCloud X = line_cloud({0.0, 0.4, 1.0}, Exponent::l2());
  CHECK(exact_min_cover(X, 0.5) == 2);
  CHECK(exact_min_cover(X, 0.5) == testsupport::brute_min_cover(X, 0.5));

  CHECK(exact_min_cover(X, X.diameter()) == 1);

  const PointCloud Y = line_cloud({0.0, 1.0, 2.0}, Exponent::l2());
  CHECK(exact_min_cover(Y, 1.0) == 1);  // closed balls, center at 1
  CHECK(testsupport::brute_min_cover(Y, 1.0) == 1);

  Rng rng(1);
  const PointCloud big = random_cloud(rng, 21, 4, Exponent::l2());
  CHECK_THROWS_WITH(exact_min_cover(big, 0.5), Catch::Contains("guard"));
}

TEST_CASE("packing_number") {
  const PointCloud X = line_cloud({0.0, 1.0, 2.0}, Exponent::l2());
  CHECK(packing_number(X, 1.0) == 3);
  CHECK(packing_number(X, 1.2) == 2);
  CHECK(packing_number(X, 1.0) == testsupport::brute_packing(X, 1.0));
  CHECK(packing_number(X, 1.2) == testsupport::brute_packing(X, 1.2));
  CHECK(packing_number(line_cloud({5.0}, Exponent::l2()), 0.1) == 1);
}

TEST_CASE("cover/packing sandwich on seeded instances") {
  Rng rng(2024);
  const double delta = 1e-9;
  for (int trial = 0; trial < 200; ++trial) {
    const double pv = (trial % 3 == 0) ? 1.0 : (trial % 3 == 1 ? 2.0 : 0.0);
    const Exponent p = pv == 0.0 ? Exponent::linf() : Exponent(pv);
    const PointCloud X = random_cloud(rng, 3 + rng.uniform_index(8), 4, p);
    const double eps = 0.125 * (1.0 + static_cast<double>(rng.uniform_index(12)));

    const std::size_t N = exact_min_cover(X, eps);
    const std::size_t G = greedy_net(X, eps).size();
    const std::size_t M = packing_number(X, eps);
    CHECK(N <= G);
    CHECK(G <= M);
    CHECK(packing_number(X, 2.0 * eps + delta) <= N);
  }
}

TEST_CASE("greedy counts are monotone as eps shrinks") {
  Rng rng(5);
  const PointCloud X = random_cloud(rng, 24, 5, Exponent::l2());
  std::size_t prev = 0;
  for (int n = 0; n <= 8; ++n) {
    const std::size_t c = greedy_net(X, std::ldexp(1.0, -n)).size();
    CHECK(c >= prev);
    prev = c;
  }
}

TEST_CASE("box dimension of the orthogonal sequence") {
  OrthogonalSequenceSpec spec;
  spec.decay_dimension = 0.5;  // alpha_n = n^{-2}
  spec.count = 4096;
  spec.p = Exponent::l2();
  const PointCloud A = make_orthogonal_sequence(spec);
  const EpsilonLadder ladder(2, 11);

  const DimensionEstimate est = box_dim_estimate(A, ladder);
  CHECK(est.slope > 0.42);
  CHECK(est.slope < 0.58);

  // Oracle: exact cover counts in c_0 are #{n : alpha_n >= eps} + 1, and
  // their regression slope should agree with the greedy estimate.
  std::vector<std::pair<double, double>> oracle_counts;
  for (double eps : ladder.scales()) {
    std::size_t n_big = 0;
    for (const auto& pt : A.points()) {
      if (lp_norm(pt.x, Exponent::linf()) >= eps) ++n_big;
    }
    oracle_counts.emplace_back(eps, static_cast<double>(n_big + 1));
  }
  const DimensionEstimate oracle = fit_dimension(std::move(oracle_counts));
  CHECK(std::abs(est.slope - oracle.slope) < 0.08);
}

TEST_CASE("box dimension degenerates below the minimal gap") {
  const PointCloud X = line_cloud({0.0, 0.5, 1.0, 1.5}, Exponent::l2());
  const DimensionEstimate est = box_dim_estimate(X, EpsilonLadder(8, 12));
  CHECK(est.slope == 0.0);
  CHECK(est.degenerate);
}

TEST_CASE("box dimension of a dyadic grid is about 1") {
  std::vector<double> xs;
  for (int k = 0; k <= 64; ++k) xs.push_back(k / 64.0);
  const PointCloud X = line_cloud(xs, Exponent::l2());
  const EpsilonLadder ladder(1, 6);

  // Idealized interval counts ceil(1/(2 eps)) recover the dimension exactly.
  std::vector<std::pair<double, double>> ideal;
  for (double eps : ladder.scales()) {
    ideal.emplace_back(eps, std::ceil(1.0 / (2.0 * eps)));
  }
  CHECK(fit_dimension(ideal).slope == Approx(1.0).margin(1e-12));

  // Exact minimal covers of the discrete grid (1-d sweep oracle) run a bit
  // shallower on this ladder because one ball grabs 2*eps/step + 1 grid
  // points; the sweep value is frozen here.
  std::vector<std::pair<double, double>> exact;
  for (double eps : ladder.scales()) {
    exact.emplace_back(eps, static_cast<double>(testsupport::line_cover_oracle(xs, eps)));
  }
  const DimensionEstimate oracle = fit_dimension(exact);
  CHECK(oracle.slope == Approx(0.8971).margin(0.005));

  // The greedy estimator overshoots the exact counts at coarse scales
  // (its net is also a packing), which drags the global fit slightly
  // below the oracle; the fine-scale windows still sit near 1.
  const DimensionEstimate est = box_dim_estimate(X, ladder);
  CHECK(std::abs(est.slope - 1.0) < 0.2);
  CHECK(est.bracket.second > 0.9);
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    CHECK(est.counts[i].second >= exact[i].second);  // greedy covers, so >= N
  }
}

TEST_CASE("bracket always contains the slope") {
  Rng rng(123);
  for (int trial = 0; trial < 30; ++trial) {
    const PointCloud X = random_cloud(rng, 6 + rng.uniform_index(20), 5, Exponent::l2());
    const DimensionEstimate est = box_dim_estimate(X, EpsilonLadder(0, 5));
    CHECK(est.bracket.first <= est.slope);
    CHECK(est.slope <= est.bracket.second);
  }
}

namespace {

// Keep the first `keep` coordinates of every point (a 1-Lipschitz map in
// any l_p), deduplicating collapsed points.
PointCloud project_cloud(const PointCloud& X, std::uint32_t keep) {
  std::vector<LabeledPoint> proj;
  std::set<SparseVector> seen;
  for (const auto& pt : X.points()) {
    std::vector<Entry> kept;
    for (const Entry& e : pt.x.entries()) {
      if (e.index <= keep) kept.push_back(e);
    }
    SparseVector y = SparseVector::from_entries(std::move(kept));
    if (!seen.insert(y).second) continue;
    proj.push_back({pt.id, std::move(y)});
  }
  return PointCloud(std::move(proj), X.p());
}

PointCloud grid2d(int side, Exponent p) {
  std::vector<LabeledPoint> pts;
  for (int i = 0; i < side; ++i) {
    for (int j = 0; j < side; ++j) {
      std::vector<Entry> e;
      if (i > 0) e.push_back({1, static_cast<double>(i) / side});
      if (j > 0) e.push_back({2, static_cast<double>(j) / side});
      pts.push_back({"g" + std::to_string(i) + "_" + std::to_string(j),
                     SparseVector::from_entries(std::move(e))});
    }
  }
  return PointCloud(std::move(pts), p);
}

}  // namespace

TEST_CASE("coordinate projections do not raise the estimated dimension") {
  const EpsilonLadder ladder(1, 5);
  SECTION("planar grid projected to a line") {
    const PointCloud X = grid2d(32, Exponent::l2());
    const double sx = box_dim_estimate(X, ladder).slope;
    const double sp = box_dim_estimate(project_cloud(X, 1), ladder).slope;
    CHECK(sp <= sx + 0.1);
  }
  SECTION("orthogonal sequences projected to leading coordinates") {
    for (double d : {0.5, 1.0}) {
      OrthogonalSequenceSpec spec;
      spec.decay_dimension = d;
      spec.count = 512;
      spec.p = Exponent::l2();
      const PointCloud A = make_orthogonal_sequence(spec);
      const EpsilonLadder fine(2, 9);
      const double sa = box_dim_estimate(A, fine).slope;
      const double sp = box_dim_estimate(project_cloud(A, 16), fine).slope;
      CHECK(sp <= sa + 0.1);
    }
  }
}

TEST_CASE("difference set at most doubles the estimated dimension") {
  OrthogonalSequenceSpec spec;
  spec.decay_dimension = 0.5;
  spec.count = 256;
  spec.p = Exponent::linf();
  const PointCloud A = make_orthogonal_sequence(spec);
  const PointCloud Z = difference_set(A);
  const EpsilonLadder ladder(2, 8);
  const double sa = box_dim_estimate(A, ladder).slope;
  const double sz = box_dim_estimate(Z, ladder).slope;
  CHECK(sz <= 2.0 * sa + 0.2);
}
