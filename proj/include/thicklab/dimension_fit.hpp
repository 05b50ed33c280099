// thicklab/dimension_fit.hpp
//
// Log-log regression shared by the dimension estimators.  The headline
// slope is a global least-squares fit of log(count) against -log(eps);
// the bracket spans the consecutive-window slopes over the finest half of
// the ladder (a finite-scale stand-in for the limsup), widened to the
// global slope so that lower <= slope <= upper always holds.

#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace thicklab {

struct WindowSlope {
  double eps_coarse = 0.0;
  double eps_fine = 0.0;
  double slope = 0.0;
};

struct DimensionEstimate {
  double slope = 0.0;
  std::vector<WindowSlope> window_slopes;
  std::pair<double, double> bracket{0.0, 0.0};  // [lower, upper]
  double r_squared = 0.0;
  std::vector<std::pair<double, double>> counts;  // (eps, count), eps decreasing
  bool degenerate = false;
};

inline DimensionEstimate fit_dimension(std::vector<std::pair<double, double>> counts) {
  if (counts.size() < 2) throw std::invalid_argument("fit_dimension: need >= 2 scales");
  for (std::size_t i = 1; i < counts.size(); ++i) {
    if (!(counts[i].first < counts[i - 1].first)) {
      throw std::invalid_argument("fit_dimension: scales must strictly decrease");
    }
  }
  DimensionEstimate est;
  est.counts = counts;

  const std::size_t m = counts.size();
  std::vector<double> x(m), y(m);
  bool all_equal = true;
  for (std::size_t i = 0; i < m; ++i) {
    if (!(counts[i].second > 0.0)) throw std::invalid_argument("fit_dimension: counts must be positive");
    x[i] = -std::log(counts[i].first);
    y[i] = std::log(counts[i].second);
    if (counts[i].second != counts[0].second) all_equal = false;
  }

  for (std::size_t i = 0; i + 1 < m; ++i) {
    const double s = (y[i + 1] - y[i]) / (x[i + 1] - x[i]);
    est.window_slopes.push_back({counts[i].first, counts[i + 1].first, s});
  }

  if (all_equal) {
    est.slope = 0.0;
    est.r_squared = 0.0;
    est.degenerate = true;
    est.bracket = {0.0, 0.0};
    return est;
  }

  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  est.slope = sxy / sxx;
  est.r_squared = (syy > 0.0) ? (sxy * sxy) / (sxx * syy) : 0.0;

  // Finest half of the ladder: windows whose coarse scale is at or below the
  // median scale.
  const std::size_t w = est.window_slopes.size();
  const std::size_t first = w / 2;
  double lo = est.window_slopes[first].slope, hi = lo;
  for (std::size_t i = first; i < w; ++i) {
    lo = std::min(lo, est.window_slopes[i].slope);
    hi = std::max(hi, est.window_slopes[i].slope);
  }
  est.bracket = {std::min(lo, est.slope), std::max(hi, est.slope)};
  return est;
}

}  // namespace thicklab
