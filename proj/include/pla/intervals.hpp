#ifndef PLA_INTERVALS_HPP_
#define PLA_INTERVALS_HPP_

#include <algorithm>
#include <cstddef>
#include <utility>
#include <vector>

#include "pla/core.hpp"

namespace pla
{

struct PriceInterval
{
  std::size_t K = 0;
  double lo = 0.0;
  double hi = 0.0;

  double width() const noexcept {return hi - lo;}
  double mid() const noexcept {return 0.5 * (lo + hi);}
};

/**
 * @brief Sorted supply costs with the sentinels 0 and p_max.
 *
 * breakpoints has mn + 2 entries; origin[k] is the (i, j) cell (0-based) of
 * interior breakpoint k + 1. Interval K spans [breakpoints[K], breakpoints[K+1]].
 */
struct IntervalSet
{
  std::vector<double> breakpoints;
  std::vector<std::pair<std::size_t, std::size_t>> origin;
  std::vector<PriceInterval> intervals;
};

/**
 * Orders cells by ascending cost; equal costs put the larger supplier index
 * first, then the larger consumer index first.
 */
inline IntervalSet build_intervals(const Matrix & C, double p_max)
{
  IntervalSet set;
  for (std::size_t i = 0; i < C.rows(); ++i) {
    for (std::size_t j = 0; j < C.cols(); ++j) {
      set.origin.emplace_back(i, j);
    }
  }
  std::sort(set.origin.begin(), set.origin.end(),
    [&C](const auto & x, const auto & y) {
      const double cx = C(x.first, x.second), cy = C(y.first, y.second);
      if (cx != cy) {
        return cx < cy;
      }
      if (x.first != y.first) {
        return x.first > y.first;
      }
      return x.second > y.second;
    });
  set.breakpoints.push_back(0.0);
  for (const auto & [i, j] : set.origin) {
    set.breakpoints.push_back(C(i, j));
  }
  set.breakpoints.push_back(p_max);
  for (std::size_t K = 0; K + 1 < set.breakpoints.size(); ++K) {
    set.intervals.push_back(PriceInterval{K, set.breakpoints[K], set.breakpoints[K + 1]});
  }
  return set;
}

}  // namespace pla

#endif  // PLA_INTERVALS_HPP_
