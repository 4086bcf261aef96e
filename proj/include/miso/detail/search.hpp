// SPDX-License-Identifier: Apache-2.0

#ifndef MISO_DETAIL_SEARCH_HPP
#define MISO_DETAIL_SEARCH_HPP

#include <cmath>
#include <utility>

namespace miso::detail {

struct Maximum {
  double x = 0.0;
  double value = 0.0;
};

/// Golden-section search for the maximum of a unimodal (quasi-concave)
/// function on [lo, hi]. Both endpoints are also evaluated, so maxima sitting
/// on the boundary are returned exactly.
template <typename F>
Maximum golden_section_max(F&& f, double lo, double hi, int iterations) {
  Maximum best{lo, f(lo)};
  if (!(hi > lo)) return best;
  if (const double fhi = f(hi); fhi > best.value) best = {hi, fhi};

  constexpr double inv_phi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < iterations; ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    }
  }
  if (f1 > best.value) best = {x1, f1};
  if (f2 > best.value) best = {x2, f2};
  return best;
}

/// Largest x in [lo, hi] with pred(x) true, assuming pred is true at lo and
/// monotone (true then false). Stops when the bracket is below tol.
template <typename P>
double bisect_last_true(P&& pred, double lo, double hi, double tol) {
  if (pred(hi)) return hi;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (pred(mid))
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

}  // namespace miso::detail

#endif  // MISO_DETAIL_SEARCH_HPP
