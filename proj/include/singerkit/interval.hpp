#pragma once

#include <cmath>

namespace singerkit {

// Interval with per-endpoint open/closed flags. Map domains must be finite
// with lo < hi; everything else is the caller's business.
struct Interval {
  double lo = 0.0;
  double hi = 1.0;
  bool lo_open = false;
  bool hi_open = false;

  double width() const { return hi - lo; }
  double midpoint() const { return 0.5 * (lo + hi); }

  bool contains(double x) const {
    if (x < lo || x > hi) return false;
    if (lo_open && x == lo) return false;
    if (hi_open && x == hi) return false;
    return true;
  }

  // Membership in the closure, with absolute slack for rounding drift.
  bool contains_closure(double x, double slack = 0.0) const {
    return x >= lo - slack && x <= hi + slack;
  }

  bool valid() const { return std::isfinite(lo) && std::isfinite(hi) && lo < hi; }
};

}  // namespace singerkit
