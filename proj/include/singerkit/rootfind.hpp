#pragma once

#include <cmath>
#include <utility>

namespace singerkit {

struct RootResult {
  double x = 0.0;
  double f = 0.0;
  bool converged = false;
  int iterations = 0;
};

// Safeguarded Newton on a bracketed sign change: Newton steps that stay
// inside the bracket and shrink fast enough, bisection otherwise, so the
// bracket is never lost. fdf(x) returns {f(x), f'(x)}. Requires
// f(lo) and f(hi) of opposite sign (either may be exactly zero).
template <class Fdf>
RootResult refine_bracketed(Fdf&& fdf, double lo, double hi, double flo, double fhi,
                            int max_iter = 50) {
  if (flo == 0.0) return {lo, 0.0, true, 0};
  if (fhi == 0.0) return {hi, 0.0, true, 0};

  double xl = lo, xh = hi;
  if (flo > 0.0) {
    xl = hi;
    xh = lo;
  }
  double rts = 0.5 * (lo + hi);
  double dxold = std::abs(hi - lo);
  double dx = dxold;
  auto [f, df] = fdf(rts);
  for (int it = 1; it <= max_iter; ++it) {
    const bool newton_bad =
        (((rts - xh) * df - f) * ((rts - xl) * df - f) > 0.0) ||
        (std::abs(2.0 * f) > std::abs(dxold * df));
    if (newton_bad) {
      dxold = dx;
      dx = 0.5 * (xh - xl);
      rts = xl + dx;
      if (rts == xl) return {rts, f, true, it};
    } else {
      dxold = dx;
      dx = f / df;
      const double tmp = rts;
      rts -= dx;
      if (tmp == rts) return {rts, f, true, it};
    }
    if (std::abs(dx) < 4.0 * 2.220446049250313e-16 * (1.0 + std::abs(rts)))
      return {rts, f, true, it};
    auto [fn, dfn] = fdf(rts);
    f = fn;
    df = dfn;
    if (f == 0.0) return {rts, 0.0, true, it};
    if (f < 0.0)
      xl = rts;
    else
      xh = rts;
  }
  return {rts, f, false, max_iter};
}

}  // namespace singerkit
