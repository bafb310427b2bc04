#pragma once

#include <vector>

#include "exec.hpp"
#include "expr.hpp"
#include "settings.hpp"

namespace singerkit {

enum class ExtremumKind : unsigned char { LocalMax, LocalMin };

// Interior extremum of g = (f^n)': a refined root of (f^n)''. kind follows
// the sign change of (f^n)'' across the root (+ to - is a max, - to + a min).
struct DerivExtremum {
  double x = 0.0;
  ExtremumKind kind = ExtremumKind::LocalMax;
  double g_value = 0.0;  // (f^n)'(x)
  bool refined = false;  // residual met crit_tol at the local scale
};

// Brackets sign changes of (f^n)'' on a uniform grid over the map domain and
// refines each with safeguarded Newton ((f^n)''' from the same jets).
// Extrema closer together than the grid spacing can be missed.
std::vector<DerivExtremum> find_derivative_extrema(const MapSpec& map, int n, int grid_size,
                                                   const Settings& st = {},
                                                   Exec exec = Exec::Parallel);

// A local max must be strictly positive and a local min strictly negative;
// anything else (thresholded at violation_tol) lands in violations.
struct MinPrincipleReport {
  int n = 1;
  std::vector<DerivExtremum> extrema;
  std::vector<DerivExtremum> violations;
};

MinPrincipleReport classify_extrema(int n, std::vector<DerivExtremum> extrema,
                                    const Settings& st = {});

enum class MinPrincipleStatus : unsigned char { Pass, Fail, VanishingOnJ };

// |g| on the interior of J against the smaller endpoint value of |g|.
struct MinPrincipleCheck {
  Interval J;
  int n = 1;
  MinPrincipleStatus status = MinPrincipleStatus::Fail;
  double endpoint_min = 0.0;  // min(|g(a)|, |g(b)|)
  double interior_min = 0.0;  // over interior grid samples and refined extrema in J
  double witness_x = 0.0;     // argmin for Fail, zero location for VanishingOnJ
  bool degenerate = false;    // interior and endpoint minima tie within violation_tol
};

// The principle is strict, so ties (constant g) fail with degenerate=true.
// A zero of g inside J voids the precondition and reports VanishingOnJ.
MinPrincipleCheck check_minimum_principle_on(const std::vector<DerivExtremum>& extrema,
                                             const Interval& J, const MapSpec& map, int n,
                                             const Settings& st = {},
                                             Exec exec = Exec::Parallel);

// Non-vanishing critical points of (f^m)': refined roots x of (f^m)'' with
// |(f^m)'(x)| above vanish_threshold. When (f^m)'' vanishes identically on
// the grid (affine maps), every grid point qualifies and degenerate is set.
struct CriticalPointScan {
  std::vector<double> points;
  bool degenerate = false;
};

CriticalPointScan find_nonvanishing_critical_points(const MapSpec& map, int m, int grid_size,
                                                    const Settings& st = {},
                                                    Exec exec = Exec::Parallel);

}  // namespace singerkit
