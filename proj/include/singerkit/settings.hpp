#pragma once

#include <cstdint>

namespace singerkit {

// Numeric knobs shared by the analyses. Every report echoes the settings it
// ran with so results can be reproduced from the output alone.
struct Settings {
  double vanish_threshold = 1e-9;  // |derivative| at or below this counts as vanishing
  double crit_tol = 1e-9;          // acceptance residual for refined critical points
  double neutral_band = 1e-6;      // band around |multiplier| = 1 classified neutral
  double violation_tol = 1e-12;    // strictness threshold for extremum sign checks
  int grid_size = 4096;
  int max_period = 8;
  double dedupe_tol = 1e-8;        // periodic-point dedupe radius
  double tangency_tol = 1e-10;     // dense |f^p(x)-x| scan threshold
  double min_period_tol = 1e-9;    // orbit closure tolerance for exact period
  double conv_radius = 1e-6;       // basin convergence radius
  long basin_iter_cap = 10000;
  double basin_resolution = 1e-6;  // endpoint resolution of basin intervals
  long neutral_iter_cap = 1000000;
  double neutral_tol = 5e-3;       // convergence tolerance for neutral orbits
  long transient = 10000;          // omega-limit transient length
  int window = 64;                 // omega-limit window length
  double cluster_tol = 1e-6;       // omega-limit clustering radius
  int comp_samples = 100;          // composition-law spot checks per report
  std::uint64_t seed = 1;
};

}  // namespace singerkit
