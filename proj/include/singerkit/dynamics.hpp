#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "exec.hpp"
#include "expr.hpp"
#include "settings.hpp"

namespace singerkit {

enum class Stability : unsigned char { Attracting, Neutral, Repelling };

const char* stability_name(Stability s);

// One full cycle in forward-orbit order starting from the smallest point:
// f(points[i]) = points[(i+1) mod period] within 1e-9. period is minimal.
struct PeriodicOrbit {
  std::vector<double> points;
  int period = 1;
  double multiplier = 0.0;  // (f^period)' at points[0]
  Stability stability = Stability::Repelling;
};

struct CriticalPoint {
  double x = 0.0;
  bool nondegenerate = false;  // |f''(x)| above vanish_threshold
};

// Roots of f'. Sign-change brackets are Newton-refined; flat tangential
// zeros (f' touching zero, as in x^3) are caught by a dip scan of |f'|.
std::vector<CriticalPoint> critical_points(const MapSpec& map, int grid_size,
                                           const Settings& st = {},
                                           Exec exec = Exec::Parallel);

struct OrbitScan {
  std::vector<PeriodicOrbit> orbits;  // ordered by (period, smallest point)
  int dropped = 0;                    // candidates whose refinement failed
};

OrbitScan find_periodic_orbits(const MapSpec& map, int max_period, int grid_size,
                               const Settings& st = {}, Exec exec = Exec::Parallel);

// Max pairwise relative deviation of (f^p)' across the orbit points.
double multiplier_consistency(const PeriodicOrbit& orbit, const MapSpec& map);

struct OmegaLimit {
  std::vector<double> clusters;  // ascending cluster means
  bool escaped = false;
};

OmegaLimit omega_limit(const MapSpec& map, double x0, long transient, int window,
                       const Settings& st = {});

// Per-orbit-point interval estimates of the immediate basin, grown by
// exponential march plus bisection on the convergence predicate.
struct BasinEstimate {
  std::vector<Interval> components;  // aligned with orbit.points
  bool degenerate = false;           // an orbit point failed its own test
  long iter_cap = 0;
  double conv_radius = 0.0;
  double resolution = 0.0;
};

// Convergence predicate used by the basin estimate: iterate f^period from x
// at most basin_iter_cap times, success when the distance to the assigned
// orbit point drops below conv_radius. Exposed for soundness sampling.
bool converges_to_orbit_point(const MapSpec& map, const PeriodicOrbit& orbit,
                              std::size_t point_index, double x, const Settings& st = {});

BasinEstimate immediate_basin(const MapSpec& map, const PeriodicOrbit& orbit,
                              double resolution, const Settings& st = {});

// Long-iteration convergence probe for a neutral orbit; sub-exponential
// approach makes this a loose, capped test and it is reported as raw data.
struct NeutralCheck {
  double start = 0.0;
  double final_distance = 0.0;
  long iterations = 0;  // applications of f^period
  bool converged = false;
};

struct AttractingOrbitReport {
  PeriodicOrbit orbit;
  BasinEstimate basin;
  std::vector<double> contained_critical_points;
  bool contains_boundary = false;  // a component endpoint reaches the domain edge
  bool pass = false;
};

struct NeutralOrbitReport {
  PeriodicOrbit orbit;
  NeutralCheck check;
};

struct SingerReport {
  std::string map_id;
  std::vector<PeriodicOrbit> orbits;
  std::vector<CriticalPoint> criticals;
  std::vector<AttractingOrbitReport> attracting;
  std::vector<NeutralOrbitReport> neutral;
  int dropped_candidates = 0;
  bool pass = true;  // every attracting orbit's basin holds a critical or boundary point
};

SingerReport singer_check(const MapSpec& map, int max_period, int grid_size,
                          const Settings& st = {}, Exec exec = Exec::Parallel);

}  // namespace singerkit
