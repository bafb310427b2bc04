#pragma once

#include <optional>
#include <string>
#include <vector>

#include "exec.hpp"
#include "expr.hpp"
#include "settings.hpp"

namespace singerkit {

// start, start+step, ..., up to stop inclusive (within a small absolute
// nudge, so binary-fraction steps that overshoot by an ulp still count).
std::vector<double> sweep_values(double start, double stop, double step);

// Copy of `base` with one parameter rebound; the expression is not reparsed.
MapSpec bind_param(const MapSpec& base, const std::string& name, double value);

struct BifurcationRow {
  double param = 0.0;
  std::vector<double> clusters;
  bool escaped = false;
};

// omega_limit per parameter value, computed in parallel, merged in value
// order. x0 is the same starting point for every row.
std::vector<BifurcationRow> bifurcation_scan(const MapSpec& base, const std::string& param,
                                             const std::vector<double>& values, double x0,
                                             long transient, int window,
                                             const Settings& st = {},
                                             Exec exec = Exec::Parallel);

// Midpoint between the last parameter showing at most `have` clusters and
// the first one at or beyond `want`, scanning forward. Escaped rows carry no
// information and are skipped. nullopt when the transition never happens.
std::optional<double> cluster_transition(const std::vector<BifurcationRow>& rows, int have,
                                         int want);

}  // namespace singerkit
