#include "singerkit/min_principle.hpp"

#include <algorithm>
#include <cmath>

#include "singerkit/rootfind.hpp"
#include "singerkit/scan.hpp"

namespace singerkit {

namespace {

struct GridJet {
  double v1 = 0.0, v2 = 0.0, v3 = 0.0;
  bool finite = false;
};

std::vector<GridJet> iterate_jets_on_grid(const MapSpec& map, int n,
                                          const std::vector<double>& xs, Exec exec) {
  return map_indices<GridJet>(exec, xs.size(), [&](std::size_t i) {
    const Jet3 j = iterate_jet(map, xs[i], n);
    return GridJet{j.v1, j.v2, j.v3, j.finite};
  });
}

DerivExtremum make_extremum(const MapSpec& map, int n, double x, bool converged,
                            ExtremumKind kind, const Settings& st) {
  const Jet3 j = iterate_jet(map, x, n);
  DerivExtremum e;
  e.x = x;
  e.kind = kind;
  e.g_value = j.v1;
  e.refined =
      converged && j.finite && std::abs(j.v2) <= st.crit_tol * (1.0 + std::abs(j.v3));
  return e;
}

}  // namespace

std::vector<DerivExtremum> find_derivative_extrema(const MapSpec& map, int n, int grid_size,
                                                   const Settings& st, Exec exec) {
  if (n < 1) throw ConfigError("find_derivative_extrema: n must be >= 1");
  if (grid_size < 16) throw ConfigError("find_derivative_extrema: grid_size must be >= 16");

  const std::vector<double> xs = uniform_grid(map.domain, grid_size);
  const std::vector<GridJet> jets = iterate_jets_on_grid(map, n, xs, exec);

  auto fdf = [&](double x) {
    const Jet3 j = iterate_jet(map, x, n);
    return std::pair<double, double>{j.v2, j.v3};
  };

  std::vector<DerivExtremum> out;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const GridJet& a = jets[i];
    const GridJet& b = jets[i + 1];
    // exact zero on an interior grid point: classify by the neighbors
    if (i > 0 && a.finite && a.v2 == 0.0) {
      const GridJet& prev = jets[i - 1];
      if (prev.finite && b.finite && prev.v2 * b.v2 < 0.0) {
        const ExtremumKind kind =
            prev.v2 > 0.0 ? ExtremumKind::LocalMax : ExtremumKind::LocalMin;
        out.push_back(make_extremum(map, n, xs[i], true, kind, st));
      }
      continue;
    }
    if (!a.finite || !b.finite) continue;
    if (!(a.v2 * b.v2 < 0.0)) continue;
    const ExtremumKind kind = a.v2 > 0.0 ? ExtremumKind::LocalMax : ExtremumKind::LocalMin;
    const RootResult r = refine_bracketed(fdf, xs[i], xs[i + 1], a.v2, b.v2);
    out.push_back(make_extremum(map, n, r.x, r.converged, kind, st));
  }
  return out;  // ordered by x because brackets are
}

MinPrincipleReport classify_extrema(int n, std::vector<DerivExtremum> extrema,
                                    const Settings& st) {
  MinPrincipleReport rep;
  rep.n = n;
  for (const DerivExtremum& e : extrema) {
    const bool bad = e.kind == ExtremumKind::LocalMax ? e.g_value <= st.violation_tol
                                                      : e.g_value >= -st.violation_tol;
    if (bad) rep.violations.push_back(e);
  }
  rep.extrema = std::move(extrema);
  return rep;
}

MinPrincipleCheck check_minimum_principle_on(const std::vector<DerivExtremum>& extrema,
                                             const Interval& J, const MapSpec& map, int n,
                                             const Settings& st, Exec exec) {
  if (n < 1) throw ConfigError("check_minimum_principle_on: n must be >= 1");
  if (!J.valid()) throw ConfigError("check_minimum_principle_on: J must be a finite interval");

  MinPrincipleCheck chk;
  chk.J = J;
  chk.n = n;

  const std::vector<double> xs = uniform_grid(J, std::max(st.grid_size, 16));
  const std::vector<GridJet> jets = iterate_jets_on_grid(map, n, xs, exec);

  // precondition of the principle: g has no zero inside J
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!jets[i].finite) continue;
    if (std::abs(jets[i].v1) <= st.vanish_threshold) {
      chk.status = MinPrincipleStatus::VanishingOnJ;
      chk.witness_x = xs[i];
      return chk;
    }
    if (i + 1 < xs.size() && jets[i + 1].finite && jets[i].v1 * jets[i + 1].v1 < 0.0) {
      auto fdf = [&](double x) {
        const Jet3 j = iterate_jet(map, x, n);
        return std::pair<double, double>{j.v1, j.v2};
      };
      const RootResult r = refine_bracketed(fdf, xs[i], xs[i + 1], jets[i].v1, jets[i + 1].v1);
      chk.status = MinPrincipleStatus::VanishingOnJ;
      chk.witness_x = r.x;
      return chk;
    }
  }
  for (const DerivExtremum& e : extrema) {
    if (e.x > J.lo && e.x < J.hi && std::abs(e.g_value) <= st.vanish_threshold) {
      chk.status = MinPrincipleStatus::VanishingOnJ;  // tangential zero of g
      chk.witness_x = e.x;
      return chk;
    }
  }

  chk.endpoint_min = std::min(std::abs(jets.front().v1), std::abs(jets.back().v1));
  bool have_interior = false;
  for (std::size_t i = 1; i + 1 < xs.size(); ++i) {
    if (!jets[i].finite) continue;
    const double v = std::abs(jets[i].v1);
    if (!have_interior || v < chk.interior_min) {
      chk.interior_min = v;
      chk.witness_x = xs[i];
      have_interior = true;
    }
  }
  for (const DerivExtremum& e : extrema) {
    if (e.x <= J.lo || e.x >= J.hi) continue;
    const double v = std::abs(e.g_value);
    if (!have_interior || v < chk.interior_min) {
      chk.interior_min = v;
      chk.witness_x = e.x;
      have_interior = true;
    }
  }

  if (!have_interior) {
    // nothing measurable inside J; report the degenerate tie
    chk.interior_min = chk.endpoint_min;
    chk.degenerate = true;
    chk.status = MinPrincipleStatus::Fail;
    return chk;
  }
  const double diff = chk.interior_min - chk.endpoint_min;
  if (std::abs(diff) <= st.violation_tol) {
    chk.degenerate = true;
    chk.status = MinPrincipleStatus::Fail;
  } else {
    chk.status = diff > 0.0 ? MinPrincipleStatus::Pass : MinPrincipleStatus::Fail;
  }
  return chk;
}

CriticalPointScan find_nonvanishing_critical_points(const MapSpec& map, int m, int grid_size,
                                                    const Settings& st, Exec exec) {
  if (m < 1) throw ConfigError("find_nonvanishing_critical_points: m must be >= 1");
  if (grid_size < 16)
    throw ConfigError("find_nonvanishing_critical_points: grid_size must be >= 16");

  const std::vector<double> xs = uniform_grid(map.domain, grid_size);
  const std::vector<GridJet> jets = iterate_jets_on_grid(map, m, xs, exec);

  bool any_curvature = false;
  for (const GridJet& j : jets)
    if (j.finite && std::abs(j.v2) > st.vanish_threshold) {
      any_curvature = true;
      break;
    }

  CriticalPointScan scan;
  if (!any_curvature) {
    // (f^m)'' vanishes identically at grid scale; every point is critical
    scan.degenerate = true;
    for (std::size_t i = 0; i < xs.size(); ++i)
      if (jets[i].finite && std::abs(jets[i].v1) > st.vanish_threshold)
        scan.points.push_back(xs[i]);
    return scan;
  }

  for (const DerivExtremum& e : find_derivative_extrema(map, m, grid_size, st, exec))
    if (e.refined && std::abs(e.g_value) > st.vanish_threshold) scan.points.push_back(e.x);
  return scan;
}

}  // namespace singerkit
