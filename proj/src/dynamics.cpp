#include "singerkit/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "singerkit/jet.hpp"
#include "singerkit/rootfind.hpp"
#include "singerkit/scan.hpp"

namespace singerkit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Orbits that drift outside the domain by more than this are treated as
// escaped; true interval maps only leave by rounding.
constexpr double kEscapeSlack = 1e-12;

Stability classify(double multiplier, const Settings& st) {
  const double m = std::abs(multiplier);
  if (m < 1.0 - st.neutral_band) return Stability::Attracting;
  if (std::abs(m - 1.0) <= st.neutral_band) return Stability::Neutral;
  return Stability::Repelling;
}

double orbit_distance(const PeriodicOrbit& orbit, double y) {
  double d = kInf;
  for (double q : orbit.points) d = std::min(d, std::abs(y - q));
  return d;
}

// One-sided long-iteration probe for a neutral orbit. Convergence is
// sub-exponential at best, so the cap and tolerance are loose by design and
// a negative result is data, not a verdict.
NeutralCheck neutral_convergence(const MapSpec& map, const PeriodicOrbit& orbit,
                                 const Settings& st) {
  const Interval& I = map.domain;
  const double pt = orbit.points.front();
  double x0 = pt + std::copysign(0.0667 * I.width(), I.midpoint() - pt);
  x0 = std::min(std::max(x0, I.lo + 1e-3 * I.width()), I.hi - 1e-3 * I.width());

  NeutralCheck chk;
  chk.start = x0;
  double y = x0;
  chk.final_distance = orbit_distance(orbit, y);
  for (long it = 1; it <= st.neutral_iter_cap; ++it) {
    for (int k = 0; k < orbit.period; ++k) y = eval_real(map, y);
    chk.iterations = it;
    if (!std::isfinite(y) || !I.contains_closure(y, kEscapeSlack)) return chk;
    chk.final_distance = orbit_distance(orbit, y);
    if (chk.final_distance <= st.neutral_tol) {
      chk.converged = true;
      return chk;
    }
  }
  return chk;
}

}  // namespace

const char* stability_name(Stability s) {
  switch (s) {
    case Stability::Attracting: return "attracting";
    case Stability::Neutral: return "neutral";
    case Stability::Repelling: return "repelling";
  }
  return "?";
}

std::vector<CriticalPoint> critical_points(const MapSpec& map, int grid_size,
                                           const Settings& st, Exec exec) {
  if (grid_size < 16) throw ConfigError("critical_points: grid_size must be at least 16");

  const std::vector<double> xs = uniform_grid(map.domain, grid_size);
  struct Sample {
    double v1 = 0.0;
    bool finite = false;
  };
  const auto d = map_indices<Sample>(exec, xs.size(), [&](std::size_t i) {
    const Jet3 j = eval_jet(map, jet_var(xs[i]));
    return Sample{j.v1, j.finite};
  });

  const auto fdf = [&](double x) {
    const Jet3 j = eval_jet(map, jet_var(x));
    return std::pair<double, double>{j.v1, j.v2};
  };

  double vmax = 0.0;
  for (const auto& s : d)
    if (s.finite) vmax = std::max(vmax, std::abs(s.v1));
  const double dip_trigger = 1e-3 * (1.0 + vmax);

  std::vector<double> roots;
  const std::size_t n = xs.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (!d[i].finite) continue;
    if (d[i].v1 == 0.0) {
      roots.push_back(xs[i]);
      continue;
    }
    if (i + 1 < n && d[i + 1].finite && d[i + 1].v1 != 0.0 &&
        std::signbit(d[i].v1) != std::signbit(d[i + 1].v1)) {
      const RootResult r = refine_bracketed(fdf, xs[i], xs[i + 1], d[i].v1, d[i + 1].v1);
      if (r.converged) roots.push_back(r.x);
      continue;
    }
    // Tangential zeros of f' never change sign (x^3 at the origin); chase a
    // deep enough dip of |f'| with Newton and keep it only if f' vanishes.
    if (i > 0 && i + 1 < n && d[i - 1].finite && d[i + 1].finite &&
        std::signbit(d[i - 1].v1) == std::signbit(d[i + 1].v1) &&
        std::abs(d[i].v1) <= std::abs(d[i - 1].v1) &&
        std::abs(d[i].v1) <= std::abs(d[i + 1].v1) &&
        std::abs(d[i].v1) < dip_trigger) {
      double x = xs[i];
      const double lo = xs[i - 1], hi = xs[i + 1];
      for (int it = 0; it < 80; ++it) {
        const auto [f, df] = fdf(x);
        if (f == 0.0 || df == 0.0 || !std::isfinite(f) || !std::isfinite(df)) break;
        const double nx = x - f / df;
        if (!(nx >= lo && nx <= hi) || nx == x) break;
        x = nx;
      }
      if (std::abs(fdf(x).first) <= st.vanish_threshold) roots.push_back(x);
    }
  }

  std::sort(roots.begin(), roots.end());
  std::vector<CriticalPoint> out;
  for (double r : roots) {
    if (!out.empty() && r - out.back().x <= st.dedupe_tol) continue;
    const Jet3 j = eval_jet(map, jet_var(r));
    out.push_back({r, std::abs(j.v2) > st.vanish_threshold});
  }
  return out;
}

OrbitScan find_periodic_orbits(const MapSpec& map, int max_period, int grid_size,
                               const Settings& st, Exec exec) {
  if (max_period < 1) throw ConfigError("find_periodic_orbits: max_period must be positive");
  if (grid_size < 16) throw ConfigError("find_periodic_orbits: grid_size must be at least 16");

  const std::vector<double> xs = uniform_grid(map.domain, grid_size);
  const std::size_t n = xs.size();
  OrbitScan scan;

  for (int p = 1; p <= max_period; ++p) {
    const auto res = map_indices<double>(exec, n, [&](std::size_t i) {
      return iterate_value(map, xs[i], p) - xs[i];
    });
    const auto fdf = [&](double x) {
      const Jet3 j = iterate_jet(map, x, p);
      return std::pair<double, double>{j.v0 - x, j.v1 - 1.0};
    };

    std::vector<double> cand;
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isfinite(res[i])) continue;
      if (res[i] == 0.0) {
        cand.push_back(xs[i]);
        continue;
      }
      if (i + 1 < n && std::isfinite(res[i + 1]) && res[i + 1] != 0.0 &&
          std::signbit(res[i]) != std::signbit(res[i + 1])) {
        const RootResult r = refine_bracketed(fdf, xs[i], xs[i + 1], res[i], res[i + 1]);
        if (r.converged)
          cand.push_back(r.x);
        else
          ++scan.dropped;
        continue;
      }
      // Tangential roots (multiplier 1) never cross zero. Slide dips of the
      // residual to their bottom via Newton on its slope and keep actual
      // touches; a bare bracketing pass would miss these entirely.
      if (i > 0 && i + 1 < n && std::isfinite(res[i - 1]) && std::isfinite(res[i + 1]) &&
          std::signbit(res[i - 1]) == std::signbit(res[i + 1]) &&
          std::abs(res[i]) <= std::abs(res[i - 1]) &&
          std::abs(res[i]) <= std::abs(res[i + 1]) && std::abs(res[i]) < 1e-6) {
        double x = xs[i];
        const double lo = xs[i - 1], hi = xs[i + 1];
        for (int it = 0; it < 60; ++it) {
          const Jet3 j = iterate_jet(map, x, p);
          const double g = j.v1 - 1.0;
          if (g == 0.0 || j.v2 == 0.0 || !j.finite) break;
          const double nx = x - g / j.v2;
          if (!(nx >= lo && nx <= hi) || nx == x) break;
          x = nx;
        }
        if (std::abs(iterate_value(map, x, p) - x) < st.tangency_tol) cand.push_back(x);
      }
    }

    std::sort(cand.begin(), cand.end());
    std::vector<double> pts;
    for (double c : cand)
      if (pts.empty() || c - pts.back() > st.dedupe_tol) pts.push_back(c);

    std::vector<bool> used(pts.size(), false);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (used[i]) continue;
      used[i] = true;
      const double x0 = pts[i];

      // Positional uncertainty of the candidate: cancellation noise of
      // f^p(x)-x over its local slope. At a period-doubling parameter the
      // doubled cycle collapses onto the old one and the residual near the
      // multiple root is pure noise; a fixed-tolerance divisor test would
      // then let a phantom cycle through at the noise offset.
      const Jet3 jp = iterate_jet(map, x0, p);
      const double noise =
          64.0 * 2.220446049250313e-16 * (1.0 + std::abs(x0)) * (1.0 + std::abs(jp.v1));
      const double delta = std::min(noise / std::max(std::abs(jp.v1 - 1.0), 1e-300),
                                    1e-4 * map.domain.width());

      // Orbits whose minimal period divides p were already found at that period.
      bool divisor = false;
      for (int dv = 1; dv < p && !divisor; ++dv) {
        if (p % dv != 0) continue;
        const Jet3 jd = iterate_jet(map, x0, dv);
        if (std::abs(jd.v0 - x0) <= st.min_period_tol + (1.0 + std::abs(jd.v1)) * delta)
          divisor = true;
      }
      if (divisor) continue;

      PeriodicOrbit orb;
      orb.period = p;
      orb.points.resize(static_cast<std::size_t>(p));
      double y = x0;
      for (int k = 0; k < p; ++k) {
        orb.points[static_cast<std::size_t>(k)] = y;
        // claim candidates that are this orbit seen from another phase
        auto it = std::lower_bound(pts.begin(), pts.end(), y - st.dedupe_tol);
        for (; it != pts.end() && *it <= y + st.dedupe_tol; ++it)
          used[static_cast<std::size_t>(it - pts.begin())] = true;
        y = eval_real(map, y);
      }
      const auto mn = std::min_element(orb.points.begin(), orb.points.end());
      std::rotate(orb.points.begin(), mn, orb.points.end());

      orb.multiplier = iterate_jet(map, orb.points.front(), p).v1;
      orb.stability = classify(orb.multiplier, st);
      scan.orbits.push_back(std::move(orb));
    }
  }
  return scan;
}

double multiplier_consistency(const PeriodicOrbit& orbit, const MapSpec& map) {
  if (orbit.points.empty()) return 0.0;
  double mn = kInf, mx = -kInf, amax = 0.0;
  for (double pt : orbit.points) {
    const double m = iterate_jet(map, pt, orbit.period).v1;
    mn = std::min(mn, m);
    mx = std::max(mx, m);
    amax = std::max(amax, std::abs(m));
  }
  return (mx - mn) / std::max(1.0, amax);
}

OmegaLimit omega_limit(const MapSpec& map, double x0, long transient, int window,
                       const Settings& st) {
  if (transient < 1 || window < 1)
    throw ConfigError("omega_limit: transient and window must be positive");

  OmegaLimit out;
  double y = x0;
  for (long t = 0; t < transient; ++t) {
    y = eval_real(map, y);
    if (!std::isfinite(y) || !map.domain.contains_closure(y, kEscapeSlack)) {
      out.escaped = true;
      return out;
    }
  }
  std::vector<double> w(static_cast<std::size_t>(window));
  for (int k = 0; k < window; ++k) {
    w[static_cast<std::size_t>(k)] = y;
    if (k + 1 == window) break;
    y = eval_real(map, y);
    if (!std::isfinite(y) || !map.domain.contains_closure(y, kEscapeSlack)) {
      out.escaped = true;
      return out;
    }
  }

  std::sort(w.begin(), w.end());
  double sum = w.front();
  int count = 1;
  for (std::size_t i = 1; i < w.size(); ++i) {
    if (w[i] - w[i - 1] > st.cluster_tol) {
      out.clusters.push_back(sum / count);
      sum = 0.0;
      count = 0;
    }
    sum += w[i];
    ++count;
  }
  out.clusters.push_back(sum / count);
  return out;
}

bool converges_to_orbit_point(const MapSpec& map, const PeriodicOrbit& orbit,
                              std::size_t point_index, double x, const Settings& st) {
  const double target = orbit.points.at(point_index);
  double y = x;
  for (long it = 0; it < st.basin_iter_cap; ++it) {
    for (int k = 0; k < orbit.period; ++k) {
      y = eval_real(map, y);
      if (!std::isfinite(y)) return false;
    }
    if (std::abs(y - target) < st.conv_radius) return true;
  }
  return false;
}

BasinEstimate immediate_basin(const MapSpec& map, const PeriodicOrbit& orbit,
                              double resolution, const Settings& st) {
  if (!(resolution > 0.0)) throw ConfigError("immediate_basin: resolution must be positive");
  if (orbit.stability == Stability::Repelling)
    throw ConfigError("immediate_basin: orbit must be attracting or neutral");

  BasinEstimate est;
  est.iter_cap = st.basin_iter_cap;
  est.conv_radius = st.conv_radius;
  est.resolution = resolution;
  est.components.resize(orbit.points.size());

  const Interval& I = map.domain;
  for (std::size_t k = 0; k < orbit.points.size(); ++k) {
    const double pt = orbit.points[k];
    const auto ok = [&](double x) { return converges_to_orbit_point(map, orbit, k, x, st); };

    if (!ok(pt)) {
      est.degenerate = true;
      est.components[k] = Interval{pt, pt};
      continue;
    }

    // March out geometrically, bisect the last bracket down to `resolution`.
    // The step is capped so a macroscopic non-converging zone cannot be
    // leapt over into a far same-phase island of the basin.
    const auto edge = [&](double dir, double limit) {
      const double step_cap = std::max(resolution, 0.0625 * I.width());
      double step = resolution;
      double offset = 0.0;
      double good = pt;
      double bad = 0.0;
      bool have_bad = false;
      while (!have_bad) {
        offset += step;
        double probe = pt + dir * offset;
        const bool clipped = dir > 0.0 ? probe >= limit : probe <= limit;
        if (clipped) probe = limit;
        if (ok(probe)) {
          good = probe;
          if (clipped) return limit;
          step = std::min(step * 2.0, step_cap);
        } else {
          bad = probe;
          have_bad = true;
        }
      }
      while (std::abs(bad - good) > resolution) {
        const double mid = 0.5 * (good + bad);
        if (mid == good || mid == bad) break;
        if (ok(mid))
          good = mid;
        else
          bad = mid;
      }
      return good;
    };

    // The capped convergence test can fail inside the true component where
    // approach is slow, and the reported interval must not contain failing
    // points. Audit from the orbit point outward and stop at the first
    // failure, tightening by bisection.
    const auto audited = [&](double endpoint) {
      constexpr int kAudit = 32;
      double good = pt;
      for (int s = 1; s <= kAudit; ++s) {
        const double x = pt + (endpoint - pt) * s / kAudit;
        if (x == good) continue;
        if (!ok(x)) {
          double g = good, b = x;
          while (std::abs(b - g) > resolution) {
            const double mid = 0.5 * (g + b);
            if (mid == g || mid == b) break;
            if (ok(mid))
              g = mid;
            else
              b = mid;
          }
          return g;
        }
        good = x;
      }
      return endpoint;
    };

    Interval comp;
    comp.lo = audited(edge(-1.0, I.lo));
    comp.hi = audited(edge(+1.0, I.hi));
    est.components[k] = comp;
  }
  return est;
}

SingerReport singer_check(const MapSpec& map, int max_period, int grid_size,
                          const Settings& st, Exec exec) {
  SingerReport rep;
  rep.map_id = map.id();

  OrbitScan scan = find_periodic_orbits(map, max_period, grid_size, st, exec);
  rep.dropped_candidates = scan.dropped;
  rep.orbits = std::move(scan.orbits);
  rep.criticals = critical_points(map, grid_size, st, exec);

  std::vector<std::size_t> att, neu;
  for (std::size_t i = 0; i < rep.orbits.size(); ++i) {
    if (rep.orbits[i].stability == Stability::Attracting) att.push_back(i);
    if (rep.orbits[i].stability == Stability::Neutral) neu.push_back(i);
  }

  rep.attracting =
      map_indices<AttractingOrbitReport>(exec, att.size(), [&](std::size_t a) {
        const PeriodicOrbit& orb = rep.orbits[att[a]];
        AttractingOrbitReport r;
        r.orbit = orb;
        r.basin = immediate_basin(map, orb, st.basin_resolution, st);
        for (const CriticalPoint& c : rep.criticals)
          for (const Interval& comp : r.basin.components)
            if (comp.contains(c.x)) {
              r.contained_critical_points.push_back(c.x);
              break;
            }
        for (const Interval& comp : r.basin.components)
          if (comp.lo <= map.domain.lo + st.basin_resolution ||
              comp.hi >= map.domain.hi - st.basin_resolution)
            r.contains_boundary = true;
        r.pass = !r.basin.degenerate &&
                 (!r.contained_critical_points.empty() || r.contains_boundary);
        return r;
      });

  rep.neutral.reserve(neu.size());
  for (std::size_t idx : neu) {
    NeutralOrbitReport nr;
    nr.orbit = rep.orbits[idx];
    nr.check = neutral_convergence(map, nr.orbit, st);
    rep.neutral.push_back(std::move(nr));
  }

  for (const AttractingOrbitReport& a : rep.attracting) rep.pass = rep.pass && a.pass;
  return rep;
}

}  // namespace singerkit
