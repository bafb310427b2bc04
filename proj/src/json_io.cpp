#include "singerkit/json_io.hpp"

namespace singerkit {

Json to_json(const Settings& st) {
  return Json{{"vanish_threshold", st.vanish_threshold},
              {"crit_tol", st.crit_tol},
              {"neutral_band", st.neutral_band},
              {"violation_tol", st.violation_tol},
              {"grid_size", st.grid_size},
              {"max_period", st.max_period},
              {"dedupe_tol", st.dedupe_tol},
              {"tangency_tol", st.tangency_tol},
              {"min_period_tol", st.min_period_tol},
              {"conv_radius", st.conv_radius},
              {"basin_iter_cap", st.basin_iter_cap},
              {"basin_resolution", st.basin_resolution},
              {"neutral_iter_cap", st.neutral_iter_cap},
              {"neutral_tol", st.neutral_tol},
              {"transient", st.transient},
              {"window", st.window},
              {"cluster_tol", st.cluster_tol},
              {"comp_samples", st.comp_samples},
              {"seed", st.seed}};
}

Json to_json(const Interval& J) { return Json{{"lo", J.lo}, {"hi", J.hi}}; }

Json to_json(const NegativityReport& r) {
  Json witnesses = Json::array();
  for (const auto& w : r.nonnegative_witnesses)
    witnesses.push_back(Json{{"x", w.x}, {"value", w.value}});
  return Json{{"n", r.n},
              {"grid_size", r.grid_size},
              {"defined_count", r.defined_count},
              {"undefined_count", r.undefined_count},
              {"nonfinite_count", r.nonfinite_count},
              {"min_value", r.min_value},
              {"max_value", r.max_value},
              {"min_x", r.min_x},
              {"max_x", r.max_x},
              {"nonnegative_count", r.nonnegative_count},
              {"nonnegative_witnesses", witnesses},
              {"all_sampled_negative", r.all_sampled_negative}};
}

Json to_json(const ChainReport& r) {
  return Json{{"x", r.x},
              {"n", r.n},
              {"constraint_lhs", r.constraint_lhs},
              {"constraint_rhs", r.constraint_rhs},
              {"constraint_residual", r.constraint_residual},
              {"rearrange_a_residual", r.rearrange_a_residual},
              {"rearrange_b_residual", r.rearrange_b_residual},
              {"identity_residual", r.identity_residual},
              {"quotient", r.quotient},
              {"quotient_sign", r.quotient_sign}};
}

Json to_json(const DerivExtremum& e) {
  return Json{{"x", e.x},
              {"kind", e.kind == ExtremumKind::LocalMax ? "max" : "min"},
              {"g_value", e.g_value},
              {"refined", e.refined}};
}

Json to_json(const MinPrincipleReport& r) {
  Json extrema = Json::array();
  for (const auto& e : r.extrema) extrema.push_back(to_json(e));
  Json violations = Json::array();
  for (const auto& e : r.violations) violations.push_back(to_json(e));
  return Json{{"n", r.n}, {"extrema", extrema}, {"violations", violations}};
}

Json to_json(const PeriodicOrbit& o) {
  return Json{{"points", o.points},
              {"period", o.period},
              {"multiplier", o.multiplier},
              {"stability", stability_name(o.stability)}};
}

Json to_json(const CriticalPoint& c) {
  return Json{{"x", c.x}, {"nondegenerate", c.nondegenerate}};
}

Json to_json(const BasinEstimate& b) {
  Json comps = Json::array();
  for (const auto& c : b.components) comps.push_back(to_json(c));
  return Json{{"components", comps},
              {"degenerate", b.degenerate},
              {"iter_cap", b.iter_cap},
              {"conv_radius", b.conv_radius},
              {"resolution", b.resolution}};
}

Json to_json(const NeutralCheck& c) {
  return Json{{"start", c.start},
              {"final_distance", c.final_distance},
              {"iterations", c.iterations},
              {"converged", c.converged}};
}

Json to_json(const SingerReport& r) {
  Json orbits = Json::array();
  for (const auto& o : r.orbits) orbits.push_back(to_json(o));
  Json criticals = Json::array();
  for (const auto& c : r.criticals) criticals.push_back(to_json(c));
  Json attracting = Json::array();
  for (const auto& a : r.attracting)
    attracting.push_back(Json{{"orbit", to_json(a.orbit)},
                              {"basin", to_json(a.basin)},
                              {"contained_critical_points", a.contained_critical_points},
                              {"contains_boundary", a.contains_boundary},
                              {"pass", a.pass}});
  Json neutral = Json::array();
  for (const auto& nr : r.neutral)
    neutral.push_back(Json{{"orbit", to_json(nr.orbit)}, {"check", to_json(nr.check)}});
  return Json{{"map_id", r.map_id},
              {"orbits", orbits},
              {"criticals", criticals},
              {"attracting", attracting},
              {"neutral", neutral},
              {"dropped_candidates", r.dropped_candidates},
              {"pass", r.pass}};
}

Json to_json(const BifurcationRow& row) {
  return Json{{"param", row.param}, {"clusters", row.clusters}, {"escaped", row.escaped}};
}

}  // namespace singerkit
