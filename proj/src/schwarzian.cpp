#include "singerkit/schwarzian.hpp"

#include <algorithm>
#include <cmath>

#include "singerkit/scan.hpp"

namespace singerkit {

SchwarzianValue schwarzian_from_jet(const Jet3& j, double vanish_threshold) {
  if (!j.finite || std::abs(j.v1) <= vanish_threshold) return {0.0, false};
  const double a = j.v3 / j.v1;
  const double b = j.v2 / j.v1;
  return {a - 1.5 * b * b, true};
}

SchwarzianValue schwarzian_at(const MapSpec& map, double x, int n, const Settings& st) {
  if (n < 1) throw ConfigError("schwarzian_at: n must be >= 1");
  return schwarzian_from_jet(iterate_jet(map, x, n), st.vanish_threshold);
}

SchwarzianValue schwarzian_iterate_recursive(const MapSpec& map, double x, int n,
                                             const Settings& st) {
  if (n < 1) throw ConfigError("schwarzian_iterate_recursive: n must be >= 1");
  double acc = 0.0;   // S(f^k)(x)
  double deriv = 1.0; // (f^k)'(x)
  double y = x;
  for (int k = 0; k < n; ++k) {
    const Jet3 j = eval_jet(map, jet_var(y));
    const SchwarzianValue step = schwarzian_from_jet(j, st.vanish_threshold);
    if (!step.defined) return {0.0, false};
    // S(f^(k+1))(x) = Sf(f^k(x)) * ((f^k)'(x))^2 + S(f^k)(x)
    acc = step.value * deriv * deriv + acc;
    deriv *= j.v1;
    y = j.v0;
  }
  return {acc, true};
}

std::optional<double> verify_composition_law(const MapSpec& h, const MapSpec& g, double x,
                                             const Settings& st) {
  const Jet3 jg = eval_jet(g, jet_var(x));
  const SchwarzianValue sg = schwarzian_from_jet(jg, st.vanish_threshold);
  if (!sg.defined) return std::nullopt;
  const Jet3 jh = eval_jet(h, jet_var(jg.v0));
  const SchwarzianValue sh = schwarzian_from_jet(jh, st.vanish_threshold);
  if (!sh.defined) return std::nullopt;
  const SchwarzianValue shg = schwarzian_from_jet(compose(jh, jg), st.vanish_threshold);
  if (!shg.defined) return std::nullopt;
  const double rhs = sh.value * jg.v1 * jg.v1 + sg.value;
  return std::abs(shg.value - rhs) / (1.0 + std::abs(shg.value));
}

ChainReport identity_chain_check(const MapSpec& map, int n, double x, const Settings& st) {
  if (n < 1) throw ConfigError("identity_chain_check: n must be >= 1");
  const Jet3 jf = eval_jet(map, jet_var(x));
  if (!jf.finite) throw NumericError("identity_chain_check: f is singular at x");
  const Jet3 jn = iterate_jet(map, jf.v0, n);
  if (!jn.finite) throw NumericError("identity_chain_check: orbit of f(x) is singular");
  const Jet3 jm = compose(jn, jf);  // jet of f^(n+1) at x

  const double L = jn.v2 * jf.v1 * jf.v1;
  const double R = -jn.v1 * jf.v2;
  const double scale = 1.0 + std::abs(jm.v3) + std::abs(L) + std::abs(R);
  if (std::abs(jm.v1) <= st.vanish_threshold)
    throw PreconditionError("identity_chain_check: derivative of the iterate vanishes at x");
  if (std::abs(jm.v2) > st.crit_tol * scale)
    throw PreconditionError(
        "identity_chain_check: x is not a critical point of the iterate derivative");
  if (std::abs(jf.v1) <= st.vanish_threshold || std::abs(jn.v1) <= st.vanish_threshold)
    throw PreconditionError("identity_chain_check: a chain factor derivative vanishes");

  ChainReport rep;
  rep.x = x;
  rep.n = n;
  rep.constraint_lhs = L;
  rep.constraint_rhs = R;
  rep.constraint_residual =
      std::abs(L - R) / (1.0 + std::max(std::abs(L), std::abs(R)));

  const double fp2 = jf.v1 * jf.v1;
  const double t1 = jn.v3 / jn.v1 * fp2;
  const double t3 = jf.v3 / jf.v1;
  const double ra = jn.v2 / jn.v1;
  const double rb = jf.v2 / jf.v1;
  const double q_direct = jm.v3 / jm.v1;
  const double q_a = t1 - 3.0 * ra * ra * fp2 + t3;
  const double q_b = t1 - 3.0 * rb * rb + t3;
  const double sn = schwarzian_from_jet(jn, st.vanish_threshold).value;
  const double sf = schwarzian_from_jet(jf, st.vanish_threshold).value;
  const double q_final = sn * fp2 + sf;

  const double den = 1.0 + std::abs(q_direct);
  rep.rearrange_a_residual = std::abs(q_direct - q_a) / den;
  rep.rearrange_b_residual = std::abs(q_direct - q_b) / den;
  rep.identity_residual = std::abs(q_direct - q_final) / den;
  rep.quotient = q_direct;
  rep.quotient_sign = (q_direct > 0.0) - (q_direct < 0.0);
  return rep;
}

NegativityReport negativity_scan(const MapSpec& map, int n, int grid_size,
                                 const Settings& st, Exec exec) {
  if (n < 1) throw ConfigError("negativity_scan: n must be >= 1");
  if (grid_size < 2) throw ConfigError("negativity_scan: grid_size must be >= 2");

  const std::vector<double> xs = uniform_grid(map.domain, grid_size);
  struct Sample {
    double value = 0.0;
    bool defined = false;
    bool finite = true;
  };
  const std::vector<Sample> samples =
      map_indices<Sample>(exec, xs.size(), [&](std::size_t i) {
        const Jet3 j = iterate_jet(map, xs[i], n);
        if (!j.finite) return Sample{0.0, false, false};
        const SchwarzianValue s = schwarzian_from_jet(j, st.vanish_threshold);
        return Sample{s.value, s.defined, true};
      });

  NegativityReport rep;
  rep.n = n;
  rep.grid_size = grid_size;
  constexpr std::size_t witness_cap = 16;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const Sample& s = samples[i];
    if (!s.finite) {
      ++rep.nonfinite_count;
      continue;
    }
    if (!s.defined) {
      ++rep.undefined_count;
      continue;
    }
    if (rep.defined_count == 0 || s.value < rep.min_value) {
      rep.min_value = s.value;
      rep.min_x = xs[i];
    }
    if (rep.defined_count == 0 || s.value > rep.max_value) {
      rep.max_value = s.value;
      rep.max_x = xs[i];
    }
    ++rep.defined_count;
    if (s.value >= 0.0) {
      ++rep.nonnegative_count;
      if (rep.nonnegative_witnesses.size() < witness_cap)
        rep.nonnegative_witnesses.push_back({xs[i], s.value});
    }
  }
  rep.all_sampled_negative = rep.defined_count > 0 && rep.nonnegative_count == 0;
  return rep;
}

}  // namespace singerkit
