#pragma once

#include <optional>
#include <vector>

#include "exec.hpp"
#include "expr.hpp"
#include "settings.hpp"

namespace singerkit {

struct SchwarzianValue {
  double value = 0.0;
  bool defined = false;  // false when the derivative vanishes within threshold
};

// Sf from a jet of f (or of an iterate): v3/v1 - 1.5*(v2/v1)^2.
SchwarzianValue schwarzian_from_jet(const Jet3& j, double vanish_threshold);

// S(f^n)(x) from the composed jet of the iterate.
SchwarzianValue schwarzian_at(const MapSpec& map, double x, int n, const Settings& st = {});

// Same quantity by a second route: one-step Schwarzians accumulated through
// the composition law along the orbit, never forming the composed jet.
// Undefined as soon as any orbit point is critical for the remaining steps.
SchwarzianValue schwarzian_iterate_recursive(const MapSpec& map, double x, int n,
                                             const Settings& st = {});

// Relative residual of S(h.g)(x) = Sh(g(x)) * g'(x)^2 + Sg(x), normalized by
// 1 + |S(h.g)(x)|. Left side from the composed jet, right side from two
// independent jet evaluations. nullopt when either derivative vanishes.
std::optional<double> verify_composition_law(const MapSpec& h, const MapSpec& g, double x,
                                             const Settings& st = {});

struct PreconditionError : NumericError {
  using NumericError::NumericError;
};

// Residuals of the derivation steps at a non-vanishing critical point x of
// the derivative of f^(n+1): the cross-derivative constraint, the two
// rearranged forms of the middle term, and the averaged identity
// (f^(n+1))'''/(f^(n+1))' = S(f^n)(f(x)) * f'(x)^2 + Sf(x).
struct ChainReport {
  double x = 0.0;
  int n = 0;  // the composite checked is f^(n+1)
  double constraint_lhs = 0.0;  // (f^n)''(f(x)) * f'(x)^2
  double constraint_rhs = 0.0;  // -(f^n)'(f(x)) * f''(x)
  double constraint_residual = 0.0;
  double rearrange_a_residual = 0.0;  // middle term via ((f^n)''/(f^n)')^2 * f'^2
  double rearrange_b_residual = 0.0;  // middle term via (f''/f')^2
  double identity_residual = 0.0;
  double quotient = 0.0;  // (f^(n+1))'''/(f^(n+1))' at x
  int quotient_sign = 0;  // -1, 0, +1
};

// Throws PreconditionError unless |(f^(n+1))'(x)| > vanish_threshold and
// (f^(n+1))''(x) is zero within crit_tol at the local term scale.
ChainReport identity_chain_check(const MapSpec& map, int n, double x,
                                 const Settings& st = {});

struct NegativitySample {
  double x = 0.0;
  double value = 0.0;
};

// Grid sampling of S(f^n). A clean scan means "no counterexample found on
// this grid", never a proof of negativity on the interval.
struct NegativityReport {
  int n = 1;
  int grid_size = 0;
  int defined_count = 0;
  int undefined_count = 0;  // |(f^n)'| within vanish_threshold at the sample
  int nonfinite_count = 0;  // orbit escaped or hit a singularity
  double min_value = 0.0;   // over defined samples
  double max_value = 0.0;
  double min_x = 0.0;
  double max_x = 0.0;
  int nonnegative_count = 0;
  std::vector<NegativitySample> nonnegative_witnesses;  // first few, capped
  bool all_sampled_negative = false;
};

NegativityReport negativity_scan(const MapSpec& map, int n, int grid_size,
                                 const Settings& st = {}, Exec exec = Exec::Parallel);

}  // namespace singerkit
