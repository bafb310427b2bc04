#pragma once

#include <cmath>
#include <cstdlib>
#include <limits>

namespace singerkit {

// Value and first three derivatives of a scalar function at a point.
// finite == false marks a jet that hit a singularity (division by zero, log
// at or below zero, ...) or produced a non-finite component; the components
// of a flagged jet are not meaningful and must not be consumed.
struct Jet3 {
  double v0 = 0.0;
  double v1 = 0.0;
  double v2 = 0.0;
  double v3 = 0.0;
  bool finite = true;
};

inline Jet3 jet_var(double x0) { return {x0, 1.0, 0.0, 0.0, true}; }
inline Jet3 jet_const(double c) { return {c, 0.0, 0.0, 0.0, true}; }

namespace jet_detail {

inline bool components_finite(const Jet3& j) {
  return std::isfinite(j.v0) && std::isfinite(j.v1) && std::isfinite(j.v2) &&
         std::isfinite(j.v3);
}

inline Jet3 checked(Jet3 j) {
  j.finite = j.finite && components_finite(j);
  return j;
}

inline Jet3 flagged() {
  constexpr double qn = std::numeric_limits<double>::quiet_NaN();
  return {qn, qn, qn, qn, false};
}

}  // namespace jet_detail

inline Jet3 add(const Jet3& a, const Jet3& b) {
  return jet_detail::checked(
      {a.v0 + b.v0, a.v1 + b.v1, a.v2 + b.v2, a.v3 + b.v3, a.finite && b.finite});
}

inline Jet3 sub(const Jet3& a, const Jet3& b) {
  return jet_detail::checked(
      {a.v0 - b.v0, a.v1 - b.v1, a.v2 - b.v2, a.v3 - b.v3, a.finite && b.finite});
}

inline Jet3 neg(const Jet3& a) { return {-a.v0, -a.v1, -a.v2, -a.v3, a.finite}; }

// Leibniz to third order: (fg)''' = f'''g + 3 f''g' + 3 f'g'' + f g'''.
inline Jet3 mul(const Jet3& a, const Jet3& b) {
  Jet3 r;
  r.v0 = a.v0 * b.v0;
  r.v1 = a.v1 * b.v0 + a.v0 * b.v1;
  r.v2 = a.v2 * b.v0 + 2.0 * a.v1 * b.v1 + a.v0 * b.v2;
  r.v3 = a.v3 * b.v0 + 3.0 * a.v2 * b.v1 + 3.0 * a.v1 * b.v2 + a.v0 * b.v3;
  r.finite = a.finite && b.finite;
  return jet_detail::checked(r);
}

// 1/g. Flagged when g vanishes at the point.
inline Jet3 recip(const Jet3& g) {
  if (!g.finite || g.v0 == 0.0) return jet_detail::flagged();
  const double inv = 1.0 / g.v0;
  const double inv2 = inv * inv;
  Jet3 r;
  r.v0 = inv;
  r.v1 = -g.v1 * inv2;
  r.v2 = (2.0 * g.v1 * g.v1 - g.v0 * g.v2) * inv2 * inv;
  r.v3 = (6.0 * g.v0 * g.v1 * g.v2 - g.v0 * g.v0 * g.v3 - 6.0 * g.v1 * g.v1 * g.v1) *
         inv2 * inv2;
  r.finite = true;
  return jet_detail::checked(r);
}

// Quotient rule solved for q = a/b from a = q*b (Leibniz). The base lane is
// one plain division so it matches scalar evaluation bit for bit; going
// through recip would round twice.
inline Jet3 div(const Jet3& a, const Jet3& b) {
  if (!a.finite || !b.finite || b.v0 == 0.0) return jet_detail::flagged();
  Jet3 q;
  q.v0 = a.v0 / b.v0;
  q.v1 = (a.v1 - q.v0 * b.v1) / b.v0;
  q.v2 = (a.v2 - 2.0 * q.v1 * b.v1 - q.v0 * b.v2) / b.v0;
  q.v3 = (a.v3 - 3.0 * q.v2 * b.v1 - 3.0 * q.v1 * b.v2 - q.v0 * b.v3) / b.v0;
  q.finite = true;
  return jet_detail::checked(q);
}

// Jet of g∘f from the jet of g at f(x) (outer) and the jet of f at x (inner).
inline Jet3 compose(const Jet3& outer, const Jet3& inner) {
  Jet3 r;
  r.v0 = outer.v0;
  r.v1 = outer.v1 * inner.v1;
  r.v2 = outer.v2 * inner.v1 * inner.v1 + outer.v1 * inner.v2;
  r.v3 = outer.v3 * inner.v1 * inner.v1 * inner.v1 +
         3.0 * outer.v2 * inner.v1 * inner.v2 + outer.v1 * inner.v3;
  r.finite = outer.finite && inner.finite;
  return jet_detail::checked(r);
}

// Base-lane power shared with the plain evaluator so jet v0 and real
// evaluation agree bit for bit. Integer exponents of modest size multiply
// out exactly; everything else goes through std::pow.
inline bool pow_integer_exponent(double k, long& e) {
  if (k != std::nearbyint(k) || std::abs(k) > 64.0) return false;
  e = static_cast<long>(k);
  return true;
}

inline double pow_value(double u, double k) {
  long e = 0;
  if (pow_integer_exponent(k, e)) {
    const unsigned long m = static_cast<unsigned long>(e < 0 ? -e : e);
    double r = 1.0;
    for (unsigned long i = 0; i < m; ++i) r *= u;
    return e < 0 ? 1.0 / r : r;
  }
  return std::pow(u, k);
}

// a^k for constant k. Integer exponents fold by repeated multiplication so
// x^2 at x=0 stays exact; the general branch guards vanishing coefficients
// against 0 * inf.
inline Jet3 pow_const(const Jet3& a, double k) {
  if (!a.finite) return jet_detail::flagged();
  long e = 0;
  if (pow_integer_exponent(k, e)) {
    const unsigned long m = static_cast<unsigned long>(e < 0 ? -e : e);
    Jet3 r = jet_const(1.0);
    for (unsigned long i = 0; i < m; ++i) r = mul(r, a);
    return e < 0 ? recip(r) : r;
  }
  const double u = a.v0;
  const double c1 = k;
  const double c2 = k * (k - 1.0);
  const double c3 = k * (k - 1.0) * (k - 2.0);
  Jet3 outer;
  outer.v0 = std::pow(u, k);
  outer.v1 = (c1 != 0.0) ? c1 * std::pow(u, k - 1.0) : 0.0;
  outer.v2 = (c2 != 0.0) ? c2 * std::pow(u, k - 2.0) : 0.0;
  outer.v3 = (c3 != 0.0) ? c3 * std::pow(u, k - 3.0) : 0.0;
  outer.finite = true;
  return compose(outer, a);
}

enum class Elem : unsigned char { Sin, Cos, Exp, Log, Sqrt, Tanh };

inline Jet3 apply_elementary(Elem fn, const Jet3& a) {
  if (!a.finite) return jet_detail::flagged();
  const double u = a.v0;
  Jet3 outer;
  switch (fn) {
    case Elem::Sin: {
      const double s = std::sin(u), c = std::cos(u);
      outer = {s, c, -s, -c, true};
      break;
    }
    case Elem::Cos: {
      const double s = std::sin(u), c = std::cos(u);
      outer = {c, -s, -c, s, true};
      break;
    }
    case Elem::Exp: {
      const double e = std::exp(u);
      outer = {e, e, e, e, true};
      break;
    }
    case Elem::Log: {
      const double inv = 1.0 / u;
      outer = {std::log(u), inv, -inv * inv, 2.0 * inv * inv * inv, true};
      break;
    }
    case Elem::Sqrt: {
      const double s = std::sqrt(u);
      const double inv = 1.0 / s;
      outer = {s, 0.5 * inv, -0.25 * inv / u, 0.375 * inv / (u * u), true};
      break;
    }
    case Elem::Tanh: {
      const double t = std::tanh(u);
      const double s = 1.0 - t * t;
      outer = {t, s, -2.0 * t * s, s * (6.0 * t * t - 2.0), true};
      break;
    }
  }
  return compose(outer, a);
}

inline Jet3 operator+(const Jet3& a, const Jet3& b) { return add(a, b); }
inline Jet3 operator-(const Jet3& a, const Jet3& b) { return sub(a, b); }
inline Jet3 operator-(const Jet3& a) { return neg(a); }
inline Jet3 operator*(const Jet3& a, const Jet3& b) { return mul(a, b); }
inline Jet3 operator/(const Jet3& a, const Jet3& b) { return div(a, b); }

}  // namespace singerkit
