#pragma once

// Test-side polynomial oracle: exact-coefficient arithmetic for small-degree
// polynomials plus a Sturm-sequence root counter, used to cross-check grid
// bracketing against ground truth for polynomial map families.

#include <cmath>
#include <cstddef>
#include <vector>

namespace poly {

using Poly = std::vector<double>;  // p[i] multiplies x^i

inline void trim(Poly& p, double rel_eps = 0.0) {
  double maxc = 0.0;
  for (double c : p) maxc = std::max(maxc, std::abs(c));
  const double tol = rel_eps * maxc;
  while (p.size() > 1 && std::abs(p.back()) <= tol) p.pop_back();
}

inline int degree(const Poly& p) { return static_cast<int>(p.size()) - 1; }

inline double eval(const Poly& p, double x) {
  double r = 0.0;
  for (std::size_t i = p.size(); i-- > 0;) r = r * x + p[i];
  return r;
}

inline Poly add(const Poly& a, const Poly& b) {
  Poly r(std::max(a.size(), b.size()), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  trim(r);
  return r;
}

inline Poly mul(const Poly& a, const Poly& b) {
  Poly r(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  trim(r);
  return r;
}

inline Poly scale(Poly a, double s) {
  for (double& c : a) c *= s;
  return a;
}

inline Poly deriv(const Poly& p) {
  if (p.size() <= 1) return {0.0};
  Poly r(p.size() - 1);
  for (std::size_t i = 1; i < p.size(); ++i) r[i - 1] = p[i] * static_cast<double>(i);
  trim(r);
  return r;
}

// outer(inner) by Horner over polynomial arithmetic
inline Poly compose(const Poly& outer, const Poly& inner) {
  Poly r = {outer.back()};
  for (std::size_t i = outer.size() - 1; i-- > 0;) {
    r = mul(r, inner);
    r[0] += outer[i];
  }
  trim(r);
  return r;
}

// remainder of a modulo b, with relative trimming to absorb cancellation
inline Poly rem(Poly a, const Poly& b) {
  trim(a, 1e-12);
  while (degree(a) >= degree(b) && !(a.size() == 1 && a[0] == 0.0)) {
    const double q = a.back() / b.back();
    const std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[i + shift] -= q * b[i];
    a.pop_back();
    trim(a, 1e-12);
  }
  return a;
}

struct Sturm {
  std::vector<Poly> chain;
};

inline Sturm sturm(Poly p) {
  trim(p, 1e-14);
  Sturm s;
  s.chain.push_back(p);
  s.chain.push_back(deriv(p));
  while (degree(s.chain.back()) > 0) {
    Poly r = rem(s.chain[s.chain.size() - 2], s.chain.back());
    if (r.size() == 1 && r[0] == 0.0) break;
    // normalize to unit max coefficient; positive scaling preserves signs
    double maxc = 0.0;
    for (double c : r) maxc = std::max(maxc, std::abs(c));
    s.chain.push_back(scale(scale(r, 1.0 / maxc), -1.0));
  }
  return s;
}

inline int sign_changes(const Sturm& s, double x) {
  int changes = 0;
  int prev = 0;
  for (const Poly& p : s.chain) {
    const double v = eval(p, x);
    const int sg = (v > 0.0) - (v < 0.0);
    if (sg == 0) continue;
    if (prev != 0 && sg != prev) ++changes;
    prev = sg;
  }
  return changes;
}

// distinct real roots in (a, b]
inline int count_roots(const Sturm& s, double a, double b) {
  return sign_changes(s, a) - sign_changes(s, b);
}

inline void isolate(const Sturm& s, double a, double b, std::vector<double>& out) {
  const int c = count_roots(s, a, b);
  if (c == 0) return;
  if (c == 1) {
    double lo = a, hi = b;
    while (hi - lo > 1e-13) {
      const double mid = 0.5 * (lo + hi);
      if (count_roots(s, lo, mid) == 1)
        hi = mid;
      else
        lo = mid;
    }
    out.push_back(0.5 * (lo + hi));
    return;
  }
  const double mid = 0.5 * (a + b);
  isolate(s, a, mid, out);
  isolate(s, mid, b, out);
}

// distinct real roots of p in (a, b], ascending
inline std::vector<double> roots_in(const Poly& p, double a, double b) {
  std::vector<double> out;
  isolate(sturm(p), a, b, out);
  return out;
}

}  // namespace poly
