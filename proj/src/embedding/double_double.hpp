#pragma once

// Minimal double-double arithmetic (unevaluated sum hi + lo, about 106 bits).
// Algorithms follow the usual error-free transforms: TwoSum and FMA TwoProd.

#include <cmath>

namespace ela::embedding::detail {

struct dd {
  double hi = 0.0;
  double lo = 0.0;

  constexpr dd() = default;
  constexpr dd(double h) : hi(h) {}  // NOLINT(google-explicit-constructor)
  constexpr dd(double h, double l) : hi(h), lo(l) {}
};

inline dd quick_two_sum(double a, double b) {
  const double s = a + b;
  return {s, b - (s - a)};
}

inline dd two_sum(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  return {s, (a - (s - bb)) + (b - bb)};
}

inline dd two_prod(double a, double b) {
  const double p = a * b;
  return {p, std::fma(a, b, -p)};
}

inline dd operator+(dd a, dd b) {
  dd s = two_sum(a.hi, b.hi);
  const dd t = two_sum(a.lo, b.lo);
  s.lo += t.hi;
  s = quick_two_sum(s.hi, s.lo);
  s.lo += t.lo;
  return quick_two_sum(s.hi, s.lo);
}

inline dd operator-(dd a) { return {-a.hi, -a.lo}; }
inline dd operator-(dd a, dd b) { return a + (-b); }

inline dd operator*(dd a, dd b) {
  dd p = two_prod(a.hi, b.hi);
  p.lo += a.hi * b.lo + a.lo * b.hi;
  return quick_two_sum(p.hi, p.lo);
}

inline dd operator/(dd a, dd b) {
  const double q1 = a.hi / b.hi;
  const dd r = a - b * dd(q1);
  const double q2 = r.hi / b.hi;
  const dd r2 = r - b * dd(q2);
  const double q3 = r2.hi / b.hi;
  return quick_two_sum(q1, q2) + dd(q3);
}

inline dd& operator+=(dd& a, dd b) { return a = a + b; }

inline dd sqrt(dd a) {
  if (a.hi <= 0.0) return {};
  const double x = std::sqrt(a.hi);
  // one Newton step from the double estimate
  const dd xx = two_prod(x, x);
  const double correction = ((a - xx).hi) / (2.0 * x);
  return quick_two_sum(x, correction);
}

inline dd abs(dd a) { return a.hi < 0.0 ? -a : a; }

}  // namespace ela::embedding::detail
