#pragma once

// Minimal double-double arithmetic (~31 significant digits). Used where a
// sum of order-1 terms must be resolved to absolute accuracy far below
// double eps, e.g. the truncation term 1 - sum of squared coefficients in
// the relative L2 error, whose true value can be ~1e-20.

#include <cmath>

namespace mr1l {

struct dd {
  double hi = 0.0;
  double lo = 0.0;

  dd() = default;
  constexpr dd(double h) : hi(h), lo(0.0) {}
  constexpr dd(double h, double l) : hi(h), lo(l) {}

  double value() const { return hi + lo; }
};

namespace detail {
// Error-free sum of two doubles (Knuth two-sum).
inline dd two_sum(double a, double b) {
  double s = a + b;
  double bb = s - a;
  double err = (a - (s - bb)) + (b - bb);
  return {s, err};
}
// Error-free sum assuming |a| >= |b| (Dekker fast two-sum).
inline dd quick_two_sum(double a, double b) {
  double s = a + b;
  return {s, b - (s - a)};
}
// Error-free product via FMA.
inline dd two_prod(double a, double b) {
  double p = a * b;
  return {p, std::fma(a, b, -p)};
}
}  // namespace detail

inline dd operator+(const dd& a, const dd& b) {
  dd s = detail::two_sum(a.hi, b.hi);
  double lo = s.lo + a.lo + b.lo;
  return detail::quick_two_sum(s.hi, lo);
}

inline dd operator-(const dd& a, const dd& b) {
  return a + dd{-b.hi, -b.lo};
}

inline dd operator*(const dd& a, const dd& b) {
  dd p = detail::two_prod(a.hi, b.hi);
  double lo = p.lo + a.hi * b.lo + a.lo * b.hi;
  return detail::quick_two_sum(p.hi, lo);
}

inline dd& operator+=(dd& a, const dd& b) { a = a + b; return a; }
inline dd& operator-=(dd& a, const dd& b) { a = a - b; return a; }
inline dd& operator*=(dd& a, const dd& b) { a = a * b; return a; }

inline dd sqr(const dd& a) { return a * a; }

// Long division: double quotient estimate, exact residual, one correction.
inline dd operator/(const dd& a, const dd& b) {
  double q0 = a.hi / b.hi;
  dd r = a - b * dd{q0};
  double q1 = r.hi / b.hi;
  r = r - b * dd{q1};
  double q2 = r.hi / b.hi;
  return detail::quick_two_sum(q0, q1) + dd{q2};
}

// Two-double representation of pi, accurate to ~1e-33.
inline constexpr dd dd_pi{3.141592653589793116e+00, 1.224646799147353207e-16};

// sqrt via one Newton step on the double estimate (sufficient at dd accuracy).
// Slightly negative inputs (rounding residue of a theoretically non-negative
// quantity) clamp to zero.
inline dd sqrt(const dd& a) {
  if (!(a.hi > 0.0)) return dd{0.0};
  double x = 1.0 / std::sqrt(a.hi);
  double y = a.hi * x;
  dd yy = detail::two_prod(y, y);
  double delta = (a - yy).value() * (x * 0.5);
  return detail::quick_two_sum(y, delta);
}

}  // namespace mr1l
