#pragma once

#include <array>
#include <cmath>

#include "effaction/errors.hpp"

namespace effaction {

/// Value of a function together with its first four derivatives at a point.
///
/// d[k] holds d^k f / dx^k.  Arithmetic follows the truncated Leibniz and
/// Faa di Bruno rules, exact through order four; there is no truncation
/// error below order five.  Order four is all the downstream formulas ever
/// consume (they stop at V'''' and m'').
struct Jet4 {
  std::array<double, 5> d{0, 0, 0, 0, 0};

  static Jet4 constant(double c) { return Jet4{{c, 0, 0, 0, 0}}; }
  static Jet4 variable(double x) { return Jet4{{x, 1, 0, 0, 0}}; }

  double value() const { return d[0]; }
};

inline Jet4 operator+(const Jet4& a, const Jet4& b) {
  Jet4 r;
  for (int k = 0; k < 5; ++k) r.d[k] = a.d[k] + b.d[k];
  return r;
}

inline Jet4 operator-(const Jet4& a, const Jet4& b) {
  Jet4 r;
  for (int k = 0; k < 5; ++k) r.d[k] = a.d[k] - b.d[k];
  return r;
}

inline Jet4 operator-(const Jet4& a) {
  Jet4 r;
  for (int k = 0; k < 5; ++k) r.d[k] = -a.d[k];
  return r;
}

inline Jet4 operator*(const Jet4& a, const Jet4& b) {
  // Leibniz: (fg)^(k) = sum_i C(k,i) f^(i) g^(k-i).
  Jet4 r;
  r.d[0] = a.d[0] * b.d[0];
  r.d[1] = a.d[1] * b.d[0] + a.d[0] * b.d[1];
  r.d[2] = a.d[2] * b.d[0] + 2 * a.d[1] * b.d[1] + a.d[0] * b.d[2];
  r.d[3] = a.d[3] * b.d[0] + 3 * a.d[2] * b.d[1] + 3 * a.d[1] * b.d[2] +
           a.d[0] * b.d[3];
  r.d[4] = a.d[4] * b.d[0] + 4 * a.d[3] * b.d[1] + 6 * a.d[2] * b.d[2] +
           4 * a.d[1] * b.d[3] + a.d[0] * b.d[4];
  return r;
}

inline Jet4 operator*(double c, const Jet4& a) {
  Jet4 r;
  for (int k = 0; k < 5; ++k) r.d[k] = c * a.d[k];
  return r;
}

/// a / b, solving the Leibniz rule for the quotient's derivatives.
/// Throws DomainEvalError on division by zero.
inline Jet4 jet_div(const Jet4& a, const Jet4& b, double at_x) {
  if (b.d[0] == 0.0) throw DomainEvalError("division by zero", at_x);
  Jet4 h;
  const double inv = 1.0 / b.d[0];
  h.d[0] = a.d[0] * inv;
  h.d[1] = (a.d[1] - h.d[0] * b.d[1]) * inv;
  h.d[2] = (a.d[2] - 2 * h.d[1] * b.d[1] - h.d[0] * b.d[2]) * inv;
  h.d[3] = (a.d[3] - 3 * h.d[2] * b.d[1] - 3 * h.d[1] * b.d[2] -
            h.d[0] * b.d[3]) * inv;
  h.d[4] = (a.d[4] - 4 * h.d[3] * b.d[1] - 6 * h.d[2] * b.d[2] -
            4 * h.d[1] * b.d[3] - h.d[0] * b.d[4]) * inv;
  return h;
}

/// Faa di Bruno through order four: compose a univariate function u,
/// given as its derivative stack u[k] = u^(k)(f(x)), with the inner jet f.
inline Jet4 jet_compose(const std::array<double, 5>& u, const Jet4& f) {
  const double f1 = f.d[1], f2 = f.d[2], f3 = f.d[3], f4 = f.d[4];
  Jet4 r;
  r.d[0] = u[0];
  r.d[1] = u[1] * f1;
  r.d[2] = u[2] * f1 * f1 + u[1] * f2;
  r.d[3] = u[3] * f1 * f1 * f1 + 3 * u[2] * f1 * f2 + u[1] * f3;
  r.d[4] = u[4] * f1 * f1 * f1 * f1 + 6 * u[3] * f1 * f1 * f2 +
           u[2] * (3 * f2 * f2 + 4 * f1 * f3) + u[1] * f4;
  return r;
}

inline Jet4 jet_sin(const Jet4& f) {
  const double s = std::sin(f.d[0]), c = std::cos(f.d[0]);
  return jet_compose({s, c, -s, -c, s}, f);
}

inline Jet4 jet_cos(const Jet4& f) {
  const double s = std::sin(f.d[0]), c = std::cos(f.d[0]);
  return jet_compose({c, -s, -c, s, c}, f);
}

inline Jet4 jet_exp(const Jet4& f) {
  const double e = std::exp(f.d[0]);
  return jet_compose({e, e, e, e, e}, f);
}

inline Jet4 jet_sinh(const Jet4& f) {
  const double s = std::sinh(f.d[0]), c = std::cosh(f.d[0]);
  return jet_compose({s, c, s, c, s}, f);
}

inline Jet4 jet_cosh(const Jet4& f) {
  const double s = std::sinh(f.d[0]), c = std::cosh(f.d[0]);
  return jet_compose({c, s, c, s, c}, f);
}

inline Jet4 jet_tanh(const Jet4& f) {
  const double t = std::tanh(f.d[0]);
  const double sech2 = 1.0 - t * t;
  return jet_compose({t, sech2, -2 * t * sech2, (6 * t * t - 2) * sech2,
                      (16 * t - 24 * t * t * t) * sech2},
                     f);
}

inline Jet4 jet_log(const Jet4& f, double at_x) {
  const double v = f.d[0];
  if (!(v > 0.0)) throw DomainEvalError("log of non-positive value", at_x);
  const double i1 = 1.0 / v, i2 = i1 * i1;
  return jet_compose({std::log(v), i1, -i2, 2 * i2 * i1, -6 * i2 * i2}, f);
}

/// Jet of sqrt(f); derivatives require a strictly positive argument.
inline Jet4 jet_sqrt(const Jet4& f, double at_x) {
  const double v = f.d[0];
  if (!(v > 0.0)) throw DomainEvalError("sqrt of non-positive value", at_x);
  const double s = std::sqrt(v);
  const double i = 1.0 / v;
  return jet_compose({s, 0.5 * s * i, -0.25 * s * i * i, 0.375 * s * i * i * i,
                      -0.9375 * s * i * i * i * i},
                     f);
}

/// f^n for integer n by repeated multiplication (no positivity restriction).
inline Jet4 jet_powi(const Jet4& f, long long n, double at_x) {
  if (n == 0) return Jet4::constant(1.0);
  const bool neg = n < 0;
  unsigned long long e = neg ? static_cast<unsigned long long>(-n)
                             : static_cast<unsigned long long>(n);
  Jet4 acc = Jet4::constant(1.0);
  Jet4 base = f;
  while (e > 0) {
    if (e & 1ull) acc = acc * base;
    base = base * base;
    e >>= 1;
  }
  return neg ? jet_div(Jet4::constant(1.0), acc, at_x) : acc;
}

/// f^g for general exponents as exp(g * log f); requires f > 0.
inline Jet4 jet_pow(const Jet4& f, const Jet4& g, double at_x) {
  return jet_exp(g * jet_log(f, at_x));
}

}  // namespace effaction
