#pragma once

// Forward-mode derivative carriers used to differentiate Riccati
// coefficients and Hankel determinants exactly.
//
// Dual<T>: value plus first derivative in one variable.
// Jet<T>:  truncated Taylor expansion in two variables (e, l) keeping the
//          terms 1, e, e^2, l, e*l. Enough for the Jacobian of the system
//          [H = 0, dH/dE = 0] with e = E and l = lambda.

#include <utility>

#include "gosc/real.hpp"

namespace gosc {

template <class T>
struct Dual {
  T v;
  T d;

  Dual() : v(0), d(0) {}
  Dual(T value) : v(std::move(value)), d(0) {}
  Dual(int value) : v(value), d(0) {}
  Dual(T value, T deriv) : v(std::move(value)), d(std::move(deriv)) {}

  static Dual variable(T value) { return Dual(std::move(value), T(1)); }

  Dual operator-() const { return {-v, -d}; }
  Dual& operator+=(const Dual& o) { v += o.v; d += o.d; return *this; }
  Dual& operator-=(const Dual& o) { v -= o.v; d -= o.d; return *this; }
  Dual& operator*=(const Dual& o) { *this = *this * o; return *this; }
  Dual& operator/=(const Dual& o) { *this = *this / o; return *this; }

  friend Dual operator+(Dual a, const Dual& b) { return a += b; }
  friend Dual operator-(Dual a, const Dual& b) { return a -= b; }
  friend Dual operator*(const Dual& a, const Dual& b) { return {a.v * b.v, a.v * b.d + a.d * b.v}; }
  friend Dual operator/(const Dual& a, const Dual& b) {
    T q = a.v / b.v;
    return {q, (a.d - q * b.d) / b.v};
  }
};

template <class T>
struct Jet {
  T v;   // value
  T e;   // d/de
  T ee;  // (1/2) d^2/de^2
  T l;   // d/dl
  T el;  // d^2/(de dl)

  Jet() : v(0), e(0), ee(0), l(0), el(0) {}
  Jet(T value) : v(std::move(value)), e(0), ee(0), l(0), el(0) {}
  Jet(int value) : v(value), e(0), ee(0), l(0), el(0) {}
  Jet(T v_, T e_, T ee_, T l_, T el_)
      : v(std::move(v_)), e(std::move(e_)), ee(std::move(ee_)), l(std::move(l_)), el(std::move(el_)) {}

  static Jet variable_e(T value) { return Jet(std::move(value), T(1), T(0), T(0), T(0)); }
  static Jet variable_l(T value) { return Jet(std::move(value), T(0), T(0), T(1), T(0)); }

  Jet operator-() const { return {-v, -e, -ee, -l, -el}; }
  Jet& operator+=(const Jet& o) { v += o.v; e += o.e; ee += o.ee; l += o.l; el += o.el; return *this; }
  Jet& operator-=(const Jet& o) { v -= o.v; e -= o.e; ee -= o.ee; l -= o.l; el -= o.el; return *this; }
  Jet& operator*=(const Jet& o) { *this = *this * o; return *this; }
  Jet& operator/=(const Jet& o) { *this = *this / o; return *this; }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(const Jet& a, const Jet& b) {
    return {a.v * b.v,
            a.v * b.e + a.e * b.v,
            a.v * b.ee + a.e * b.e + a.ee * b.v,
            a.v * b.l + a.l * b.v,
            a.v * b.el + a.e * b.l + a.l * b.e + a.el * b.v};
  }
  friend Jet operator/(const Jet& a, const Jet& b) {
    // q = a/b solves q*b = a term by term.
    T qv = a.v / b.v;
    T qe = (a.e - qv * b.e) / b.v;
    T ql = (a.l - qv * b.l) / b.v;
    T qee = (a.ee - qv * b.ee - qe * b.e) / b.v;
    T qel = (a.el - qv * b.el - qe * b.l - ql * b.e) / b.v;
    return {std::move(qv), std::move(qe), std::move(qee), std::move(ql), std::move(qel)};
  }
};

template <class T>
Real magnitude(const Dual<T>& x) { return magnitude(x.v); }
template <class T>
Real magnitude(const Jet<T>& x) { return magnitude(x.v); }

template <class T>
Real real_part(const Dual<T>& x) { return real_part(x.v); }
template <class T>
Real real_part(const Jet<T>& x) { return real_part(x.v); }

/// Converts a Real constant into any supported scalar type.
template <class T>
struct ScalarCast {
  static T from(const Real& x) { return T(x); }
};
template <class T>
struct ScalarCast<Dual<T>> {
  static Dual<T> from(const Real& x) { return Dual<T>(ScalarCast<T>::from(x)); }
};
template <class T>
struct ScalarCast<Jet<T>> {
  static Jet<T> from(const Real& x) { return Jet<T>(ScalarCast<T>::from(x)); }
};
template <class T>
T from_real(const Real& x) { return ScalarCast<T>::from(x); }

}  // namespace gosc
