#pragma once

// Determinants, Newton-type root finders, polynomial roots and
// discriminants shared by the Rayleigh-Ritz and Riccati-Pade solvers.

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "gosc/autodiff.hpp"
#include "gosc/errors.hpp"
#include "gosc/matrix.hpp"
#include "gosc/polynomial.hpp"
#include "gosc/precision.hpp"
#include "gosc/real.hpp"

namespace gosc {

namespace detail {
inline void lift_in_place(Real& x, const PrecisionCtx& ctx) { x.promote(ctx.bits()); }
inline void lift_in_place(Complex& z, const PrecisionCtx& ctx) {
  z.re.promote(ctx.bits());
  z.im.promote(ctx.bits());
}
template <class T>
void lift_in_place(Dual<T>& x, const PrecisionCtx& ctx) {
  lift_in_place(x.v, ctx);
  lift_in_place(x.d, ctx);
}
template <class T>
void lift_in_place(Jet<T>& x, const PrecisionCtx& ctx) {
  for (T* part : {&x.v, &x.e, &x.ee, &x.l, &x.el}) lift_in_place(*part, ctx);
}
}  // namespace detail

/// Determinant by Gaussian elimination with partial pivoting on the
/// magnitude of the (value part of the) entries. Works for Real, Complex and
/// the derivative-carrying Dual/Jet scalars, in which case the derivatives
/// of the determinant come out exactly.
template <class T>
T det(Matrix<T> m, const PrecisionCtx& ctx) {
  if (!m.square()) throw InvalidInput("det: matrix is not square");
  const std::size_t n = m.rows();
  if (n == 0) throw InvalidInput("det: empty matrix");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) detail::lift_in_place(m(i, j), ctx);

  T result(1);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    Real best = magnitude(m(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      Real mag = magnitude(m(i, k));
      if (mag > best) {
        best = std::move(mag);
        p = i;
      }
    }
    if (best.is_zero()) return T(0);
    if (p != k) {
      m.swap_rows(p, k);
      result = -result;
    }
    result = result * m(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      if (magnitude(m(i, k)).is_zero()) continue;
      const T factor = m(i, k) / m(k, k);
      for (std::size_t j = k + 1; j < n; ++j) m(i, j) -= factor * m(k, j);
    }
  }
  return result;
}

template <class T>
struct RootResult {
  T root;
  Real residual;   // |f(root)|
  Real last_step;  // |last Newton correction|
  int iterations = 0;
};

/// Newton-Raphson with step halving (up to 20 halvings while |f| does not
/// decrease). `f` returns (value, derivative). Converged when the last step
/// is below tol*max(1,|x|) and |f| is below tol.
template <class T>
RootResult<T> newton_1d(const std::type_identity_t<std::function<std::pair<T, T>(const T&)>>& f, const T& x0,
                        const PrecisionCtx& ctx);

/// Newton-Raphson with a central finite-difference derivative, step
/// 10^(-digits/2) * max(1, |x|).
template <class T>
RootResult<T> newton_1d(const std::type_identity_t<std::function<T(const T&)>>& f, const T& x0,
                        const PrecisionCtx& ctx);

/// Value of a two-equation system in (E, lambda) and, optionally, its
/// Jacobian [df/dE, df/dlambda, dg/dE, dg/dlambda].
struct SystemValue {
  Complex f;
  Complex g;
  std::optional<std::array<Complex, 4>> jacobian;
};

using System2 = std::function<SystemValue(const Complex& e, const Complex& lambda)>;

struct Root2Result {
  Complex e;
  Complex lambda;
  Real residual_f;
  Real residual_g;
  int iterations = 0;
  std::vector<std::string> trace;  // lambda iterates
};

/// Two-variable Newton with step halving. Finite-difference Jacobian
/// (central, step 10^(-digits/2)) when the system does not supply one.
Root2Result newton_2d(const System2& system, const Complex& e0, const Complex& lambda0, const PrecisionCtx& ctx);

/// Sylvester matrix of p (degree m) and q (degree n), size (m+n) x (m+n).
template <class T>
Matrix<T> sylvester(const Polynomial<T>& p, const Polynomial<T>& q) {
  const int m = p.degree(), n = q.degree();
  if (m < 1 || n < 0) throw InvalidInput("sylvester: degenerate polynomial");
  const std::size_t size = static_cast<std::size_t>(m + n);
  Matrix<T> s(size, size, T(0));
  for (int r = 0; r < n; ++r)
    for (int k = 0; k <= m; ++k) s(r, r + k) = p[static_cast<std::size_t>(m - k)];
  for (int r = 0; r < m; ++r)
    for (int k = 0; k <= n; ++k) s(n + r, r + k) = q[static_cast<std::size_t>(n - k)];
  return s;
}

/// Discriminant of a univariate polynomial of degree n >= 2:
/// (-1)^(n(n-1)/2) Res(F, F') / a_n.
template <class T>
T discriminant(const Polynomial<T>& f, const PrecisionCtx& ctx) {
  const int n = f.degree();
  if (n < 2) throw InvalidInput("discriminant: degree must be at least 2");
  T res = det(sylvester(f, f.derivative()), ctx);
  T d = res / f.leading();
  if ((n * (n - 1) / 2) % 2 != 0) d = -d;
  return d;
}

/// Discriminant of F(E, lambda) with respect to E, as a polynomial in
/// lambda. The resultant is sampled on `degree bound + 1` points of the
/// circle |lambda| = radius and interpolated by a discrete Fourier transform;
/// trailing coefficients below 10^(-digits/2) of the largest are dropped.
Polynomial<Complex> discriminant_in_E(const BivariatePolynomial& f, const PrecisionCtx& ctx,
                                      const Real& radius = Real(1));

/// All complex roots of p by Aberth-Ehrlich iteration. Optional initial
/// approximations (one per root) make the result follow those roots.
std::vector<Complex> polynomial_roots(const Polynomial<Complex>& p, const PrecisionCtx& ctx,
                                      std::span<const Complex> initial = {});
std::vector<Complex> polynomial_roots(const Polynomial<Real>& p, const PrecisionCtx& ctx,
                                      std::span<const Complex> initial = {});

/// det(A - x I) as a polynomial in x. The matrix is first reduced to upper
/// Hessenberg form by stabilized elementary similarity transforms, then the
/// leading principal minors are expanded along their last column.
template <class T>
Polynomial<T> characteristic_polynomial(Matrix<T> a, const PrecisionCtx& ctx) {
  if (!a.square()) throw InvalidInput("characteristic_polynomial: matrix is not square");
  const std::size_t n = a.rows();
  if (n == 0) throw InvalidInput("characteristic_polynomial: empty matrix");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) detail::lift_in_place(a(i, j), ctx);

  for (std::size_t m = 1; m + 1 < n; ++m) {
    std::size_t piv = m;
    Real best = magnitude(a(m, m - 1));
    for (std::size_t j = m + 1; j < n; ++j) {
      Real mag = magnitude(a(j, m - 1));
      if (mag > best) {
        best = std::move(mag);
        piv = j;
      }
    }
    if (piv != m) {
      a.swap_rows(piv, m);
      for (std::size_t j = 0; j < n; ++j) std::swap(a(j, piv), a(j, m));
    }
    if (best.is_zero()) continue;
    for (std::size_t i = m + 1; i < n; ++i) {
      if (magnitude(a(i, m - 1)).is_zero()) continue;
      const T y = a(i, m - 1) / a(m, m - 1);
      a(i, m - 1) = T(0);
      for (std::size_t j = m; j < n; ++j) a(i, j) -= y * a(m, j);
      for (std::size_t j = 0; j < n; ++j) a(j, m) += y * a(j, i);
    }
  }

  // p_k = (h_kk - x) p_{k-1} + sum_{i<k} (-1)^(k-i) h_ik (prod_{j=i+1..k} h_{j,j-1}) p_{i-1}
  std::vector<Polynomial<T>> p;
  p.reserve(n + 1);
  p.emplace_back(std::vector<T>{T(1)});
  for (std::size_t k = 1; k <= n; ++k) {
    Polynomial<T> next = Polynomial<T>(std::vector<T>{a(k - 1, k - 1), T(-1)}) * p[k - 1];
    T beta(1);
    for (std::size_t i = k - 1; i >= 1; --i) {
      beta = beta * a(i, i - 1);  // h_{i+1,i} in 1-based terms
      const T coeff = ((k - i) % 2 == 0 ? T(1) : T(-1)) * a(i - 1, k - 1) * beta;
      next = next + coeff * p[i - 1];
    }
    p.push_back(std::move(next));
  }
  return p.back();
}

/// Number of leading significant decimal digits shared by a and b.
int shared_digits(const Real& a, const Real& b);
int shared_digits(const Complex& a, const Complex& b);

}  // namespace gosc
