#pragma once

#include <algorithm>
#include <cstddef>
#include <utility>
#include <vector>

#include "gosc/real.hpp"

namespace gosc {

template <class T>
class Polynomial;

namespace detail {
inline bool exactly_zero(const Real& x) { return x.is_zero(); }
inline bool exactly_zero(const Complex& z) { return z.is_zero(); }
template <class T>
bool exactly_zero(const Polynomial<T>& p) { return p.is_zero(); }
}  // namespace detail

/// Dense univariate polynomial, coefficients in ascending degree. Trailing
/// zero coefficients are trimmed on construction, so a nonzero polynomial
/// always has a nonzero leading coefficient.
template <class T>
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<T> coeffs) : c_(std::move(coeffs)) { trim(); }
  Polynomial(std::initializer_list<T> coeffs) : c_(coeffs) { trim(); }
  /// Constant polynomial.
  Polynomial(long constant) : c_{T(constant)} { trim(); }
  Polynomial(int constant) : c_{T(constant)} { trim(); }

  /// Degree; -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<T>& coeffs() const { return c_; }

  /// Coefficient of x^k (zero beyond the degree).
  T operator[](std::size_t k) const { return k < c_.size() ? c_[k] : T(0); }
  const T& leading() const { return c_.back(); }

  template <class U>
  auto operator()(const U& x) const {
    using R = decltype(std::declval<T>() * x);
    if (c_.empty()) return R(0);
    R acc = R(c_.back());
    for (std::size_t k = c_.size() - 1; k-- > 0;) acc = acc * x + R(c_[k]);
    return acc;
  }

  Polynomial derivative() const {
    std::vector<T> d;
    for (std::size_t k = 1; k < c_.size(); ++k) d.push_back(c_[k] * T(static_cast<long>(k)));
    return Polynomial(std::move(d));
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    std::vector<T> r(std::max(a.c_.size(), b.c_.size()), T(0));
    for (std::size_t k = 0; k < a.c_.size(); ++k) r[k] += a.c_[k];
    for (std::size_t k = 0; k < b.c_.size(); ++k) r[k] += b.c_[k];
    return Polynomial(std::move(r));
  }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
    std::vector<T> r(std::max(a.c_.size(), b.c_.size()), T(0));
    for (std::size_t k = 0; k < a.c_.size(); ++k) r[k] += a.c_[k];
    for (std::size_t k = 0; k < b.c_.size(); ++k) r[k] -= b.c_[k];
    return Polynomial(std::move(r));
  }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<T> r(a.c_.size() + b.c_.size() - 1, T(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    return Polynomial(std::move(r));
  }
  friend Polynomial operator*(const T& s, const Polynomial& p) {
    std::vector<T> r = p.c_;
    for (auto& c : r) c = s * c;
    return Polynomial(std::move(r));
  }

 private:
  void trim() {
    while (!c_.empty() && detail::exactly_zero(c_.back())) c_.pop_back();
  }

  std::vector<T> c_;
};

/// Polynomial in E whose coefficients are polynomials in lambda.
using BivariatePolynomial = Polynomial<Polynomial<Complex>>;

/// Evaluates the lambda-coefficients of F at `lambda`, giving a polynomial in E.
Polynomial<Complex> at_lambda(const BivariatePolynomial& f, const Complex& lambda);

/// Quotient of polynomial long division num / den (remainder dropped).
Polynomial<Complex> divide(const Polynomial<Complex>& num, const Polynomial<Complex>& den);

}  // namespace gosc
