#pragma once

#include <string_view>

#include "gosc/real.hpp"

namespace gosc {

/// Working-precision contract passed by value into every solver.
struct PrecisionCtx {
  int digits = 50;             // decimal working precision
  int max_newton_iters = 100;  // per root solve
  Real tol;                    // convergence threshold in units of the sought quantity

  PrecisionCtx();
  /// Context with `digits` of precision and tol = 10^(-tol_digits); tol_digits
  /// defaults to digits/2.
  explicit PrecisionCtx(int digits, int tol_digits = -1, int max_newton_iters = 100);

  Bits bits() const { return digits_to_bits(digits); }

  /// Throws InvalidInput when digits/tol/max_newton_iters break the contract.
  void validate() const;

  /// Same contract at a higher precision; tol keeps its value.
  PrecisionCtx with_digits(int new_digits) const;

  Real real(long v) const { return Real::rounded(Real(v), bits()); }
  Real real(std::string_view text) const { return Real(text, bits()); }
  Complex complex(long re, long im = 0) const { return {real(re), real(im)}; }
  /// Copy of `x` raised to at least this context's precision.
  Real lift(const Real& x) const;
  Complex lift(const Complex& z) const;
  /// 10^e at this precision.
  Real pow10(long e) const { return gosc::pow10(e, bits()); }
};

}  // namespace gosc
