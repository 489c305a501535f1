#include "gosc/precision.hpp"

#include <string>

#include "gosc/errors.hpp"

namespace gosc {

PrecisionCtx::PrecisionCtx() : PrecisionCtx(50) {}

PrecisionCtx::PrecisionCtx(int digits_, int tol_digits, int max_iters)
    : digits(digits_), max_newton_iters(max_iters) {
  if (tol_digits < 0) tol_digits = digits_ / 2;
  tol = gosc::pow10(-tol_digits, digits_to_bits(16));
}

void PrecisionCtx::validate() const {
  if (digits <= 0) throw InvalidInput("precision digits must be positive, got " + std::to_string(digits));
  if (max_newton_iters <= 0) throw InvalidInput("max_newton_iters must be positive");
  if (!(tol > Real(0))) throw InvalidInput("tolerance must be positive");
  if (tol < gosc::pow10(-(digits - 10), digits_to_bits(16))) {
    throw InvalidInput("tolerance " + tol.str(6) + " is below 10^-(digits-10) for digits=" + std::to_string(digits));
  }
}

PrecisionCtx PrecisionCtx::with_digits(int new_digits) const {
  PrecisionCtx c = *this;
  c.digits = new_digits;
  return c;
}

Real PrecisionCtx::lift(const Real& x) const {
  Real r = x;
  r.promote(bits());
  return r;
}

Complex PrecisionCtx::lift(const Complex& z) const { return {lift(z.re), lift(z.im)}; }

}  // namespace gosc
