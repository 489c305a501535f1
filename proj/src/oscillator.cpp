#include "gosc/oscillator.hpp"

namespace gosc {

std::string to_string(Parity p) { return p == Parity::even ? "even" : "odd"; }

Parity parse_parity(const std::string& text) {
  if (text == "even") return Parity::even;
  if (text == "odd") return Parity::odd;
  throw InvalidInput("parity must be 'even' or 'odd', got '" + text + "'");
}

Real gaussian_matrix_element(int m, int n, const PrecisionCtx& ctx) {
  if (m < 0 || n < 0) throw InvalidInput("gaussian_matrix_element: negative index");
  if ((m - n) % 2 != 0) return Real::zero(ctx.bits());
  const Bits bits = ctx.bits();
  const unsigned long k = static_cast<unsigned long>((m + n) / 2);
  Real value = Real::factorial(2 * k, bits) / (Real::factorial(k, bits) * ldexp(ctx.real(1), 2 * static_cast<long>(k)));
  value = value / sqrt(2 * Real::factorial(static_cast<unsigned long>(m), bits) *
                       Real::factorial(static_cast<unsigned long>(n), bits));
  return ((m - n) / 2) % 2 == 0 ? value : -value;
}

Real h0_matrix_element(int m, int n) {
  if (m < 0 || n < 0) throw InvalidInput("h0_matrix_element: negative index");
  if (m != n) return Real(0);
  return Real(n) + Real(0.5);
}

PTPolynomial pt_polynomial(int n, const PrecisionCtx& ctx) {
  if (n != 0 && n != 1) throw InvalidInput("pt_energy: only n = 0 and n = 1 are available");
  const Real sqrt2 = sqrt(ctx.real(2));
  const Real sqrt3 = sqrt(ctx.real(3));
  const Real ln_term = log(8 - 4 * sqrt3);
  PTPolynomial p;
  p.n = n;
  if (n == 0) {
    p.coeffs = {ctx.real(1) / 2, -1 / sqrt2, -ln_term / 2};
  } else {
    p.coeffs = {ctx.real(3) / 2, -sqrt2 / 4, -(2 * sqrt3 - 3 * (1 - ln_term)) / 24};
  }
  return p;
}

Real pt_energy(int n, const Real& lambda, const PrecisionCtx& ctx) { return pt_polynomial(n, ctx)(ctx.lift(lambda)); }

Real pt_critical_lambda(int n, const PrecisionCtx& ctx) {
  const PTPolynomial p = pt_polynomial(n, ctx);
  const auto& [a0, a1, a2] = p.coeffs;
  // a2 < 0 < a0, so exactly one positive root; written to avoid cancellation.
  const Real disc = sqrt(a1 * a1 - 4 * a2 * a0);
  return (2 * a0) / (disc - a1);
}

Real gaussian_expectation(const EigenState& state, const PrecisionCtx& ctx) {
  const auto& v = state.vector;
  const int size = static_cast<int>(v.size());
  Real acc = Real::zero(ctx.bits());
  for (int i = 0; i < size; ++i) {
    const int mi = state.basis.level(i);
    acc += v[i] * v[i] * gaussian_matrix_element(mi, mi, ctx);
    for (int j = i + 1; j < size; ++j) {
      acc += 2 * v[i] * v[j] * gaussian_matrix_element(mi, state.basis.level(j), ctx);
    }
  }
  return acc;
}

HftReport hft_residual(int n, const Real& lambda, const Real& h, const EigenOracle& solver, const PrecisionCtx& ctx) {
  if (!(h > Real(0))) throw InvalidInput("hft_residual: step must be positive");
  const Real l = ctx.lift(lambda);
  const EigenState plus = solver(n, l + h);
  const EigenState minus = solver(n, l - h);
  const EigenState here = solver(n, l);
  HftReport r;
  r.slope = (plus.energy - minus.energy) / (2 * ctx.lift(h));
  r.expectation = gaussian_expectation(here, ctx);
  r.residual = abs(r.slope + r.expectation);
  return r;
}

}  // namespace gosc
