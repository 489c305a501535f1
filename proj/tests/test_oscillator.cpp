#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "gosc/oscillator.hpp"
#include "gosc/rayleigh_ritz.hpp"
#include "oracles.hpp"

using namespace gosc;

TEST_CASE("gaussian_matrix_element: closed-form values") {
  const PrecisionCtx ctx(40);
  CHECK(abs(gaussian_matrix_element(0, 0, ctx) - 1 / sqrt(ctx.real(2))) < ctx.pow10(-38));
  CHECK(abs(gaussian_matrix_element(1, 1, ctx) - sqrt(ctx.real(2)) / 4) < ctx.pow10(-38));
  CHECK(abs(gaussian_matrix_element(0, 2, ctx) + ctx.real(1) / 4) < ctx.pow10(-38));
  CHECK(gaussian_matrix_element(0, 1, ctx).is_zero());
  CHECK_THROWS_AS(gaussian_matrix_element(-1, 1, ctx), InvalidInput);
}

TEST_CASE("gaussian_matrix_element: Hermite-integral oracle") {
  const PrecisionCtx ctx(50);
  for (int m = 0; m <= 20; ++m)
    for (int n = m % 2; n <= 20; n += 2) {
      const Real exact = oracle::gaussian_element(m, n, ctx);
      CAPTURE(m);
      CAPTURE(n);
      CHECK(abs(gaussian_matrix_element(m, n, ctx) - exact) < ctx.pow10(-(ctx.digits - 10)));
    }
}

TEST_CASE("gaussian_matrix_element: trapezoid quadrature cross-check") {
  const PrecisionCtx ctx(40);
  auto weight = [](const Real& x) { return exp(-x * x); };
  for (auto [m, n] : {std::pair{0, 0}, {0, 2}, {1, 1}, {3, 7}, {10, 12}}) {
    CAPTURE(m);
    CAPTURE(n);
    CHECK(abs(gaussian_matrix_element(m, n, ctx) - oracle::quadrature(m, n, weight, ctx)) < ctx.pow10(-30));
  }
}

TEST_CASE("gaussian_matrix_element: symmetry and diagonal bounds up to 40") {
  const PrecisionCtx ctx(30);
  for (int m = 0; m <= 40; ++m) {
    const Real diag = gaussian_matrix_element(m, m, ctx);
    CHECK(diag > Real(0));
    CHECK(diag < Real(1));
    for (int n = m + 2; n <= 40; n += 2) CHECK(gaussian_matrix_element(m, n, ctx) == gaussian_matrix_element(n, m, ctx));
  }
}

TEST_CASE("h0_matrix_element") {
  CHECK(h0_matrix_element(0, 0) == Real(0.5));
  CHECK(h0_matrix_element(3, 3) == Real(3.5));
  CHECK(h0_matrix_element(2, 4).is_zero());
  CHECK_THROWS_AS(h0_matrix_element(-1, 0), InvalidInput);
}

TEST_CASE("potential_series_coeffs: examples") {
  const PrecisionCtx ctx(30);
  const auto q0 = potential_series_coeffs(ctx.real(1) / 2, ctx.real(0), 2, ctx);
  REQUIRE(q0.size() == 3);
  CHECK(q0[0] == Real(-1));
  CHECK(q0[1] == Real(1));
  CHECK(q0[2].is_zero());

  const auto q1 = potential_series_coeffs(ctx.real(0), ctx.real(1), 3, ctx);
  CHECK(q1[0] == Real(-2));
  CHECK(q1[1] == Real(3));
  CHECK(q1[2] == Real(-1));
  CHECK(abs(q1[3] - ctx.real(1) / 3) < ctx.pow10(-28));
  CHECK_THROWS_AS(potential_series_coeffs(ctx.real(0), ctx.real(1), -1, ctx), InvalidInput);
}

TEST_CASE("potential_series_coeffs: Taylor coefficients by contour sampling") {
  // Q_k = (1/N) sum_j Q(w_j) w_j^(-2k) on the unit circle, with Q evaluated
  // directly from exp; aliasing from terms of order k + N/2 is negligible.
  const PrecisionCtx ctx(40);
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> pick(-3000, 3000);
  const int N = 64;
  const Real two_pi = 2 * Real::pi(ctx.bits());
  for (int trial = 0; trial < 4; ++trial) {
    const Real e = ctx.real(pick(rng)) / 1000, l = ctx.real(pick(rng)) / 1000;
    const auto q = potential_series_coeffs(e, l, 12, ctx);
    for (int k = 0; k <= 12; ++k) {
      Complex acc(Real(0), Real(0));
      for (int j = 0; j < N; ++j) {
        const Real t = two_pi * j / N;
        // x = exp(i t): x^2 = exp(2it), exp(-x^2) via complex exp.
        const Complex x2 = exp(Complex(Real(0), 2 * t));
        const Complex qx = x2 - Complex(2) * Complex(l) * exp(-x2) - Complex(2) * Complex(e);
        acc += qx * exp(Complex(Real(0), -2 * k * t));
      }
      acc = acc / Complex(N);
      CAPTURE(k);
      CHECK(abs(acc.re - q[static_cast<std::size_t>(k)]) < ctx.pow10(-25));
      CHECK(abs(acc.im) < ctx.pow10(-25));
    }
  }
}

TEST_CASE("potential_series_coeffs alternate in sign for lambda > 0") {
  const PrecisionCtx ctx(30);
  const auto q = potential_series_coeffs(ctx.real(1), ctx.real(2), 12, ctx);
  for (int k = 2; k < 12; ++k) CHECK(q[static_cast<std::size_t>(k)].sign() == -q[static_cast<std::size_t>(k + 1)].sign());
}

TEST_CASE("pt_energy: polynomial values and critical roots") {
  const PrecisionCtx ctx(30);
  CHECK(pt_energy(0, ctx.real(0), ctx) == Real(0.5));
  CHECK(abs(pt_energy(0, ctx.real("0.684"), ctx)) < Real(5e-3));
  CHECK(abs(pt_energy(1, ctx.real("3.35"), ctx)) < Real(2e-2));
  CHECK_THROWS_AS(pt_energy(2, ctx.real(0), ctx), InvalidInput);
  for (int n : {0, 1}) {
    const PTPolynomial p = pt_polynomial(n, ctx);
    CHECK(p.coeffs[0] == Real(n == 0 ? 0.5 : 1.5));
    CHECK(p.coeffs[1] < Real(0));
    CHECK(p.coeffs[2] < Real(0));
    CHECK(abs(pt_energy(n, pt_critical_lambda(n, ctx), ctx)) < ctx.pow10(-25));
  }
  CHECK(abs(pt_polynomial(0, ctx).coeffs[1] + 1 / sqrt(ctx.real(2))) < ctx.pow10(-28));
  CHECK(abs(pt_polynomial(1, ctx).coeffs[1] + sqrt(ctx.real(2)) / 4) < ctx.pow10(-28));
}

TEST_CASE("pt_energy is concave in lambda") {
  const PrecisionCtx ctx(30);
  for (int n : {0, 1})
    for (int k = -5; k <= 5; ++k) {
      const Real l = ctx.real(k), h = ctx.real(1) / 10;
      const Real second = pt_energy(n, l + h, ctx) - 2 * pt_energy(n, l, ctx) + pt_energy(n, l - h, ctx);
      CHECK(second < Real(0));
    }
}

TEST_CASE("hft_residual: first-order slopes at lambda = 0") {
  const PrecisionCtx ctx(30);
  const Real h = ctx.pow10(-6);
  const HftReport r0 = hft_residual(0, ctx.real(0), h, rr_oracle(40, ctx), ctx);
  CHECK(r0.residual < Real(1e-8));
  CHECK(abs(r0.slope + 1 / sqrt(ctx.real(2))) < Real(1e-8));
  const HftReport r1 = hft_residual(1, ctx.real(0), h, rr_oracle(40, ctx), ctx);
  CHECK(r1.residual < Real(1e-8));
  CHECK(abs(r1.slope + sqrt(ctx.real(2)) / 4) < Real(1e-8));
}

TEST_CASE("hft_residual: converged variational solver at lambda = 2") {
  const PrecisionCtx ctx(30);
  const HftReport r = hft_residual(0, ctx.real(2), ctx.pow10(-5), rr_oracle(60, ctx), ctx);
  CHECK(r.residual < Real(1e-6));
  CHECK(r.slope < Real(0));
}

TEST_CASE("hft_residual: bad step and oracle errors propagate") {
  const PrecisionCtx ctx(30);
  CHECK_THROWS_AS(hft_residual(0, ctx.real(0), ctx.real(0), rr_oracle(10, ctx), ctx), InvalidInput);
  CHECK_THROWS_AS(hft_residual(30, ctx.real(0), ctx.pow10(-6), rr_oracle(10, ctx), ctx), InvalidInput);
}

TEST_CASE("parity helpers") {
  CHECK(parity_symbol(Parity::even) == 0);
  CHECK(parity_symbol(Parity::odd) == 1);
  CHECK(parity_of_state(3) == Parity::odd);
  CHECK(parse_parity("odd") == Parity::odd);
  CHECK_THROWS_AS(parse_parity("sideways"), InvalidInput);
  CHECK(ParityBasis{Parity::odd, 3}.level(2) == 5);
}
