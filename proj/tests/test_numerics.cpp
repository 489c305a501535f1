#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "gosc/numerics.hpp"
#include "gosc/rayleigh_ritz.hpp"
#include "oracles.hpp"

using namespace gosc;

namespace {

Real rel_err(const Real& a, const Real& b) { return abs(a - b) / max(Real(1e-300), abs(b)); }
Real rel_err(const Complex& a, const Complex& b) { return abs(a - b) / max(Real(1e-300), abs(b)); }

}  // namespace

TEST_CASE("det: identity and diagonal") {
  const PrecisionCtx ctx(40);
  Matrix<Real> id = Matrix<Real>::identity(3);
  CHECK(det(id, ctx) == Real(1));
  Matrix<Real> d(2, 2, Real(0));
  d(0, 0) = 2;
  d(1, 1) = 3;
  CHECK(det(d, ctx) == Real(6));
}

TEST_CASE("det: empty matrix is rejected") {
  CHECK_THROWS_AS(det(Matrix<Real>(0, 0), PrecisionCtx(30)), InvalidInput);
  CHECK_THROWS_AS(det(Matrix<Real>(2, 3), PrecisionCtx(30)), InvalidInput);
}

TEST_CASE("det: Hilbert-like 5x5 against exact rational elimination") {
  const PrecisionCtx ctx(50);
  Matrix<Real> m(5, 5);
  std::vector<std::vector<oracle::Rational>> q(5, std::vector<oracle::Rational>(5));
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) {
      m(i, j) = ctx.real(1) / (i + j + 1);
      q[i][j] = oracle::Rational(1, i + j + 1);
    }
  const Real exact = oracle::to_real(oracle::det(q), ctx);
  CHECK(rel_err(det(m, ctx), exact) < ctx.pow10(-(ctx.digits - 5)));
}

TEST_CASE("det: complex entries") {
  const PrecisionCtx ctx(30);
  Matrix<Complex> m(2, 2);
  m(0, 0) = Complex(1, 1);
  m(0, 1) = Complex(2, 0);
  m(1, 0) = Complex(0, 1);
  m(1, 1) = Complex(3, -1);
  // (1+i)(3-i) - 2i = 4 + 2i - 2i = 4
  CHECK(rel_err(det(m, ctx), Complex(4)) < ctx.pow10(-25));
}

TEST_CASE("det: block-diagonal matrices factor into block determinants") {
  const PrecisionCtx ctx(40);
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> pick(-9, 9);
  for (int trial = 0; trial < 100; ++trial) {
    Matrix<Real> a(2, 2), b(3, 3), full(5, 5, Real(0));
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) full(i, j) = a(i, j) = ctx.real(pick(rng)) / 7;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) full(i + 2, j + 2) = b(i, j) = ctx.real(pick(rng)) / 3;
    const Real product = det(a, ctx) * det(b, ctx);
    CHECK(abs(det(full, ctx) - product) <= ctx.pow10(-30) * max(Real(1), abs(product)));
  }
}

TEST_CASE("newton_1d: real and complex roots") {
  const PrecisionCtx ctx(40);
  auto sq = [](const Real& x) { return std::pair<Real, Real>(x * x - 2, 2 * x); };
  const auto r = newton_1d<Real>(sq, ctx.real(1), ctx);
  CHECK(rel_err(r.root, sqrt(ctx.real(2))) < ctx.pow10(-35));
  CHECK(r.iterations > 0);

  auto circle = [](const Complex& z) { return std::pair<Complex, Complex>(z * z + Complex(1), Complex(2) * z); };
  const auto c = newton_1d<Complex>(circle, Complex(Real(0.5), Real(0.5)), ctx);
  CHECK(abs(c.root - Complex(Real(0), Real(1))) < ctx.pow10(-35));
}

TEST_CASE("newton_1d: finite-difference derivative") {
  const PrecisionCtx ctx(40);
  const auto r = newton_1d<Real>([](const Real& x) { return x * x * x - 5; }, ctx.real(2), ctx);
  CHECK(abs(r.root * r.root * r.root - 5) < ctx.pow10(-18));
}

TEST_CASE("newton_1d: recovers a rational root from every seed within 0.1") {
  const PrecisionCtx ctx(40);
  const Real root = ctx.real(3) / 7;
  // (x - 3/7)(x^2 + 1)(x + 2)
  auto p = [&](const Real& x) {
    const Real a = x - root, b = x * x + 1, c = x + 2;
    return std::pair<Real, Real>(a * b * c, b * c + a * 2 * x * c + a * b);
  };
  for (int k = -10; k <= 10; ++k) {
    const Real seed = root + ctx.real(k) / 100;
    const auto r = newton_1d<Real>(p, seed, ctx);
    CHECK(abs(r.root - root) <= ctx.tol);
  }
}

TEST_CASE("newton_1d: failures carry diagnostics") {
  PrecisionCtx ctx(30);
  ctx.max_newton_iters = 15;
  auto no_root = [](const Real& x) { return std::pair<Real, Real>(x * x + 1, 2 * x); };
  try {
    newton_1d<Real>(no_root, ctx.real(3), ctx);
    FAIL("expected a convergence failure");
  } catch (const ConvergenceFailure& e) {
    CHECK(!e.last_iterate().empty());
  } catch (const SingularDerivative&) {
    // An iterate can land where 2x vanishes; also a legitimate report.
  }
  CHECK_THROWS_AS(newton_1d<Real>(no_root, ctx.real(0), ctx), SingularDerivative);
}

TEST_CASE("newton_2d: linear system and double root") {
  const PrecisionCtx ctx(40);
  const System2 linear = [](const Complex& e, const Complex& l) {
    return SystemValue{e - l, e + l - Complex(2), std::nullopt};
  };
  const Root2Result a = newton_2d(linear, Complex(0), Complex(0), ctx);
  CHECK(abs(a.e - Complex(1)) < ctx.tol);
  CHECK(abs(a.lambda - Complex(1)) < ctx.tol);

  const System2 fold = [](const Complex& e, const Complex& l) {
    return SystemValue{e * e - l, Complex(2) * e, std::array<Complex, 4>{Complex(2) * e, Complex(-1), Complex(2), Complex(0)}};
  };
  const Root2Result b = newton_2d(fold, Complex(Real(0.1)), Complex(Real(0.1)), ctx);
  CHECK(abs(b.e) < ctx.tol);
  CHECK(abs(b.lambda) < ctx.tol);
  CHECK(b.residual_f <= ctx.tol);
  CHECK(b.residual_g <= ctx.tol);
}

TEST_CASE("newton_2d: singular Jacobian") {
  const PrecisionCtx ctx(30);
  const System2 degenerate = [](const Complex& e, const Complex& l) {
    return SystemValue{e + l - Complex(1), e + l - Complex(2), std::nullopt};
  };
  CHECK_THROWS_AS(newton_2d(degenerate, Complex(0), Complex(0), ctx), SingularJacobian);
}

TEST_CASE("discriminant_in_E: quadratic examples") {
  const PrecisionCtx ctx(40);
  using P = Polynomial<Complex>;
  // E^2 - lambda
  const BivariatePolynomial f1(std::vector<P>{P{Complex(0), Complex(-1)}, P{}, P{Complex(1)}});
  const P d1 = discriminant_in_E(f1, ctx);
  const auto r1 = polynomial_roots(d1, ctx);
  REQUIRE(r1.size() == 1);
  CHECK(abs(r1[0]) < ctx.pow10(-15));

  // E^2 - 2 lambda E + 1: discriminant 4 lambda^2 - 4
  const BivariatePolynomial f2(std::vector<P>{P{Complex(1)}, P{Complex(0), Complex(-2)}, P{Complex(1)}});
  auto r2 = polynomial_roots(discriminant_in_E(f2, ctx), ctx);
  REQUIRE(r2.size() == 2);
  std::sort(r2.begin(), r2.end(), [](const Complex& a, const Complex& b) { return a.re < b.re; });
  CHECK(abs(r2[0] + Complex(1)) < ctx.pow10(-15));
  CHECK(abs(r2[1] - Complex(1)) < ctx.pow10(-15));
}

TEST_CASE("discriminant_in_E: degree below 2 is rejected") {
  using P = Polynomial<Complex>;
  const BivariatePolynomial f(std::vector<P>{P{Complex(0), Complex(1)}, P{Complex(1)}});
  CHECK_THROWS_AS(discriminant_in_E(f, PrecisionCtx(30)), InvalidInput);
}

TEST_CASE("discriminant vanishes where F has a double root in E") {
  const PrecisionCtx ctx(40);
  using P = Polynomial<Complex>;
  // (E - lambda)(E - (2 - lambda))(E - 3): double root at lambda = 1.
  const P a{Complex(0), Complex(1)}, b{Complex(2), Complex(-1)}, c{Complex(3)};
  // (E - a)(E - b)(E - c) = E^3 - (a+b+c) E^2 + (ab+bc+ca) E - abc
  auto cubic = [](const P& a, const P& b, const P& c) {
    return BivariatePolynomial(
        std::vector<P>{P{} - a * b * c, a * b + b * c + c * a, P{} - (a + b + c), P{Complex(1)}});
  };
  const BivariatePolynomial f = cubic(a, b, c);
  const P disc = discriminant_in_E(f, ctx);
  const Complex at_double = disc(Complex(1));
  const Complex away = disc(Complex(Real(1.5)));
  CHECK(abs(at_double) < ctx.pow10(-ctx.digits / 2) * abs(away));

  // (E - lambda)^2 (E - lambda^2 - 4): discriminant identically zero.
  const P sq{Complex(4), Complex(0), Complex(1)};
  const BivariatePolynomial g = cubic(a, a, sq);
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int k = 0; k < 5; ++k) {
    const Complex l = ctx.lift(Complex(Real(u(rng)), Real(u(rng))));
    const Polynomial<Complex> ge = at_lambda(g, l);
    Real scale(0);
    for (const auto& coef : ge.coeffs()) scale = max(scale, abs(coef));
    CHECK(abs(discriminant(ge, ctx)) < ctx.pow10(-ctx.digits / 2) * pow(scale, 4));
  }
}

TEST_CASE("discriminant of a 2x2 variational matrix matches an eigenvalue-collision scan") {
  const PrecisionCtx ctx(40);
  const ParityBasis basis{Parity::even, 2};
  const BivariatePolynomial f = secular_polynomial_symbolic(basis, ctx);
  auto roots = polynomial_roots(discriminant_in_E(f, ctx), ctx);
  REQUIRE(roots.size() == 2);

  // Scan: at each lambda, eigenvalue gap of the 2x2 matrix by the quadratic formula.
  const Real g00 = gaussian_matrix_element(0, 0, ctx), g02 = gaussian_matrix_element(0, 2, ctx),
             g22 = gaussian_matrix_element(2, 2, ctx);
  auto gap = [&](const Complex& l) {
    const Complex a = Complex(Real(0.5)) - l * Complex(g00), d = Complex(Real(2.5)) - l * Complex(g22),
                  b = -l * Complex(g02);
    return abs(sqrt((a - d) * (a - d) + Complex(4) * b * b));
  };
  for (const Complex& r : roots) {
    // Coarse grid in a 0.5 box around the root, then local refinement.
    Complex best = r + Complex(Real(0.25), Real(0.25));
    Real step(0.05);
    for (int level = 0; level < 12; ++level) {
      Complex centre = best;
      for (int i = -10; i <= 10; ++i)
        for (int j = -10; j <= 10; ++j) {
          const Complex z = centre + Complex(step * i, step * j);
          if (gap(z) < gap(best)) best = z;
        }
      step = step / 5;
    }
    CHECK(abs(best - r) < Real(1e-6));
  }
}

TEST_CASE("polynomial roots and characteristic polynomial") {
  const PrecisionCtx ctx(40);
  // (x - 1)(x - 2)(x + 3) = x^3 - 7x + 6
  const Polynomial<Real> p{Real(6), Real(-7), Real(0), Real(1)};
  auto r = polynomial_roots(p, ctx);
  std::sort(r.begin(), r.end(), [](const Complex& a, const Complex& b) { return a.re < b.re; });
  REQUIRE(r.size() == 3);
  CHECK(abs(r[0] - Complex(-3)) < ctx.pow10(-30));
  CHECK(abs(r[1] - Complex(1)) < ctx.pow10(-30));
  CHECK(abs(r[2] - Complex(2)) < ctx.pow10(-30));

  std::mt19937 rng(3);
  std::uniform_int_distribution<int> pick(-5, 5);
  Matrix<Real> a(4, 4);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) a(i, j) = ctx.real(pick(rng));
  const Polynomial<Real> cp = characteristic_polynomial(a, ctx);
  for (int x = -3; x <= 3; ++x) {
    Matrix<Real> shifted = a;
    for (std::size_t i = 0; i < 4; ++i) shifted(i, i) -= x;
    CHECK(abs(cp(ctx.real(x)) - det(shifted, ctx)) < ctx.pow10(-30));
  }
}

TEST_CASE("shared_digits") {
  CHECK(shared_digits(Real(1.23456), Real(1.23457)) == 5);
  CHECK(shared_digits(Real(2), Real(3)) == 0);
  CHECK(shared_digits(Complex(Real(1), Real(2)), Complex(Real(1), Real(2))) > 15);
}

TEST_CASE("precision contract") {
  CHECK_NOTHROW(PrecisionCtx(30).validate());
  PrecisionCtx bad(30);
  bad.tol = bad.pow10(-25);
  CHECK_THROWS_AS(bad.validate(), InvalidInput);
  CHECK_THROWS_AS(PrecisionCtx(0).validate(), InvalidInput);
}

TEST_CASE("results are bit-identical across repeated runs") {
  const PrecisionCtx ctx(60);
  Matrix<Real> m(6, 6);
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j) m(i, j) = ctx.real(1) / static_cast<long>(i + 2 * j + 1);
  const Real a = det(m, ctx), b = det(m, ctx);
  CHECK(a == b);
  CHECK(a.str(70) == b.str(70));
}
