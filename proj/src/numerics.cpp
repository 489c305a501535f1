#include "gosc/numerics.hpp"

#include <algorithm>
#include <cmath>

namespace gosc {

namespace {

Real step_scale(const Real& x) { return max(Real(1), abs(x)); }
Real step_scale(const Complex& z) { return max(Real(1), abs(z)); }

template <class T>
std::string render(const T& x) {
  if constexpr (std::is_same_v<T, Real>) {
    return x.str(30);
  } else {
    return x.re.str(30) + (x.im.sign() < 0 ? "" : "+") + x.im.str(30) + "i";
  }
}

}  // namespace

template <class T>
RootResult<T> newton_1d(const std::type_identity_t<std::function<std::pair<T, T>(const T&)>>& f, const T& x0,
                        const PrecisionCtx& ctx) {
  ctx.validate();
  const Real singular = ctx.pow10(-ctx.digits);
  T x = x0;
  detail::lift_in_place(x, ctx);
  auto [fx, dfx] = f(x);
  Real res = magnitude(fx);
  std::vector<std::string> trace{render(x)};

  for (int it = 1; it <= ctx.max_newton_iters; ++it) {
    if (magnitude(dfx) < singular) {
      throw SingularDerivative("newton_1d: derivative magnitude " + magnitude(dfx).str(6) + " at x = " + render(x));
    }
    T step = fx / dfx;
    T trial = x - step;
    auto [ft, dft] = f(trial);
    Real res_trial = magnitude(ft);
    const Real tiny = ctx.tol * step_scale(x);
    for (int h = 0; h < 20 && !(res_trial < res) && magnitude(step) > tiny; ++h) {
      step = step / T(2);
      trial = x - step;
      std::tie(ft, dft) = f(trial);
      res_trial = magnitude(ft);
    }
    x = std::move(trial);
    fx = std::move(ft);
    dfx = std::move(dft);
    res = std::move(res_trial);
    trace.push_back(render(x));
    const Real step_mag = magnitude(step);
    if (step_mag <= ctx.tol * step_scale(x) && res <= ctx.tol) {
      return {std::move(x), std::move(res), step_mag, it};
    }
  }
  throw ConvergenceFailure("newton_1d: no convergence in " + std::to_string(ctx.max_newton_iters) + " iterations",
                           std::move(trace));
}

template <class T>
RootResult<T> newton_1d(const std::type_identity_t<std::function<T(const T&)>>& f, const T& x0,
                        const PrecisionCtx& ctx) {
  const Real h0 = ctx.pow10(-ctx.digits / 2);
  auto with_derivative = [&](const T& x) {
    const T h = T(h0 * step_scale(x));
    T value = f(x);
    T deriv = (f(x + h) - f(x - h)) / (T(2) * h);
    return std::pair<T, T>(std::move(value), std::move(deriv));
  };
  return newton_1d<T>(with_derivative, x0, ctx);
}

template RootResult<Real> newton_1d<Real>(const std::function<std::pair<Real, Real>(const Real&)>&, const Real&,
                                          const PrecisionCtx&);
template RootResult<Complex> newton_1d<Complex>(const std::function<std::pair<Complex, Complex>(const Complex&)>&,
                                                const Complex&, const PrecisionCtx&);
template RootResult<Real> newton_1d<Real>(const std::function<Real(const Real&)>&, const Real&, const PrecisionCtx&);
template RootResult<Complex> newton_1d<Complex>(const std::function<Complex(const Complex&)>&, const Complex&,
                                                const PrecisionCtx&);

namespace {

std::array<Complex, 4> fd_jacobian(const System2& system, const Complex& e, const Complex& lambda,
                                   const PrecisionCtx& ctx) {
  const Real h0 = ctx.pow10(-ctx.digits / 2);
  const Complex he(h0 * step_scale(e), Real(0));
  const Complex hl(h0 * step_scale(lambda), Real(0));
  const SystemValue ep = system(e + he, lambda), em = system(e - he, lambda);
  const SystemValue lp = system(e, lambda + hl), lm = system(e, lambda - hl);
  const Complex two_he = Complex(2) * he, two_hl = Complex(2) * hl;
  return {(ep.f - em.f) / two_he, (lp.f - lm.f) / two_hl, (ep.g - em.g) / two_he, (lp.g - lm.g) / two_hl};
}

Real residual(const SystemValue& v) { return max(abs(v.f), abs(v.g)); }

}  // namespace

Root2Result newton_2d(const System2& system, const Complex& e0, const Complex& lambda0, const PrecisionCtx& ctx) {
  ctx.validate();
  Complex e = ctx.lift(e0), lambda = ctx.lift(lambda0);
  SystemValue v = system(e, lambda);
  Real res = residual(v);
  std::vector<std::string> trace{render(lambda)};

  for (int it = 1; it <= ctx.max_newton_iters; ++it) {
    const std::array<Complex, 4> j = v.jacobian ? *v.jacobian : fd_jacobian(system, e, lambda, ctx);
    const Complex d = j[0] * j[3] - j[1] * j[2];
    const Real scale = max(max(abs(j[0]), abs(j[1])), max(abs(j[2]), abs(j[3])));
    if (scale.is_zero() || abs(d) < ctx.pow10(-ctx.digits) * scale * scale) {
      throw SingularJacobian("newton_2d: singular Jacobian at lambda = " + render(lambda));
    }
    // Cramer's rule for J * (de, dl) = (f, g).
    Complex de = (v.f * j[3] - j[1] * v.g) / d;
    Complex dl = (j[0] * v.g - j[2] * v.f) / d;

    Complex e_trial = e - de, l_trial = lambda - dl;
    SystemValue vt = system(e_trial, l_trial);
    Real res_trial = residual(vt);
    const Real tiny = ctx.tol * max(step_scale(e), step_scale(lambda));
    for (int h = 0; h < 20 && !(res_trial < res) && max(abs(de), abs(dl)) > tiny; ++h) {
      de = de / Complex(2);
      dl = dl / Complex(2);
      e_trial = e - de;
      l_trial = lambda - dl;
      vt = system(e_trial, l_trial);
      res_trial = residual(vt);
    }
    e = std::move(e_trial);
    lambda = std::move(l_trial);
    v = std::move(vt);
    res = std::move(res_trial);
    trace.push_back(render(lambda));

    const bool small_step = abs(de) <= ctx.tol * step_scale(e) && abs(dl) <= ctx.tol * step_scale(lambda);
    if (small_step && abs(v.f) <= ctx.tol && abs(v.g) <= ctx.tol) {
      return {std::move(e), std::move(lambda), abs(v.f), abs(v.g), it, std::move(trace)};
    }
  }
  throw ConvergenceFailure("newton_2d: no convergence in " + std::to_string(ctx.max_newton_iters) + " iterations",
                           std::move(trace));
}

Polynomial<Complex> at_lambda(const BivariatePolynomial& f, const Complex& lambda) {
  std::vector<Complex> c;
  c.reserve(f.coeffs().size());
  for (const auto& coeff : f.coeffs()) c.push_back(coeff(lambda));
  return Polynomial<Complex>(std::move(c));
}

Polynomial<Complex> divide(const Polynomial<Complex>& num, const Polynomial<Complex>& den) {
  if (den.is_zero()) throw InvalidInput("divide: zero divisor");
  const int n = num.degree(), d = den.degree();
  if (n < d) return {};
  std::vector<Complex> rem = num.coeffs();
  std::vector<Complex> q(static_cast<std::size_t>(n - d + 1), Complex(0));
  for (int k = n - d; k >= 0; --k) {
    q[static_cast<std::size_t>(k)] = rem[static_cast<std::size_t>(k + d)] / den.leading();
    for (int j = 0; j <= d; ++j) rem[static_cast<std::size_t>(k + j)] -= q[static_cast<std::size_t>(k)] * den[static_cast<std::size_t>(j)];
  }
  return Polynomial<Complex>(std::move(q));
}

Polynomial<Complex> discriminant_in_E(const BivariatePolynomial& f, const PrecisionCtx& ctx, const Real& radius) {
  const int n = f.degree();
  if (n < 2) throw InvalidInput("discriminant_in_E: degree in E must be at least 2");

  // Degree bound of Res(F, F') in lambda from the Sylvester row structure.
  int max_f = 0, max_df = 0;
  for (int k = 0; k <= n; ++k) {
    max_f = std::max(max_f, f[static_cast<std::size_t>(k)].degree());
    if (k >= 1) max_df = std::max(max_df, f[static_cast<std::size_t>(k)].degree());
  }
  const int bound = (n - 1) * max_f + n * max_df;
  const int samples = bound + 1;

  const Real r = ctx.lift(radius);
  const Real two_pi = 2 * Real::pi(ctx.bits());
  std::vector<Complex> nodes, values;
  nodes.reserve(static_cast<std::size_t>(samples));
  values.reserve(static_cast<std::size_t>(samples));
  for (int k = 0; k < samples; ++k) {
    const Complex w = exp(Complex(Real::zero(ctx.bits()), two_pi * k / samples));
    nodes.push_back(Complex(r) * w);
    const Polynomial<Complex> fe = at_lambda(f, nodes.back());
    if (fe.degree() < n) {
      // Leading coefficient vanishes at this node; Res is still defined by
      // the formal Sylvester matrix of the full-degree polynomial.
      std::vector<Complex> c = fe.coeffs();
      c.resize(static_cast<std::size_t>(n + 1), Complex(0));
      Matrix<Complex> s(static_cast<std::size_t>(2 * n - 1), static_cast<std::size_t>(2 * n - 1), Complex(0));
      for (int row = 0; row < n - 1; ++row)
        for (int k2 = 0; k2 <= n; ++k2) s(row, row + k2) = c[static_cast<std::size_t>(n - k2)];
      for (int row = 0; row < n; ++row)
        for (int k2 = 0; k2 < n; ++k2)
          s(n - 1 + row, row + k2) = c[static_cast<std::size_t>(n - k2)] * Complex(n - k2);
      values.push_back(det(std::move(s), ctx));
    } else {
      values.push_back(det(sylvester(fe, fe.derivative()), ctx));
    }
  }

  // Inverse DFT: c_j = (1/N) sum_k v_k w^(-jk) / r^j.
  std::vector<Complex> coeffs(static_cast<std::size_t>(samples), Complex(0));
  Real peak = Real::zero(ctx.bits());
  for (int j = 0; j < samples; ++j) {
    Complex acc(Real::zero(ctx.bits()), Real::zero(ctx.bits()));
    for (int k = 0; k < samples; ++k) {
      const long idx = (static_cast<long>(j) * k) % samples;
      const Complex w = exp(Complex(Real::zero(ctx.bits()), -two_pi * idx / samples));
      acc += values[static_cast<std::size_t>(k)] * w;
    }
    acc = acc / Complex(Real(samples) * pow(r, j));
    peak = max(peak, abs(acc));
    coeffs[static_cast<std::size_t>(j)] = std::move(acc);
  }
  const Real cutoff = peak * ctx.pow10(-ctx.digits / 2);
  while (!coeffs.empty() && abs(coeffs.back()) < cutoff) coeffs.pop_back();
  for (auto& c : coeffs) {
    if (abs(c) < cutoff) c = Complex(0);
  }
  Polynomial<Complex> res(std::move(coeffs));

  Polynomial<Complex> disc = divide(res, f.leading());
  if ((n * (n - 1) / 2) % 2 != 0) disc = Complex(-1) * disc;
  return disc;
}

std::vector<Complex> polynomial_roots(const Polynomial<Complex>& p_in, const PrecisionCtx& ctx,
                                      std::span<const Complex> initial) {
  const int n = p_in.degree();
  if (n < 1) throw InvalidInput("polynomial_roots: degree must be at least 1");
  std::vector<Complex> c = p_in.coeffs();
  for (auto& x : c) detail::lift_in_place(x, ctx);
  const Polynomial<Complex> p(std::move(c));
  const Polynomial<Complex> dp = p.derivative();

  std::vector<Complex> z;
  if (initial.size() == static_cast<std::size_t>(n)) {
    for (const auto& x : initial) z.push_back(ctx.lift(x));
  } else {
    // Starting circle from the Fujiwara bound, rotated off the axes.
    Real bound = Real::zero(ctx.bits());
    const Real lead = abs(p.leading());
    for (int k = 0; k < n; ++k) {
      const Real ratio = abs(p[static_cast<std::size_t>(k)]) / lead;
      if (ratio.is_zero()) continue;
      Real root = Real::zero(ctx.bits());
      mpfr_rootn_ui(root.raw(), ratio.raw(), static_cast<unsigned long>(n - k), MPFR_RNDN);
      bound = max(bound, root);
    }
    if (bound.is_zero()) bound = ctx.real(1);
    const Real two_pi = 2 * Real::pi(ctx.bits());
    for (int k = 0; k < n; ++k) {
      const Real angle = two_pi * k / n + ctx.real("0.4");
      z.push_back(Complex(bound) * exp(Complex(Real::zero(ctx.bits()), angle)));
    }
  }

  const int max_iters = 200 + 20 * n;
  for (int it = 0; it < max_iters; ++it) {
    bool done = true;
    for (int i = 0; i < n; ++i) {
      Complex& zi = z[static_cast<std::size_t>(i)];
      const Complex pv = p(zi);
      if (pv.is_zero()) continue;
      const Complex ratio = pv / dp(zi);
      Complex sum(Real::zero(ctx.bits()), Real::zero(ctx.bits()));
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        const Complex diff = zi - z[static_cast<std::size_t>(j)];
        if (!diff.is_zero()) sum += Complex(1) / diff;
      }
      const Complex w = ratio / (Complex(1) - ratio * sum);
      zi -= w;
      if (abs(w) > ctx.tol * step_scale(zi)) done = false;
    }
    if (done) return z;
  }
  std::vector<std::string> trace;
  for (const auto& x : z) trace.push_back(render(x));
  throw ConvergenceFailure("polynomial_roots: Aberth iteration did not converge", std::move(trace));
}

std::vector<Complex> polynomial_roots(const Polynomial<Real>& p, const PrecisionCtx& ctx,
                                      std::span<const Complex> initial) {
  std::vector<Complex> c;
  for (const auto& x : p.coeffs()) c.emplace_back(x);
  return polynomial_roots(Polynomial<Complex>(std::move(c)), ctx, initial);
}

int shared_digits(const Real& a, const Real& b) {
  const int cap = bits_to_digits(std::min(a.precision(), b.precision()));
  if (a == b) return cap;
  const Real scale = max(abs(a), abs(b));
  const Real rel = abs(a - b) / scale;
  const double d = -log10(rel).to_double();
  return std::clamp(static_cast<int>(std::floor(d)), 0, cap);
}

int shared_digits(const Complex& a, const Complex& b) {
  return std::min(shared_digits(a.re, b.re), shared_digits(a.im, b.im));
}

}  // namespace gosc
