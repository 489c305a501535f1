#pragma once

// Riccati-Pade method.
//
// With psi'' = Q(x) psi and the regularized logarithmic derivative
// f(x) = s/x - psi'(x)/psi(x) = sum_j f_j x^(2j+1), the Riccati equation
// f' + 2 s f / x - f^2 + Q = 0 gives
//
//   (2k + 1 + 2s) f_k = sum_{i+j=k-1} f_i f_j - Q_k.
//
// Eigenvalues (or critical couplings) are roots of the Hankel determinants
// H_D^d = |f_{i+j+d-1}|, i, j = 1..D.

#include <functional>
#include <string>
#include <vector>

#include "gosc/autodiff.hpp"
#include "gosc/matrix.hpp"
#include "gosc/numerics.hpp"
#include "gosc/oscillator.hpp"
#include "gosc/precision.hpp"
#include "gosc/rayleigh_ritz.hpp"

namespace gosc {

struct HankelSpec {
  int D = 2;  // determinant dimension
  int d = 0;  // displacement

  /// Highest Riccati coefficient index the determinant touches.
  int max_index() const { return 2 * D + d - 1; }
  void validate() const {
    if (D < 2) throw InvalidInput("Hankel dimension D must be at least 2");
    if (d < 0) throw InvalidInput("Hankel displacement d must be non-negative");
  }
};

template <class T>
struct RiccatiSeries {
  int s = 0;
  std::vector<T> coeffs;  // f_0 .. f_kmax
};

template <class T>
RiccatiSeries<T> riccati_coeffs(int s, const T& energy, const T& lambda, int k_max, const PrecisionCtx& ctx) {
  if (s != 0 && s != 1) throw InvalidInput("riccati_coeffs: s must be 0 or 1");
  T e = energy, l = lambda;
  detail::lift_in_place(e, ctx);
  detail::lift_in_place(l, ctx);
  const std::vector<T> q = potential_series_coeffs(e, l, k_max, ctx);
  RiccatiSeries<T> out;
  out.s = s;
  auto& f = out.coeffs;
  f.reserve(q.size());
  for (int k = 0; k <= k_max; ++k) {
    // sum_{i+j=k-1} f_i f_j, using the symmetry of the convolution.
    T acc(0);
    if (k >= 1) {
      const int m = k - 1;
      for (int i = 0; 2 * i < m; ++i) acc += f[i] * f[m - i];
      acc = acc + acc;
      if (m % 2 == 0) acc += f[m / 2] * f[m / 2];
    }
    f.push_back((acc - q[k]) / T(2 * k + 1 + 2 * s));
  }
  return out;
}

/// Hankel matrix with entries f_{i+j+d-1}, i, j = 1..D.
template <class T>
Matrix<T> hankel_matrix(const HankelSpec& spec, const std::vector<T>& f) {
  spec.validate();
  if (static_cast<int>(f.size()) <= spec.max_index()) throw InvalidInput("hankel_matrix: too few coefficients");
  Matrix<T> m(spec.D, spec.D);
  for (int i = 1; i <= spec.D; ++i)
    for (int j = 1; j <= spec.D; ++j) m(i - 1, j - 1) = f[i + j + spec.d - 1];
  return m;
}

/// Refuses Hankel work with D > 10 below 30 digits.
void check_hankel_precision(const HankelSpec& spec, const PrecisionCtx& ctx);

/// Working digits the solvers use for dimension D: max(ctx.digits, 30, 2.5 D).
int hankel_working_digits(int D, int requested_digits);

template <class T>
T hankel(const HankelSpec& spec, int s, const T& energy, const T& lambda, const PrecisionCtx& ctx) {
  spec.validate();
  check_hankel_precision(spec, ctx);
  const auto series = riccati_coeffs(s, energy, lambda, spec.max_index(), ctx);
  return det(hankel_matrix(spec, series.coeffs), ctx);
}

/// Context for Hankel work at dimension D: hankel_working_digits(D, base.digits)
/// digits and tol = 10^(-digits/3), which stays clear of the rounding floor of
/// the determinant near its roots.
PrecisionCtx hankel_ctx(int D, const PrecisionCtx& base);

/// hankel_ctx(D, base), with the digits doubled (up to four times) until
/// `probe` evaluated at 1.5x the digits agrees to a third of the digits.
/// Cancellation in the determinant grows with |lambda| as well as with D.
/// Throws PrecisionError when no tried precision is adequate.
PrecisionCtx checked_hankel_ctx(int D, const PrecisionCtx& base,
                                const std::function<Complex(const PrecisionCtx&)>& probe);

const std::vector<int>& default_rpm_ladder();  // 10, 15, 20, 30, 40, 60

/// One rung of a D ladder.
template <class T>
struct LadderRung {
  int D = 0;
  int working_digits = 0;
  T value;
  Real residual;
  int evaluations = 0;
};

template <class T>
struct LadderResult {
  T value;                 // value at the largest D
  int D = 0;
  int converged_digits = 0;  // leading digits shared by the last two rungs
  std::vector<LadderRung<T>> rungs;
};

/// Real root of a Hankel determinant. Besides the root that converges with
/// D, H^d has real roots scattered at every scale around it; the solvers
/// bracket all sign changes on a log-spaced grid around the seed, refine each
/// by safeguarded Newton, and keep the one where H^(d+1) nearly vanishes too.
struct HankelRoot {
  Real root;
  Real residual;     // |H^d / H^d'| at the root, in units of the variable
  Real cross_check;  // |H^(d+1) / H^(d+1)'| at the root
  int evaluations = 0;
};

/// Root in E of the Hankel determinant at fixed lambda. Throws BranchLoss
/// when the root lands more than 0.5 from the seed.
HankelRoot solve_E(const HankelSpec& spec, int s, const Real& lambda, const Real& e_seed, const PrecisionCtx& ctx);
LadderResult<Real> solve_E(const std::vector<int>& ladder, int d, int s, const Real& lambda, const Real& e_seed,
                           const PrecisionCtx& ctx);

/// Root in lambda of the Hankel determinant at E = 0. Same search and
/// branch check as solve_E, and lambda must stay positive.
HankelRoot solve_critical_lambda(const HankelSpec& spec, int s, const Real& lambda_seed, const PrecisionCtx& ctx);
LadderResult<Real> solve_critical_lambda(const std::vector<int>& ladder, int d, int s, const Real& lambda_seed,
                                         const PrecisionCtx& ctx);

/// Solution of H = 0, dH/dE = 0 by two-variable Newton. Derivatives are
/// carried exactly through the Riccati recursion and the elimination. The
/// pair is premultiplied by the inverse Jacobian at the seed, which leaves
/// the Newton steps unchanged and makes the two residuals approximate
/// distances in E and lambda. Throws BranchLoss when |lambda| ends beyond
/// twice the seed's modulus.
ExceptionalPoint solve_ep(const HankelSpec& spec, int s, const Complex& e_seed, const Complex& lambda_seed,
                          const PrecisionCtx& ctx);

struct EPLadder {
  ExceptionalPoint point;  // largest D
  std::vector<ExceptionalPoint> rungs;
};
EPLadder solve_ep(const std::vector<int>& ladder, int d, int s, const Complex& e_seed, const Complex& lambda_seed,
                  const PrecisionCtx& ctx);

}  // namespace gosc
