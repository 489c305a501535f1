#pragma once

// Model: H = -1/2 d^2/dx^2 + x^2/2 - lambda * exp(-x^2), in the basis of
// unit-frequency harmonic-oscillator eigenfunctions.

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "gosc/autodiff.hpp"
#include "gosc/errors.hpp"
#include "gosc/precision.hpp"
#include "gosc/real.hpp"

namespace gosc {

enum class Parity { even = 0, odd = 1 };

/// Parity symbol s: 0 for even states, 1 for odd.
constexpr int parity_symbol(Parity p) { return p == Parity::even ? 0 : 1; }
constexpr Parity parity_of_state(int n) { return n % 2 == 0 ? Parity::even : Parity::odd; }
std::string to_string(Parity p);
Parity parse_parity(const std::string& text);

/// Symmetry sector plus truncation size. Sector-local index i maps to the
/// oscillator level 2i + s.
struct ParityBasis {
  Parity parity = Parity::even;
  int size = 1;

  int level(int i) const { return 2 * i + parity_symbol(parity); }
  void validate() const {
    if (size < 1) throw InvalidInput("basis size must be positive");
  }
};

/// <m| exp(-x^2) |n> between normalized oscillator eigenfunctions:
/// (-1)^((m-n)/2) (2k)! / (4^k k! sqrt(2 m! n!)), k = (m+n)/2, and exactly 0
/// when m and n have different parity.
Real gaussian_matrix_element(int m, int n, const PrecisionCtx& ctx);

/// <m| H_0 |n> = (n + 1/2) delta_mn.
Real h0_matrix_element(int m, int n);

/// x^(2k) Taylor coefficients of Q(x) = x^2 - 2 lambda exp(-x^2) - 2E, the
/// right-hand side of psi'' = Q psi.
template <class T>
std::vector<T> potential_series_coeffs(const T& energy, const T& lambda, int k_max, const PrecisionCtx& ctx) {
  if (k_max < 0) throw InvalidInput("potential_series_coeffs: k_max must be non-negative");
  std::vector<T> q;
  q.reserve(static_cast<std::size_t>(k_max) + 1);
  q.push_back(T(-2) * energy - T(2) * lambda);
  if (k_max >= 1) q.push_back(T(1) + T(2) * lambda);
  Real inv_fact = ctx.real(1);
  for (int k = 2; k <= k_max; ++k) {
    inv_fact = inv_fact / k;
    const Real c = (k % 2 == 0 ? -2 : 2) * inv_fact;  // -2 (-1)^k / k!
    q.push_back(from_real<T>(c) * lambda);
  }
  return q;
}

/// Second-order perturbation polynomial E_n^PT(lambda) = a0 + a1 lambda + a2 lambda^2
/// for n in {0, 1}.
struct PTPolynomial {
  int n = 0;
  std::array<Real, 3> coeffs;  // a0, a1, a2

  Real operator()(const Real& lambda) const { return coeffs[0] + lambda * (coeffs[1] + lambda * coeffs[2]); }
};

/// Coefficients evaluated at ctx precision:
///   n = 0: 1/2, -1/sqrt(2), -ln(8 - 4 sqrt(3)) / 2
///   n = 1: 3/2, -sqrt(2)/4, -(2 sqrt(3) - 3 (1 - ln(8 - 4 sqrt(3)))) / 24
PTPolynomial pt_polynomial(int n, const PrecisionCtx& ctx);
Real pt_energy(int n, const Real& lambda, const PrecisionCtx& ctx);

/// Positive root of E_n^PT(lambda) = 0.
Real pt_critical_lambda(int n, const PrecisionCtx& ctx);

/// Eigenpair returned by an eigenvalue oracle for the Hellmann-Feynman check.
struct EigenState {
  Real energy;
  std::vector<Real> vector;  // normalized coefficients in `basis`
  ParityBasis basis;
};

using EigenOracle = std::function<EigenState(int n, const Real& lambda)>;

/// <psi| exp(-x^2) |psi> for a state expanded in a parity basis.
Real gaussian_expectation(const EigenState& state, const PrecisionCtx& ctx);

/// |(E(lambda+h) - E(lambda-h)) / (2h) + <exp(-x^2)>|, the mismatch between
/// the finite-difference slope and the Hellmann-Feynman expectation value.
struct HftReport {
  Real slope;        // finite-difference dE/dlambda
  Real expectation;  // <exp(-x^2)> at lambda
  Real residual;
};
HftReport hft_residual(int n, const Real& lambda, const Real& h, const EigenOracle& solver, const PrecisionCtx& ctx);

}  // namespace gosc
