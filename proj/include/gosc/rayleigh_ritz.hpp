#pragma once

// Variational (Rayleigh-Ritz) solver in one parity sector of the oscillator
// basis: matrix assembly, symmetric eigensolution, secular polynomials,
// critical couplings and discriminant-based exceptional-point seeds.

#include <optional>
#include <utility>
#include <vector>

#include "gosc/matrix.hpp"
#include "gosc/numerics.hpp"
#include "gosc/oscillator.hpp"
#include "gosc/polynomial.hpp"
#include "gosc/precision.hpp"

namespace gosc {

struct RRMatrix {
  ParityBasis basis;
  Real lambda;
  Matrix<Real> entries;
};

/// Complex coupling: the matrix is complex-symmetric, not Hermitian.
struct ComplexRRMatrix {
  ParityBasis basis;
  Complex lambda;
  Matrix<Complex> entries;
};

enum class Method { RR, RPM, PT };
std::string to_string(Method m);
Method parse_method(const std::string& text);

struct SpectralPoint {
  int n = 0;  // global quantum number
  Real lambda;
  Real energy;
  int basis_size = 0;
  Method method = Method::RR;
};

/// Exceptional point: (lambda, E) with F = dF/dE = 0. `branch_label` holds
/// the global indices of the two coalescing states when known.
struct ExceptionalPoint {
  Parity sector = Parity::even;
  std::optional<std::pair<int, int>> branch_label;
  Complex lambda;
  Complex energy;
  std::pair<Real, Real> residuals;
  int source_D = 0;
  int converged_digits = 0;  // shared with the previous ladder rung, 0 if none
};

RRMatrix assemble(const ParityBasis& basis, const Real& lambda, const PrecisionCtx& ctx);
ComplexRRMatrix assemble(const ParityBasis& basis, const Complex& lambda, const PrecisionCtx& ctx);

/// Eigenvalues in ascending order with matching unit eigenvectors (columns).
struct Eigensystem {
  std::vector<Real> values;
  Matrix<Real> vectors;
};

/// Householder tridiagonalization followed by implicit-shift QL.
/// Throws InvalidInput when the matrix is not exactly symmetric.
Eigensystem eigensystem(const RRMatrix& m, const PrecisionCtx& ctx);
std::vector<Real> eigenvalues(const RRMatrix& m, const PrecisionCtx& ctx);
/// Complex-coupling eigenvalues, as roots of the secular polynomial, sorted by
/// real part.
std::vector<Complex> eigenvalues(const ComplexRRMatrix& m, const PrecisionCtx& ctx);

const std::vector<int>& default_rr_schedule();  // 10, 20, 40, 80, 160

/// Raises D along `schedule` until two successive approximations of E_n
/// differ by less than 10^(-target_digits); returns the last point. Throws
/// ConvergenceFailure (trace = ladder values) when the schedule runs out.
SpectralPoint converge_state(int n, const Real& lambda, int target_digits, const PrecisionCtx& ctx,
                             const std::vector<int>& schedule = default_rr_schedule());

/// Fixed-size eigenpair oracle for hft_residual.
EigenOracle rr_oracle(int D, const PrecisionCtx& ctx);

struct CriticalPoint {
  int D = 0;
  Real lambda;
};

/// lambda_n^c(D): root of det(H_D(lambda)) at E = 0 for each D of the schedule,
/// each seeded by the previous one. Throws BranchLoss when a root leaves
/// lambda > 0 or stops belonging to state n.
std::vector<CriticalPoint> critical_lambda_rr(int n, const std::vector<int>& schedule, const PrecisionCtx& ctx);

/// det(H_D - E I) as a polynomial in E.
Polynomial<Real> secular_polynomial(const RRMatrix& m, const PrecisionCtx& ctx);
Polynomial<Complex> secular_polynomial(const ComplexRRMatrix& m, const PrecisionCtx& ctx);

constexpr int kSymbolicSecularCap = 16;
/// det(H_D(lambda) - E I) with coefficients that are polynomials in lambda.
/// Throws CapacityError for D > kSymbolicSecularCap.
BivariatePolynomial secular_polynomial_symbolic(const ParityBasis& basis, const PrecisionCtx& ctx);

/// Closed rectangle in the complex lambda plane.
struct SearchBox {
  Real re_min, re_max, im_min, im_max;
  bool contains(const Complex& z) const;
  void validate() const;
};

struct EPSeed {
  Complex lambda;
  Complex energy;  // mean of the two closest eigenvalues at lambda
  std::optional<std::pair<int, int>> branch_label;
};

enum class SeedMode { grid, symbolic };

struct SeedOptions {
  SeedMode mode = SeedMode::grid;
  int grid = 40;  // points per side of the box in grid mode
  bool label = true;
};

/// Roots of Disc_E F_D(E, lambda) inside `box`, each paired with the
/// double-root energy estimate. Empty when there are none.
std::vector<EPSeed> ep_seeds(Parity sector, int D, const SearchBox& box, const PrecisionCtx& ctx,
                             const SeedOptions& options = {});

/// Discriminant of the secular polynomial at a fixed coupling.
Complex secular_discriminant(const ParityBasis& basis, const Complex& lambda, const PrecisionCtx& ctx);

/// Global indices of the two states that coalesce at an exceptional point,
/// found by following the RR eigenvalues from lambda = 0 along the segment to
/// `lambda_ep` and picking the pair closest to `energy_ep`.
std::pair<int, int> ep_branch_label(Parity sector, int D, const Complex& lambda_ep, const Complex& energy_ep,
                                    const PrecisionCtx& ctx);

}  // namespace gosc
