#include "gosc/rpm.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>

namespace gosc {

void check_hankel_precision(const HankelSpec& spec, const PrecisionCtx& ctx) {
  if (spec.D > 10 && ctx.digits < 30) {
    throw PrecisionError("Hankel dimension " + std::to_string(spec.D) + " needs at least 30 digits, got " +
                         std::to_string(ctx.digits));
  }
}

int hankel_working_digits(int D, int requested_digits) {
  return std::max({requested_digits, 30, static_cast<int>(std::ceil(2.5 * D))});
}

PrecisionCtx hankel_ctx(int D, const PrecisionCtx& base) {
  const int digits = hankel_working_digits(D, base.digits);
  return PrecisionCtx(digits, digits / 3, base.max_newton_iters);
}

const std::vector<int>& default_rpm_ladder() {
  static const std::vector<int> ladder{10, 15, 20, 30, 40, 60};
  return ladder;
}

namespace {

using HankelValue = std::function<Real(int d, const Real& x)>;
using HankelSlope = std::function<Dual<Real>(int d, const Real& x)>;
// Jet in one variable: v, e = d/dx, ee = (1/2) d^2/dx^2.
using HankelJet = std::function<Jet<Real>(int d, const Real& x)>;

struct HankelFunctions {
  HankelValue value;
  HankelSlope slope;
  HankelJet jet;
};

// Refines a root of H^d inside a sign-change bracket [a, b]: Newton steps,
// replaced by bisection whenever they leave the bracket.
Real refine_in_bracket(const HankelSlope& slope, int d, Real a, Real b, int sign_a, int& evaluations,
                       const PrecisionCtx& ctx) {
  Real x = (a + b) / 2;
  for (int it = 0; it < 4 * ctx.max_newton_iters; ++it) {
    const Dual<Real> h = slope(d, x);
    ++evaluations;
    if (h.v.is_zero()) return x;
    (h.v.sign() == sign_a ? a : b) = x;
    Real next = h.d.is_zero() ? (a + b) / 2 : x - h.v / h.d;
    if (!(next > min(a, b) && next < max(a, b))) next = (a + b) / 2;
    const Real step = abs(next - x);
    x = std::move(next);
    if (step <= ctx.tol * max(Real(1), abs(x)) || abs(b - a) <= ctx.tol * max(Real(1), abs(x))) return x;
  }
  return x;
}

// Newton on u = H/H' (Schroeder's iteration), which converges to roots of
// any multiplicity; resolves close pairs that do not change sign on the grid.
std::optional<Real> schroeder(const HankelJet& jet, int d, Real x, const Real& center, const Real& radius,
                              int& evaluations, const PrecisionCtx& ctx) {
  for (int it = 0; it < ctx.max_newton_iters; ++it) {
    const Jet<Real> h = jet(d, x);
    ++evaluations;
    if (h.v.is_zero()) return x;
    if (h.e.is_zero()) return std::nullopt;
    const Real u = h.v / h.e;
    const Real du = 1 - 2 * h.v * h.ee / (h.e * h.e);
    if (du.is_zero()) return std::nullopt;
    const Real step = u / du;
    x -= step;
    if (abs(x - center) > radius) return std::nullopt;
    if (abs(step) <= ctx.tol * max(Real(1), abs(x))) return x;
  }
  return std::nullopt;
}

// A Hankel determinant has, besides the root that converges with D, real
// roots scattered at every scale around it. Candidates are all sign changes
// of H^d on log-spaced grids around each center plus Schroeder limits
// started from local minima of |H^d|; the root kept is the one closest to a
// root of H^(d+1), measured by |H^(d+1)/H^(d+1)'|.
struct Scored {
  Real root;
  Real score;
};

std::optional<Scored> best_on_grid(const HankelFunctions& fn, int d, const std::vector<Real>& centers, const Real& c0,
                                   const Real& radius, int& evaluations, const PrecisionCtx& ctx) {
  // Offsets 10^(-k/2) * radius for k = 0 .. 2 * (digits of tol) - 2.
  const int k_max = 2 * static_cast<int>(std::ceil(-log10(ctx.tol).to_double()));
  const Real ratio = sqrt(ctx.real(10));
  std::vector<Real> grid;
  for (const Real& center : centers) {
    const Real c = ctx.lift(center);
    grid.push_back(c);
    Real off = radius;
    for (int k = 2; k <= k_max; ++k, off = off / ratio) {
      grid.push_back(c - off);
      grid.push_back(c + off);
    }
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  std::vector<Real> h;
  h.reserve(grid.size());
  for (const Real& x : grid) {
    h.push_back(fn.value(d, x));
    ++evaluations;
  }

  std::vector<Real> candidates;
  const std::size_t n = grid.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (h[i].is_zero()) {
      candidates.push_back(grid[i]);
      continue;
    }
    if (i + 1 < n && !h[i + 1].is_zero() && h[i].sign() != h[i + 1].sign()) {
      candidates.push_back(refine_in_bracket(fn.slope, d, grid[i], grid[i + 1], h[i].sign(), evaluations, ctx));
      continue;
    }
    const bool left_lower = i > 0 && !(abs(h[i - 1]) > abs(h[i]));
    const bool right_lower = i + 1 < n && !(abs(h[i + 1]) > abs(h[i]));
    const bool sign_change_nearby = i > 0 && h[i - 1].sign() != h[i].sign();
    if (!left_lower && !right_lower && !sign_change_nearby) {
      if (auto r = schroeder(fn.jet, d, grid[i], c0, 2 * radius, evaluations, ctx)) candidates.push_back(std::move(*r));
    }
  }
  std::optional<Scored> best;
  for (Real& root : candidates) {
    const Dual<Real> check = fn.slope(d + 1, root);
    ++evaluations;
    Real score = check.d.is_zero() ? abs(check.v) : abs(check.v / check.d);
    if (!best || score < best->score) best = Scored{std::move(root), std::move(score)};
  }
  return best;
}

// A Hankel determinant has, besides the root that converges with D, real
// roots scattered at every scale around it. Candidates are all sign changes
// of H^d on log-spaced grids around each center plus Schroeder limits
// started from local minima of |H^d|; the root kept is the one closest to a
// root of H^(d+1), measured by |H^(d+1)/H^(d+1)'|. The grid is then
// re-centered on the winner, since a spurious root next to the true one is
// only resolved by a grid that is fine at that scale.
HankelRoot converging_root(const HankelFunctions& fn, int d, const std::vector<Real>& centers,
                           const PrecisionCtx& ctx) {
  ctx.validate();
  const Real c0 = ctx.lift(centers.front());
  const Real radius = max(Real(1), abs(c0)) / 10;
  int evaluations = 0;
  std::optional<Scored> best = best_on_grid(fn, d, centers, c0, radius, evaluations, ctx);
  if (!best) {
    throw ConvergenceFailure("no root of the Hankel determinant found within " + radius.str(3) + " of the seed " +
                                 c0.str(20),
                             {c0.str(30)});
  }
  for (int pass = 0; pass < 4; ++pass) {
    std::optional<Scored> again = best_on_grid(fn, d, {best->root}, c0, radius, evaluations, ctx);
    if (!again || !(again->score < best->score)) break;
    best = std::move(again);
  }
  const Dual<Real> at = fn.slope(d, best->root);
  Real residual = at.d.is_zero() ? abs(at.v) : abs(at.v / at.d);
  return {std::move(best->root), std::move(residual), std::move(best->score), evaluations};
}

double agreement(const Complex& a, const Complex& b) {
  const Real scale = max(abs(a), abs(b));
  if (scale.is_zero()) return 1e9;
  const Real diff = abs(a - b);
  if (diff.is_zero()) return 1e9;
  return -log10(diff / scale).to_double();
}

}  // namespace

PrecisionCtx checked_hankel_ctx(int D, const PrecisionCtx& base,
                                const std::function<Complex(const PrecisionCtx&)>& probe) {
  PrecisionCtx ctx = hankel_ctx(D, base);
  for (int attempt = 0; attempt < 4; ++attempt) {
    const PrecisionCtx higher(ctx.digits * 3 / 2, ctx.digits / 2, ctx.max_newton_iters);
    if (agreement(probe(ctx), probe(higher)) >= ctx.digits / 3.0) return ctx;
    const int digits = ctx.digits * 2;
    ctx = PrecisionCtx(digits, digits / 3, ctx.max_newton_iters);
  }
  throw PrecisionError("Hankel determinant at D=" + std::to_string(D) + " is not reproducible at " +
                       std::to_string(ctx.digits / 2) + " digits");
}

namespace {

void check_ladder(const std::vector<int>& ladder) {
  if (ladder.empty()) throw InvalidInput("empty D ladder");
  for (std::size_t k = 1; k < ladder.size(); ++k)
    if (ladder[k] <= ladder[k - 1]) throw InvalidInput("D ladder must be strictly increasing");
}

// Each rung scans around the original seed and the previous rung's root:
// small D can land on a poor root, which must not steer the larger ones.
template <class Solve, class Probe>
LadderResult<Real> run_ladder(const std::vector<int>& ladder, int d, const Real& seed, const PrecisionCtx& ctx,
                              Solve solve, Probe probe) {
  check_ladder(ladder);
  LadderResult<Real> out;
  Real x = seed;
  for (std::size_t k = 0; k < ladder.size(); ++k) {
    const int D = ladder[k];
    std::vector<Real> centers{seed};
    if (!(x == seed)) centers.push_back(x);
    // Precision must hold on the grids around every center.
    PrecisionCtx rung_ctx = hankel_ctx(D, ctx);
    for (const Real& c : centers) {
      PrecisionCtx checked =
          checked_hankel_ctx(D, ctx, [&](const PrecisionCtx& pc) { return Complex(probe(HankelSpec{D, d}, c, pc)); });
      if (checked.digits > rung_ctx.digits) rung_ctx = std::move(checked);
    }
    try {
      HankelRoot r = solve(HankelSpec{D, d}, centers, rung_ctx);
      x = r.root;
      out.rungs.push_back({D, rung_ctx.digits, std::move(r.root), std::move(r.residual), r.evaluations});
    } catch (const ConvergenceFailure&) {
      // Small D may have no real root near the seed yet; the last rung must.
      if (k + 1 == ladder.size()) throw;
    }
  }
  out.value = out.rungs.back().value;
  out.D = out.rungs.back().D;
  if (out.rungs.size() >= 2) {
    out.converged_digits = shared_digits(out.rungs.back().value, out.rungs[out.rungs.size() - 2].value);
  }
  return out;
}

HankelRoot root_in_E(const HankelSpec& spec, int s, const Real& lambda, const std::vector<Real>& centers,
                     const PrecisionCtx& ctx) {
  spec.validate();
  const Real l = ctx.lift(lambda);
  const Dual<Real> l_dual(l);
  const Jet<Real> l_jet(l);
  const HankelFunctions fn{
      [&](int d, const Real& e) { return hankel(HankelSpec{spec.D, d}, s, e, l, ctx); },
      [&](int d, const Real& e) { return hankel(HankelSpec{spec.D, d}, s, Dual<Real>::variable(e), l_dual, ctx); },
      [&](int d, const Real& e) { return hankel(HankelSpec{spec.D, d}, s, Jet<Real>::variable_e(e), l_jet, ctx); }};
  HankelRoot r = converging_root(fn, spec.d, centers, ctx);
  const Real& seed = centers.front();
  if (abs(r.root - seed) > Real(0.5)) {
    throw BranchLoss("solve_E: root " + r.root.str(20) + " is more than 0.5 away from the seed " + seed.str(20));
  }
  return r;
}

HankelRoot root_in_lambda(const HankelSpec& spec, int s, const std::vector<Real>& centers, const PrecisionCtx& ctx) {
  spec.validate();
  const Real e = ctx.real(0);
  const Dual<Real> e_dual(e);
  const Jet<Real> e_jet(e);
  // The jet's first variable stands for lambda here.
  const HankelFunctions fn{
      [&](int d, const Real& l) { return hankel(HankelSpec{spec.D, d}, s, e, l, ctx); },
      [&](int d, const Real& l) { return hankel(HankelSpec{spec.D, d}, s, e_dual, Dual<Real>::variable(l), ctx); },
      [&](int d, const Real& l) { return hankel(HankelSpec{spec.D, d}, s, e_jet, Jet<Real>::variable_e(l), ctx); }};
  HankelRoot r = converging_root(fn, spec.d, centers, ctx);
  const Real& seed = centers.front();
  if (r.root.sign() <= 0 || abs(r.root - seed) > Real(0.5)) {
    throw BranchLoss("solve_critical_lambda: root " + r.root.str(20) + " left the branch of the seed " + seed.str(20));
  }
  return r;
}

}  // namespace

HankelRoot solve_E(const HankelSpec& spec, int s, const Real& lambda, const Real& e_seed, const PrecisionCtx& ctx) {
  return root_in_E(spec, s, lambda, {e_seed}, ctx);
}

LadderResult<Real> solve_E(const std::vector<int>& ladder, int d, int s, const Real& lambda, const Real& e_seed,
                           const PrecisionCtx& ctx) {
  return run_ladder(
      ladder, d, e_seed, ctx,
      [&](const HankelSpec& spec, const std::vector<Real>& centers, const PrecisionCtx& c) {
        return root_in_E(spec, s, lambda, centers, c);
      },
      [&](const HankelSpec& spec, const Real& x, const PrecisionCtx& c) {
        return hankel(spec, s, c.lift(x), c.lift(lambda), c);
      });
}

HankelRoot solve_critical_lambda(const HankelSpec& spec, int s, const Real& lambda_seed, const PrecisionCtx& ctx) {
  return root_in_lambda(spec, s, {lambda_seed}, ctx);
}

LadderResult<Real> solve_critical_lambda(const std::vector<int>& ladder, int d, int s, const Real& lambda_seed,
                                         const PrecisionCtx& ctx) {
  return run_ladder(
      ladder, d, lambda_seed, ctx,
      [&](const HankelSpec& spec, const std::vector<Real>& centers, const PrecisionCtx& c) {
        return root_in_lambda(spec, s, centers, c);
      },
      [&](const HankelSpec& spec, const Real& x, const PrecisionCtx& c) {
        return hankel(spec, s, c.real(0), c.lift(x), c);
      });
}

ExceptionalPoint solve_ep(const HankelSpec& spec, int s, const Complex& e_seed, const Complex& lambda_seed,
                          const PrecisionCtx& ctx) {
  spec.validate();
  check_hankel_precision(spec, ctx);
  using J = Jet<Complex>;
  auto raw = [&](const Complex& e, const Complex& l) {
    const J h = hankel(spec, s, J::variable_e(e), J::variable_l(l), ctx);
    return std::pair<std::array<Complex, 2>, std::array<Complex, 4>>{
        {h.v, h.e}, {h.e, h.l, Complex(2) * h.ee, h.el}};
  };
  // Newton is invariant under a constant linear map of the equations; with
  // M = J(seed)^-1 the residuals read as distances in (E, lambda).
  const auto [f0, j0] = raw(ctx.lift(e_seed), ctx.lift(lambda_seed));
  const Complex det0 = j0[0] * j0[3] - j0[1] * j0[2];
  if (det0.is_zero()) throw SingularJacobian("solve_ep: singular Jacobian at the seed");
  const std::array<Complex, 4> m{j0[3] / det0, -j0[1] / det0, -j0[2] / det0, j0[0] / det0};
  auto system = [&](const Complex& e, const Complex& l) {
    const auto [f, j] = raw(e, l);
    return SystemValue{m[0] * f[0] + m[1] * f[1], m[2] * f[0] + m[3] * f[1],
                       std::array<Complex, 4>{m[0] * j[0] + m[1] * j[2], m[0] * j[1] + m[1] * j[3],
                                              m[2] * j[0] + m[3] * j[2], m[2] * j[1] + m[3] * j[3]}};
  };
  Root2Result r = newton_2d(system, e_seed, lambda_seed, ctx);
  if (abs(r.lambda) > 2 * abs(lambda_seed)) {
    throw BranchLoss("solve_ep: lambda drifted to " + r.lambda.re.str(15) + (r.lambda.im.sign() < 0 ? "" : "+") +
                     r.lambda.im.str(15) + "i, beyond twice the seed modulus");
  }
  ExceptionalPoint ep;
  ep.sector = s == 0 ? Parity::even : Parity::odd;
  ep.lambda = std::move(r.lambda);
  ep.energy = std::move(r.e);
  ep.residuals = {std::move(r.residual_f), std::move(r.residual_g)};
  ep.source_D = spec.D;
  return ep;
}

EPLadder solve_ep(const std::vector<int>& ladder, int d, int s, const Complex& e_seed, const Complex& lambda_seed,
                  const PrecisionCtx& ctx) {
  check_ladder(ladder);
  EPLadder out;
  Complex e = e_seed, l = lambda_seed;
  for (int D : ladder) {
    const PrecisionCtx rung_ctx = checked_hankel_ctx(D, ctx, [&](const PrecisionCtx& c) {
      return hankel(HankelSpec{D, d}, s, c.lift(e), c.lift(l), c);
    });
    ExceptionalPoint p = solve_ep(HankelSpec{D, d}, s, e, l, rung_ctx);
    if (!out.rungs.empty()) p.converged_digits = shared_digits(p.lambda, out.rungs.back().lambda);
    e = p.energy;
    l = p.lambda;
    out.rungs.push_back(std::move(p));
  }
  out.point = out.rungs.back();
  return out;
}

}  // namespace gosc
