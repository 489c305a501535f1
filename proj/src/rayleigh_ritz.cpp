#include "gosc/rayleigh_ritz.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>

namespace gosc {

std::string to_string(Method m) {
  switch (m) {
    case Method::RR: return "RR";
    case Method::RPM: return "RPM";
    case Method::PT: return "PT";
  }
  return "?";
}

Method parse_method(const std::string& text) {
  std::string t;
  for (char c : text) t.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  if (t == "RR") return Method::RR;
  if (t == "RPM") return Method::RPM;
  if (t == "PT") return Method::PT;
  throw InvalidInput("unknown method '" + text + "' (expected RR, RPM or PT)");
}

namespace {

// <p(i)| exp(-x^2) |p(j)> for the whole sector, via
// G = (-1)^(i-j) c_k r_m r_n / sqrt(2), c_k = (2k)!/(4^k k!), r_m = 1/sqrt(m!).
Matrix<Real> gaussian_table(const ParityBasis& basis, const PrecisionCtx& ctx) {
  basis.validate();
  const int D = basis.size;
  const int s = parity_symbol(basis.parity);
  std::vector<Real> c;
  c.reserve(static_cast<std::size_t>(2 * D + s));
  c.push_back(ctx.real(1));
  for (int k = 0; k + 1 < 2 * D + s; ++k) c.push_back(c.back() * (2 * k + 1) / 2);
  std::vector<Real> r;
  r.reserve(static_cast<std::size_t>(D));
  Real fact = ctx.real(1);
  for (int m = 1; m <= s; ++m) fact = fact * m;
  for (int i = 0; i < D; ++i) {
    if (i > 0) {
      const int m = basis.level(i);
      fact = fact * (m - 1) * m;
    }
    r.push_back(1 / sqrt(fact));
  }
  const Real inv_sqrt2 = 1 / sqrt(ctx.real(2));
  Matrix<Real> g(static_cast<std::size_t>(D), static_cast<std::size_t>(D));
  for (int i = 0; i < D; ++i) {
    for (int j = i; j < D; ++j) {
      const int k = (basis.level(i) + basis.level(j)) / 2;
      Real v = c[static_cast<std::size_t>(k)] * r[static_cast<std::size_t>(i)] * r[static_cast<std::size_t>(j)] * inv_sqrt2;
      if ((j - i) % 2 != 0) v = -v;
      g(static_cast<std::size_t>(j), static_cast<std::size_t>(i)) = v;
      g(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = std::move(v);
    }
  }
  return g;
}

Real level_energy(const ParityBasis& basis, int i, const PrecisionCtx& ctx) {
  return ctx.real(2 * basis.level(i) + 1) / 2;
}

// Householder reduction to tridiagonal form. On exit d holds the diagonal,
// e the subdiagonal in e[1..n-1], and z the accumulated transform when
// `vectors` is set.
void tridiagonalize(Matrix<Real>& z, std::vector<Real>& d, std::vector<Real>& e, bool vectors) {
  const int n = static_cast<int>(z.rows());
  const Bits bits = z(0, 0).precision();
  d.assign(static_cast<std::size_t>(n), Real::zero(bits));
  e.assign(static_cast<std::size_t>(n), Real::zero(bits));
  for (int i = n - 1; i > 0; --i) {
    const int l = i - 1;
    Real h = Real::zero(bits), scale = Real::zero(bits);
    if (l > 0) {
      for (int k = 0; k < i; ++k) scale += abs(z(i, k));
      if (scale.is_zero()) {
        e[i] = z(i, l);
      } else {
        for (int k = 0; k < i; ++k) {
          z(i, k) /= scale;
          h += z(i, k) * z(i, k);
        }
        Real f = z(i, l);
        Real g = f.sign() >= 0 ? -sqrt(h) : sqrt(h);
        e[i] = scale * g;
        h -= f * g;
        z(i, l) = f - g;
        f = Real::zero(bits);
        for (int j = 0; j < i; ++j) {
          if (vectors) z(j, i) = z(i, j) / h;
          g = Real::zero(bits);
          for (int k = 0; k < j + 1; ++k) g += z(j, k) * z(i, k);
          for (int k = j + 1; k < i; ++k) g += z(k, j) * z(i, k);
          e[j] = g / h;
          f += e[j] * z(i, j);
        }
        const Real hh = f / (h + h);
        for (int j = 0; j < i; ++j) {
          f = z(i, j);
          g = e[j] - hh * f;
          e[j] = g;
          for (int k = 0; k < j + 1; ++k) z(j, k) -= f * e[k] + g * z(i, k);
        }
      }
    } else {
      e[i] = z(i, l);
    }
    d[i] = std::move(h);
  }
  if (vectors) d[0] = Real::zero(bits);
  e[0] = Real::zero(bits);
  for (int i = 0; i < n; ++i) {
    if (vectors) {
      if (!d[i].is_zero()) {
        for (int j = 0; j < i; ++j) {
          Real g = Real::zero(bits);
          for (int k = 0; k < i; ++k) g += z(i, k) * z(k, j);
          for (int k = 0; k < i; ++k) z(k, j) -= g * z(k, i);
        }
      }
      d[i] = z(i, i);
      z(i, i) = Real::rounded(Real(1), bits);
      for (int j = 0; j < i; ++j) {
        z(j, i) = Real::zero(bits);
        z(i, j) = Real::zero(bits);
      }
    } else {
      d[i] = z(i, i);
    }
  }
}

// Implicit-shift QL on the tridiagonal (d, e); rotations are applied to z
// when `vectors` is set.
void tridiagonal_ql(std::vector<Real>& d, std::vector<Real>& e, Matrix<Real>& z, bool vectors) {
  const int n = static_cast<int>(d.size());
  const Bits bits = d[0].precision();
  const Real eps = ldexp(Real::rounded(Real(1), bits), -static_cast<long>(bits));
  const Real one = Real::rounded(Real(1), bits);
  for (int i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = Real::zero(bits);
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m = l;
    do {
      for (m = l; m < n - 1; ++m) {
        const Real dd = abs(d[m]) + abs(d[m + 1]);
        if (abs(e[m]) <= eps * dd) break;
      }
      if (m != l) {
        if (iter++ == 60) {
          throw ConvergenceFailure("eigenvalues: QL iteration did not converge", {});
        }
        Real g = (d[l + 1] - d[l]) / (2 * e[l]);
        Real r = hypot(g, one);
        g = d[m] - d[l] + e[l] / (g + (g.sign() >= 0 ? abs(r) : -abs(r)));
        Real s = one, c = one, p = Real::zero(bits);
        int i = m - 1;
        for (; i >= l; --i) {
          Real f = s * e[i];
          const Real b = c * e[i];
          r = hypot(f, g);
          e[i + 1] = r;
          if (r.is_zero()) {
            d[i + 1] -= p;
            e[m] = Real::zero(bits);
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          if (vectors) {
            for (int k = 0; k < n; ++k) {
              f = z(k, i + 1);
              z(k, i + 1) = s * z(k, i) + c * f;
              z(k, i) = c * z(k, i) - s * f;
            }
          }
        }
        if (r.is_zero() && i >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = Real::zero(bits);
      }
    } while (m != l);
  }
}

Eigensystem solve_symmetric(const RRMatrix& m, const PrecisionCtx& ctx, bool vectors) {
  const std::size_t n = m.entries.rows();
  if (!m.entries.square() || n == 0) throw InvalidInput("eigenvalues: matrix must be square and non-empty");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (!(m.entries(i, j) == m.entries(j, i))) throw InvalidInput("eigenvalues: matrix is not symmetric");

  Matrix<Real> z = m.entries;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) z(i, j).promote(ctx.bits());
  std::vector<Real> d, e;
  tridiagonalize(z, d, e, vectors);
  tridiagonal_ql(d, e, z, vectors);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });
  Eigensystem out;
  out.values.reserve(n);
  for (std::size_t k : order) out.values.push_back(d[k]);
  if (vectors) {
    out.vectors = Matrix<Real>(n, n);
    for (std::size_t c = 0; c < n; ++c)
      for (std::size_t r = 0; r < n; ++r) out.vectors(r, c) = z(r, order[c]);
  }
  return out;
}

}  // namespace

RRMatrix assemble(const ParityBasis& basis, const Real& lambda, const PrecisionCtx& ctx) {
  const Matrix<Real> g = gaussian_table(basis, ctx);
  const Real l = ctx.lift(lambda);
  RRMatrix out{basis, l, Matrix<Real>(g.rows(), g.cols())};
  for (std::size_t i = 0; i < g.rows(); ++i) {
    for (std::size_t j = i; j < g.cols(); ++j) {
      Real v = -(l * g(i, j));
      if (i == j) v += level_energy(basis, static_cast<int>(i), ctx);
      out.entries(j, i) = v;
      out.entries(i, j) = std::move(v);
    }
  }
  return out;
}

ComplexRRMatrix assemble(const ParityBasis& basis, const Complex& lambda, const PrecisionCtx& ctx) {
  const Matrix<Real> g = gaussian_table(basis, ctx);
  const Complex l = ctx.lift(lambda);
  ComplexRRMatrix out{basis, l, Matrix<Complex>(g.rows(), g.cols())};
  for (std::size_t i = 0; i < g.rows(); ++i) {
    for (std::size_t j = i; j < g.cols(); ++j) {
      Complex v = -(l * Complex(g(i, j)));
      if (i == j) v += Complex(level_energy(basis, static_cast<int>(i), ctx));
      out.entries(j, i) = v;
      out.entries(i, j) = std::move(v);
    }
  }
  return out;
}

Eigensystem eigensystem(const RRMatrix& m, const PrecisionCtx& ctx) { return solve_symmetric(m, ctx, true); }

std::vector<Real> eigenvalues(const RRMatrix& m, const PrecisionCtx& ctx) {
  return solve_symmetric(m, ctx, false).values;
}

std::vector<Complex> eigenvalues(const ComplexRRMatrix& m, const PrecisionCtx& ctx) {
  if (m.entries.rows() == 1) return {m.entries(0, 0)};
  std::vector<Complex> roots = polynomial_roots(secular_polynomial(m, ctx), ctx);
  std::sort(roots.begin(), roots.end(), [](const Complex& a, const Complex& b) {
    return a.re < b.re || (a.re == b.re && a.im < b.im);
  });
  return roots;
}

const std::vector<int>& default_rr_schedule() {
  static const std::vector<int> schedule{10, 20, 40, 80, 160};
  return schedule;
}

SpectralPoint converge_state(int n, const Real& lambda, int target_digits, const PrecisionCtx& ctx,
                             const std::vector<int>& schedule) {
  if (n < 0) throw InvalidInput("converge_state: state index must be non-negative");
  if (target_digits <= 0) throw InvalidInput("converge_state: target digits must be positive");
  const Parity parity = parity_of_state(n);
  const int index = n / 2;
  std::vector<int> ladder{index + 1};
  for (int D : schedule)
    if (D > ladder.back()) ladder.push_back(D);

  const Real threshold = ctx.pow10(-target_digits);
  const Real slack = ctx.pow10(-ctx.digits / 2);
  std::vector<std::string> trace;
  std::optional<Real> previous;
  for (int D : ladder) {
    const Real e = eigenvalues(assemble(ParityBasis{parity, D}, lambda, ctx), ctx)[static_cast<std::size_t>(index)];
    trace.push_back("D=" + std::to_string(D) + ": " + e.str(ctx.digits));
    if (previous) {
      if (e > *previous + slack * max(Real(1), abs(e))) {
        throw Error("converge_state: variational bound violated at D=" + std::to_string(D) + " for n=" +
                    std::to_string(n));
      }
      if (abs(e - *previous) < threshold) return {n, ctx.lift(lambda), e, D, Method::RR};
    }
    previous = e;
  }
  throw ConvergenceFailure("converge_state: E_" + std::to_string(n) + " not converged to " +
                               std::to_string(target_digits) + " digits within the D schedule",
                           std::move(trace));
}

EigenOracle rr_oracle(int D, const PrecisionCtx& ctx) {
  return [D, ctx](int n, const Real& lambda) {
    const ParityBasis basis{parity_of_state(n), D};
    const int index = n / 2;
    if (index >= D) throw InvalidInput("rr_oracle: state index beyond basis size");
    const Eigensystem sys = eigensystem(assemble(basis, lambda, ctx), ctx);
    EigenState st{sys.values[static_cast<std::size_t>(index)], {}, basis};
    st.vector.reserve(static_cast<std::size_t>(D));
    for (int r = 0; r < D; ++r) st.vector.push_back(sys.vectors(static_cast<std::size_t>(r), static_cast<std::size_t>(index)));
    return st;
  };
}

namespace {

// Eigenvalue `index` of the sector as a function of lambda (decreasing).
Real sector_level(const ParityBasis& basis, int index, const Real& lambda, const PrecisionCtx& ctx) {
  return eigenvalues(assemble(basis, lambda, ctx), ctx)[static_cast<std::size_t>(index)];
}

}  // namespace

std::vector<CriticalPoint> critical_lambda_rr(int n, const std::vector<int>& schedule, const PrecisionCtx& ctx) {
  if (n < 0) throw InvalidInput("critical_lambda_rr: state index must be non-negative");
  if (schedule.empty()) throw InvalidInput("critical_lambda_rr: empty D schedule");
  const Parity parity = parity_of_state(n);
  const int index = n / 2;
  const Real slack = ctx.pow10(-ctx.digits / 2);

  std::vector<CriticalPoint> out;
  std::optional<Real> seed;
  for (int D : schedule) {
    if (D <= index) throw InvalidInput("critical_lambda_rr: D must exceed the sector index of the state");
    const ParityBasis basis{parity, D};
    if (!seed) {
      // Bracket the zero crossing of the decreasing level, then bisect.
      Real lo = ctx.real(0), hi = ctx.real(1);
      while (sector_level(basis, index, hi, ctx).sign() > 0) {
        lo = hi;
        hi = hi * 2;
        if (hi > Real(1e6)) throw BranchLoss("critical_lambda_rr: level never crosses zero");
      }
      for (int it = 0; it < 30; ++it) {
        Real mid = (lo + hi) / 2;
        (sector_level(basis, index, mid, ctx).sign() > 0 ? lo : hi) = mid;
      }
      seed = (lo + hi) / 2;
    }

    const Matrix<Real> g = gaussian_table(basis, ctx);
    auto det_at = [&](const Real& lambda) {
      Matrix<Dual<Real>> m(g.rows(), g.cols());
      const Dual<Real> l = Dual<Real>::variable(lambda);
      for (std::size_t i = 0; i < g.rows(); ++i) {
        for (std::size_t j = 0; j < g.cols(); ++j) {
          m(i, j) = Dual<Real>(-g(i, j)) * l;
          if (i == j) m(i, j) += Dual<Real>(level_energy(basis, static_cast<int>(i), ctx));
        }
      }
      return det(std::move(m), ctx);
    };
    // Scale by |det'| at the seed so the residual reads in units of lambda.
    const Real scale = abs(det_at(ctx.lift(*seed)).d);
    if (scale.is_zero()) throw SingularDerivative("critical_lambda_rr: flat determinant at the seed");
    auto f = [&](const Real& lambda) {
      Dual<Real> v = det_at(lambda);
      return std::pair<Real, Real>(v.v / scale, v.d / scale);
    };
    const Real root = newton_1d<Real>(f, *seed, ctx).root;

    if (root.sign() <= 0) throw BranchLoss("critical_lambda_rr: root left lambda > 0 at D=" + std::to_string(D));
    const std::vector<Real> levels = eigenvalues(assemble(basis, root, ctx), ctx);
    std::size_t closest = 0;
    for (std::size_t k = 1; k < levels.size(); ++k)
      if (abs(levels[k]) < abs(levels[closest])) closest = k;
    if (closest != static_cast<std::size_t>(index)) {
      throw BranchLoss("critical_lambda_rr: root at D=" + std::to_string(D) + " belongs to another state");
    }
    if (!out.empty() && root > out.back().lambda + slack) {
      throw Error("critical_lambda_rr: sequence increased at D=" + std::to_string(D));
    }
    out.push_back({D, root});
    seed = root;
  }
  return out;
}

Polynomial<Real> secular_polynomial(const RRMatrix& m, const PrecisionCtx& ctx) {
  return characteristic_polynomial(m.entries, ctx);
}

Polynomial<Complex> secular_polynomial(const ComplexRRMatrix& m, const PrecisionCtx& ctx) {
  return characteristic_polynomial(m.entries, ctx);
}

BivariatePolynomial secular_polynomial_symbolic(const ParityBasis& basis, const PrecisionCtx& ctx) {
  basis.validate();
  const int D = basis.size;
  if (D > kSymbolicSecularCap) {
    throw CapacityError("secular_polynomial_symbolic: D=" + std::to_string(D) + " exceeds the cap of " +
                        std::to_string(kSymbolicSecularCap));
  }
  // The E^j coefficient has degree D - j in lambda; sample on D + 1 roots of unity.
  const int samples = D + 1;
  const Real two_pi = 2 * Real::pi(ctx.bits());
  std::vector<Complex> nodes;
  std::vector<Polynomial<Complex>> values;
  for (int k = 0; k < samples; ++k) {
    nodes.push_back(exp(Complex(Real::zero(ctx.bits()), two_pi * k / samples)));
    values.push_back(secular_polynomial(assemble(basis, nodes.back(), ctx), ctx));
  }
  std::vector<Polynomial<Complex>> coeffs;
  for (int j = 0; j <= D; ++j) {
    std::vector<Complex> in_lambda;
    for (int p = 0; p <= D - j; ++p) {
      Complex acc(Real::zero(ctx.bits()), Real::zero(ctx.bits()));
      for (int k = 0; k < samples; ++k) {
        const long idx = (static_cast<long>(p) * k) % samples;
        acc += values[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] * conj(nodes[static_cast<std::size_t>(idx)]);
      }
      // Real matrices give real coefficients; drop the rounding residue.
      in_lambda.emplace_back(acc.re / samples, Real::zero(ctx.bits()));
    }
    coeffs.emplace_back(std::move(in_lambda));
  }
  return BivariatePolynomial(std::move(coeffs));
}

bool SearchBox::contains(const Complex& z) const {
  return z.re >= re_min && z.re <= re_max && z.im >= im_min && z.im <= im_max;
}

void SearchBox::validate() const {
  if (re_min > re_max || im_min > im_max) throw InvalidInput("search box has min > max");
}

Complex secular_discriminant(const ParityBasis& basis, const Complex& lambda, const PrecisionCtx& ctx) {
  if (basis.size < 2) throw InvalidInput("secular_discriminant: needs D >= 2");
  return discriminant(secular_polynomial(assemble(basis, lambda, ctx), ctx), ctx);
}

namespace {

Complex double_root_energy(const ParityBasis& basis, const Complex& lambda, const PrecisionCtx& ctx) {
  const std::vector<Complex> ev = eigenvalues(assemble(basis, lambda, ctx), ctx);
  std::size_t a = 0, b = 1;
  Real best = abs(ev[0] - ev[1]);
  for (std::size_t i = 0; i < ev.size(); ++i)
    for (std::size_t j = i + 1; j < ev.size(); ++j) {
      Real gap = abs(ev[i] - ev[j]);
      if (gap < best) {
        best = std::move(gap);
        a = i;
        b = j;
      }
    }
  return (ev[a] + ev[b]) / Complex(2);
}

std::vector<Complex> grid_roots(const ParityBasis& basis, const SearchBox& box, const PrecisionCtx& ctx, int grid) {
  const int g = std::max(grid, 3);
  const Real dre = (box.re_max - box.re_min) / (g - 1);
  const Real dim = (box.im_max - box.im_min) / (g - 1);
  auto node = [&](int a, int b) {
    return Complex(ctx.lift(box.re_min) + dre * a, ctx.lift(box.im_min) + dim * b);
  };
  std::vector<double> logabs(static_cast<std::size_t>(g * g));
  for (int a = 0; a < g; ++a)
    for (int b = 0; b < g; ++b) {
      const Real v = abs(secular_discriminant(basis, node(a, b), ctx));
      logabs[static_cast<std::size_t>(a * g + b)] = v.is_zero() ? -1e300 : log10(v).to_double();
    }

  std::vector<Complex> roots;
  for (int a = 0; a < g; ++a)
    for (int b = 0; b < g; ++b) {
      const double here = logabs[static_cast<std::size_t>(a * g + b)];
      bool minimum = true;
      for (int da = -1; da <= 1 && minimum; ++da)
        for (int db = -1; db <= 1; ++db) {
          if ((da == 0 && db == 0) || a + da < 0 || a + da >= g || b + db < 0 || b + db >= g) continue;
          if (logabs[static_cast<std::size_t>((a + da) * g + b + db)] <= here) {
            minimum = false;
            break;
          }
        }
      if (!minimum) continue;
      const Complex start = node(a, b);
      const Complex norm = secular_discriminant(basis, start, ctx);
      if (norm.is_zero()) {
        roots.push_back(start);
        continue;
      }
      auto f = [&](const Complex& l) { return secular_discriminant(basis, l, ctx) / norm; };
      try {
        roots.push_back(newton_1d<Complex>(f, start, ctx).root);
      } catch (const Error&) {
        // A shallow minimum that is not near a root; nothing to seed.
      }
    }
  return roots;
}

}  // namespace

std::vector<EPSeed> ep_seeds(Parity sector, int D, const SearchBox& box, const PrecisionCtx& ctx,
                             const SeedOptions& options) {
  box.validate();
  if (D < 2) throw InvalidInput("ep_seeds: D must be at least 2");
  if (box.re_min == box.re_max || box.im_min == box.im_max) return {};
  const ParityBasis basis{sector, D};

  std::vector<Complex> roots;
  if (options.mode == SeedMode::symbolic) {
    const BivariatePolynomial f = secular_polynomial_symbolic(basis, ctx);
    const Polynomial<Complex> disc = discriminant_in_E(f, ctx);
    if (disc.degree() >= 1) roots = polynomial_roots(disc, ctx);
  } else {
    roots = grid_roots(basis, box, ctx, options.grid);
  }

  const Real merge = 10 * ctx.tol;
  std::vector<EPSeed> seeds;
  for (const Complex& r : roots) {
    if (!box.contains(r)) continue;
    const bool duplicate = std::any_of(seeds.begin(), seeds.end(), [&](const EPSeed& s) {
      return abs(s.lambda - r) <= merge * max(Real(1), abs(r));
    });
    if (duplicate) continue;
    EPSeed seed{r, double_root_energy(basis, r, ctx), std::nullopt};
    if (options.label) seed.branch_label = ep_branch_label(sector, D, seed.lambda, seed.energy, ctx);
    seeds.push_back(std::move(seed));
  }
  std::sort(seeds.begin(), seeds.end(), [](const EPSeed& a, const EPSeed& b) { return abs(a.lambda) < abs(b.lambda); });
  return seeds;
}

std::pair<int, int> ep_branch_label(Parity sector, int D, const Complex& lambda_ep, const Complex& energy_ep,
                                    const PrecisionCtx& ctx) {
  const ParityBasis basis{sector, D};
  const int steps = 200;
  const Real stop = ctx.real("0.995");

  // At lambda = 0 the levels are exact and ordered.
  std::vector<Complex> track;
  for (int i = 0; i < D; ++i) track.emplace_back(level_energy(basis, i, ctx));

  for (int k = 1; k <= steps; ++k) {
    const Complex lambda = Complex(stop * k / steps) * ctx.lift(lambda_ep);
    std::vector<Complex> next = polynomial_roots(secular_polynomial(assemble(basis, lambda, ctx), ctx), ctx, track);
    // Keep identities by nearest-neighbour matching.
    std::vector<bool> used(next.size(), false);
    std::vector<Complex> matched(track.size());
    for (std::size_t i = 0; i < track.size(); ++i) {
      std::size_t best = next.size();
      for (std::size_t j = 0; j < next.size(); ++j) {
        if (used[j]) continue;
        if (best == next.size() || abs(next[j] - track[i]) < abs(next[best] - track[i])) best = j;
      }
      used[best] = true;
      matched[i] = next[best];
    }
    track = std::move(matched);
  }

  std::vector<std::size_t> order(track.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return abs(track[a] - energy_ep) < abs(track[b] - energy_ep); });
  const int a = basis.level(static_cast<int>(std::min(order[0], order[1])));
  const int b = basis.level(static_cast<int>(std::max(order[0], order[1])));
  return {a, b};
}

}  // namespace gosc
