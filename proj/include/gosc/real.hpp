#pragma once

// Arbitrary-precision real and complex scalars on top of MPFR.
//
// Every value carries its own precision. Binary operations produce a result
// at the larger of the operand precisions, so a computation seeded with
// inputs at a given precision stays at that precision without any global
// default. Integers and doubles convert implicitly at 64 bits, which
// represents them exactly.

#include <mpfr.h>

#include <algorithm>
#include <compare>
#include <concepts>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>

namespace gosc {

using Bits = mpfr_prec_t;

/// Number of mantissa bits needed for `digits` significant decimal digits,
/// plus a few guard bits.
Bits digits_to_bits(int digits);
int bits_to_digits(Bits bits);

class Real {
 public:
  static constexpr Bits kExactBits = 64;

  Real() : Real(PrecTag{}, kExactBits) {}
  Real(int v) : Real(PrecTag{}, kExactBits) { mpfr_set_si(v_, v, MPFR_RNDN); }
  Real(long v) : Real(PrecTag{}, kExactBits) { mpfr_set_si(v_, v, MPFR_RNDN); }
  Real(long long v) : Real(PrecTag{}, kExactBits) { mpfr_set_si(v_, static_cast<long>(v), MPFR_RNDN); }
  Real(unsigned v) : Real(PrecTag{}, kExactBits) { mpfr_set_ui(v_, v, MPFR_RNDN); }
  Real(unsigned long v) : Real(PrecTag{}, kExactBits) { mpfr_set_ui(v_, v, MPFR_RNDN); }
  Real(unsigned long long v) : Real(PrecTag{}, kExactBits) { mpfr_set_ui(v_, static_cast<unsigned long>(v), MPFR_RNDN); }
  Real(double v) : Real(PrecTag{}, kExactBits) { mpfr_set_d(v_, v, MPFR_RNDN); }

  /// Parses a decimal string ("1.25", "-3e-40", "inf") at the given precision.
  /// Throws InvalidInput on malformed text.
  Real(std::string_view text, Bits precision);

  /// Zero at the given precision.
  static Real zero(Bits precision) { return Real(PrecTag{}, precision); }
  /// Rounds `v` to the given precision.
  static Real rounded(const Real& v, Bits precision);

  static Real pi(Bits precision);
  static Real factorial(unsigned long n, Bits precision);

  Real(const Real& o) : Real(PrecTag{}, o.precision()) { mpfr_set(v_, o.v_, MPFR_RNDN); }
  Real(Real&& o) noexcept {
    v_[0] = o.v_[0];
    o.v_[0]._mpfr_d = nullptr;
  }
  Real& operator=(const Real& o);
  Real& operator=(Real&& o) noexcept {
    std::swap(v_[0], o.v_[0]);
    return *this;
  }
  ~Real() {
    if (v_[0]._mpfr_d != nullptr) mpfr_clear(v_);
  }

  Bits precision() const { return mpfr_get_prec(v_); }
  /// Raises (never lowers) the precision in place, keeping the value.
  void promote(Bits precision);

  mpfr_srcptr raw() const { return v_; }
  mpfr_ptr raw() { return v_; }

  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  long exponent10() const;

  /// Decimal rendering with `digits` significant digits; digits <= 0 uses the
  /// value's own precision. Plain notation for moderate exponents,
  /// scientific otherwise.
  std::string str(int digits = 0) const;

  Real operator-() const;
  Real& operator+=(const Real& o);
  Real& operator-=(const Real& o);
  Real& operator*=(const Real& o);
  Real& operator/=(const Real& o);

  friend Real operator+(const Real& a, const Real& b);
  friend Real operator-(const Real& a, const Real& b);
  friend Real operator*(const Real& a, const Real& b);
  friend Real operator/(const Real& a, const Real& b);
  friend Real operator+(Real&& a, const Real& b);
  friend Real operator-(Real&& a, const Real& b);
  friend Real operator*(Real&& a, const Real& b);
  friend Real operator/(Real&& a, const Real& b);

  friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
  friend std::partial_ordering operator<=>(const Real& a, const Real& b);

 private:
  struct PrecTag {};
  Real(PrecTag, Bits precision) { mpfr_init2(v_, precision); mpfr_set_zero(v_, 1); }

  mpfr_t v_;
};

Real abs(const Real& x);
Real sqrt(const Real& x);
Real exp(const Real& x);
Real log(const Real& x);
Real log10(const Real& x);
Real pow(const Real& x, long n);
Real hypot(const Real& a, const Real& b);
Real atan2(const Real& y, const Real& x);
Real floor(const Real& x);
Real ldexp(const Real& x, long e);
inline const Real& max(const Real& a, const Real& b) { return a < b ? b : a; }
inline const Real& min(const Real& a, const Real& b) { return b < a ? b : a; }

/// 10^e at the given precision.
Real pow10(long e, Bits precision);

std::ostream& operator<<(std::ostream& os, const Real& x);

/// Complex number with Real parts. Both parts carry (at least) the same
/// precision when produced by arithmetic.
struct Complex {
  Real re;
  Real im;

  Complex() = default;
  Complex(Real r) : re(std::move(r)), im(0) {}
  Complex(int r) : re(r), im(0) {}
  Complex(long r) : re(r), im(0) {}
  Complex(double r) : re(r), im(0) {}
  Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}

  Bits precision() const { return std::max(re.precision(), im.precision()); }
  bool is_zero() const { return re.is_zero() && im.is_zero(); }

  Complex operator-() const { return {-re, -im}; }
  Complex& operator+=(const Complex& o) { re += o.re; im += o.im; return *this; }
  Complex& operator-=(const Complex& o) { re -= o.re; im -= o.im; return *this; }
  Complex& operator*=(const Complex& o);
  Complex& operator/=(const Complex& o);

  friend Complex operator+(Complex a, const Complex& b) { return a += b; }
  friend Complex operator-(Complex a, const Complex& b) { return a -= b; }
  friend Complex operator*(const Complex& a, const Complex& b);
  friend Complex operator/(const Complex& a, const Complex& b);
  friend bool operator==(const Complex& a, const Complex& b) { return a.re == b.re && a.im == b.im; }
};

Complex conj(const Complex& z);
Real abs(const Complex& z);
Real norm(const Complex& z);  // |z|^2
Complex sqrt(const Complex& z);
Complex exp(const Complex& z);
Complex pow(const Complex& z, long n);
std::ostream& operator<<(std::ostream& os, const Complex& z);

/// Magnitude used for pivoting and convergence tests; overloaded by the
/// derivative-carrying scalars in autodiff.hpp.
inline Real magnitude(const Real& x) { return abs(x); }
inline Real magnitude(const Complex& z) { return abs(z); }

inline Real real_part(const Real& x) { return x; }
inline Real real_part(const Complex& z) { return z.re; }

/// Scalar types the solver templates accept.
template <class T>
concept Scalar = std::same_as<T, Real> || std::same_as<T, Complex>;

}  // namespace gosc
