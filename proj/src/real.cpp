#include "gosc/real.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

#include "gosc/errors.hpp"

namespace gosc {

namespace {

constexpr double kLog2Of10 = 3.32192809488736234787;
constexpr Bits kGuardBits = 8;

Bits max_prec(const Real& a, const Real& b) { return std::max(a.precision(), b.precision()); }

// mpfr_get_str wrapper that owns the returned buffer.
std::string mantissa_digits(mpfr_srcptr x, int digits, mpfr_exp_t& exp10) {
  std::unique_ptr<char, void (*)(char*)> buf(mpfr_get_str(nullptr, &exp10, 10, digits, x, MPFR_RNDN),
                                             mpfr_free_str);
  return std::string(buf.get());
}

}  // namespace

Bits digits_to_bits(int digits) {
  return static_cast<Bits>(std::ceil(std::max(digits, 1) * kLog2Of10)) + kGuardBits;
}

int bits_to_digits(Bits bits) {
  return static_cast<int>(std::floor(static_cast<double>(std::max<Bits>(bits - kGuardBits, 1)) / kLog2Of10));
}

Real::Real(std::string_view text, Bits precision) : Real(PrecTag{}, precision) {
  std::string s(text);
  // mpfr_set_str rejects leading '+' only in some versions; strip it.
  if (!s.empty() && s.front() == '+') s.erase(0, 1);
  if (s.empty() || mpfr_set_str(v_, s.c_str(), 10, MPFR_RNDN) != 0) {
    throw InvalidInput("not a decimal number: '" + std::string(text) + "'");
  }
}

Real Real::rounded(const Real& v, Bits precision) {
  Real r(PrecTag{}, precision);
  mpfr_set(r.v_, v.v_, MPFR_RNDN);
  return r;
}

Real Real::pi(Bits precision) {
  Real r(PrecTag{}, precision);
  mpfr_const_pi(r.v_, MPFR_RNDN);
  return r;
}

Real Real::factorial(unsigned long n, Bits precision) {
  Real r(PrecTag{}, precision);
  mpfr_fac_ui(r.v_, n, MPFR_RNDN);
  return r;
}

Real& Real::operator=(const Real& o) {
  if (this == &o) return *this;
  if (v_[0]._mpfr_d == nullptr) {
    mpfr_init2(v_, o.precision());
  } else if (precision() != o.precision()) {
    mpfr_set_prec(v_, o.precision());
  }
  mpfr_set(v_, o.v_, MPFR_RNDN);
  return *this;
}

void Real::promote(Bits p) {
  if (p > precision()) mpfr_prec_round(v_, p, MPFR_RNDN);
}

long Real::exponent10() const {
  if (is_zero() || !is_finite()) return 0;
  mpfr_exp_t e = 0;
  mantissa_digits(v_, 2, e);
  return static_cast<long>(e) - 1;
}

std::string Real::str(int digits) const {
  if (mpfr_nan_p(v_)) return "nan";
  if (mpfr_inf_p(v_)) return sign() < 0 ? "-inf" : "inf";
  if (digits <= 0) digits = bits_to_digits(precision());
  if (is_zero()) return "0";
  mpfr_exp_t e = 0;
  std::string m = mantissa_digits(v_, digits, e);
  std::string sign_str;
  if (m.front() == '-') {
    sign_str = "-";
    m.erase(0, 1);
  }
  // Drop trailing zeros of the mantissa; they carry no information.
  while (m.size() > 1 && m.back() == '0') m.pop_back();
  const long point = static_cast<long>(e);  // value = 0.m * 10^point
  std::string out = sign_str;
  if (point > 0 && point <= 21) {
    if (static_cast<long>(m.size()) <= point) {
      out += m + std::string(static_cast<size_t>(point) - m.size(), '0');
    } else {
      out += m.substr(0, static_cast<size_t>(point)) + "." + m.substr(static_cast<size_t>(point));
    }
  } else if (point <= 0 && point > -6) {
    out += "0." + std::string(static_cast<size_t>(-point), '0') + m;
  } else {
    out += m.substr(0, 1);
    if (m.size() > 1) out += "." + m.substr(1);
    out += "e" + std::to_string(point - 1);
  }
  return out;
}

Real Real::operator-() const {
  Real r(PrecTag{}, precision());
  mpfr_neg(r.v_, v_, MPFR_RNDN);
  return r;
}

Real& Real::operator+=(const Real& o) {
  promote(o.precision());
  mpfr_add(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}

Real& Real::operator-=(const Real& o) {
  promote(o.precision());
  mpfr_sub(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}

Real& Real::operator*=(const Real& o) {
  promote(o.precision());
  mpfr_mul(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}

Real& Real::operator/=(const Real& o) {
  promote(o.precision());
  mpfr_div(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}

Real operator+(const Real& a, const Real& b) {
  Real r = Real::zero(max_prec(a, b));
  mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}

Real operator-(const Real& a, const Real& b) {
  Real r = Real::zero(max_prec(a, b));
  mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}

Real operator*(const Real& a, const Real& b) {
  Real r = Real::zero(max_prec(a, b));
  mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}

Real operator/(const Real& a, const Real& b) {
  Real r = Real::zero(max_prec(a, b));
  mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}

Real operator+(Real&& a, const Real& b) { return std::move(a += b); }
Real operator-(Real&& a, const Real& b) { return std::move(a -= b); }
Real operator*(Real&& a, const Real& b) { return std::move(a *= b); }
Real operator/(Real&& a, const Real& b) { return std::move(a /= b); }

std::partial_ordering operator<=>(const Real& a, const Real& b) {
  if (mpfr_unordered_p(a.v_, b.v_)) return std::partial_ordering::unordered;
  const int c = mpfr_cmp(a.v_, b.v_);
  if (c < 0) return std::partial_ordering::less;
  if (c > 0) return std::partial_ordering::greater;
  return std::partial_ordering::equivalent;
}

Real abs(const Real& x) {
  Real r = Real::zero(x.precision());
  mpfr_abs(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}

Real sqrt(const Real& x) {
  Real r = Real::zero(x.precision());
  mpfr_sqrt(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}

Real exp(const Real& x) {
  Real r = Real::zero(x.precision());
  mpfr_exp(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}

Real log(const Real& x) {
  Real r = Real::zero(x.precision());
  mpfr_log(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}

Real log10(const Real& x) {
  Real r = Real::zero(x.precision());
  mpfr_log10(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}

Real pow(const Real& x, long n) {
  Real r = Real::zero(x.precision());
  mpfr_pow_si(r.raw(), x.raw(), n, MPFR_RNDN);
  return r;
}

Real hypot(const Real& a, const Real& b) {
  Real r = Real::zero(std::max(a.precision(), b.precision()));
  mpfr_hypot(r.raw(), a.raw(), b.raw(), MPFR_RNDN);
  return r;
}

Real atan2(const Real& y, const Real& x) {
  Real r = Real::zero(std::max(x.precision(), y.precision()));
  mpfr_atan2(r.raw(), y.raw(), x.raw(), MPFR_RNDN);
  return r;
}

Real floor(const Real& x) {
  Real r = Real::zero(x.precision());
  mpfr_floor(r.raw(), x.raw());
  return r;
}

Real ldexp(const Real& x, long e) {
  Real r = Real::zero(x.precision());
  mpfr_mul_2si(r.raw(), x.raw(), e, MPFR_RNDN);
  return r;
}

Real pow10(long e, Bits precision) {
  Real r = Real::zero(precision);
  mpfr_ui_pow_ui(r.raw(), 10, static_cast<unsigned long>(e < 0 ? -e : e), MPFR_RNDN);
  if (e < 0) mpfr_ui_div(r.raw(), 1, r.raw(), MPFR_RNDN);
  return r;
}

std::ostream& operator<<(std::ostream& os, const Real& x) {
  const auto p = os.precision();
  return os << x.str(p > 6 ? static_cast<int>(p) : 0);
}

Complex& Complex::operator*=(const Complex& o) {
  *this = *this * o;
  return *this;
}

Complex& Complex::operator/=(const Complex& o) {
  *this = *this / o;
  return *this;
}

Complex operator*(const Complex& a, const Complex& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

Complex operator/(const Complex& a, const Complex& b) {
  const Real den = b.re * b.re + b.im * b.im;
  return {(a.re * b.re + a.im * b.im) / den, (a.im * b.re - a.re * b.im) / den};
}

Complex conj(const Complex& z) { return {z.re, -z.im}; }
Real abs(const Complex& z) { return hypot(z.re, z.im); }
Real norm(const Complex& z) { return z.re * z.re + z.im * z.im; }

Complex sqrt(const Complex& z) {
  if (z.is_zero()) return {Real::zero(z.precision()), Real::zero(z.precision())};
  const Real r = abs(z);
  // Principal branch, computed without cancellation.
  Real t = sqrt((r + abs(z.re)) / 2);
  if (z.re.sign() >= 0) return {t, z.im / (2 * t)};
  Real im = z.im.sign() < 0 ? -t : t;
  return {abs(z.im) / (2 * t), im};
}

Complex exp(const Complex& z) {
  const Real m = exp(z.re);
  Real c = Real::zero(z.precision()), s = Real::zero(z.precision());
  mpfr_sin_cos(s.raw(), c.raw(), z.im.raw(), MPFR_RNDN);
  return {m * c, m * s};
}

Complex pow(const Complex& z, long n) {
  Complex result(Real::rounded(Real(1), z.precision()), Real::zero(z.precision()));
  Complex base = z;
  unsigned long e = static_cast<unsigned long>(n < 0 ? -n : n);
  while (e != 0) {
    if (e & 1UL) result *= base;
    base *= base;
    e >>= 1;
  }
  if (n < 0) result = Complex(1) / result;
  return result;
}

std::ostream& operator<<(std::ostream& os, const Complex& z) {
  os << z.re << (z.im.sign() < 0 ? " - " : " + ") << abs(z.im) << "i";
  return os;
}

}  // namespace gosc
