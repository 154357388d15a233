#include "qradial/hp.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <memory>

#include "qradial/errors.hpp"

namespace qradial {

namespace {

constexpr mpfr_rnd_t kRound = MPFR_RNDN;

std::string trim(std::string_view text) {
  auto begin = text.begin();
  auto end = text.end();
  while (begin != end && std::isspace(static_cast<unsigned char>(*begin))) ++begin;
  while (begin != end && std::isspace(static_cast<unsigned char>(*(end - 1)))) --end;
  return {begin, end};
}

bool is_integer_literal(const std::string& s) {
  std::size_t i = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
  if (i == s.size()) return false;
  return std::all_of(s.begin() + static_cast<long>(i), s.end(),
                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; });
}

BigInt parse_integer(const std::string& s) {
  if (!is_integer_literal(s)) throw InvalidArgument("malformed integer: '" + s + "'");
  return BigInt(s[0] == '+' ? s.substr(1) : s, 10);
}

// Exact value of a finite decimal literal such as "-12.5e-3".
Rational parse_decimal(const std::string& s) {
  std::size_t epos = s.find_first_of("eE");
  std::string mantissa = s.substr(0, epos);
  long exponent = 0;
  if (epos != std::string::npos) {
    std::string e = s.substr(epos + 1);
    if (!is_integer_literal(e)) throw InvalidArgument("malformed exponent in '" + s + "'");
    exponent = std::strtol(e.c_str(), nullptr, 10);
  }
  std::size_t dot = mantissa.find('.');
  if (dot != std::string::npos) {
    std::string frac = mantissa.substr(dot + 1);
    mantissa = mantissa.substr(0, dot) + frac;
    exponent -= static_cast<long>(frac.size());
    if (mantissa.empty() || mantissa == "-" || mantissa == "+") {
      throw InvalidArgument("malformed decimal: '" + s + "'");
    }
  }
  BigInt digits = parse_integer(mantissa);
  BigInt scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exponent)));
  Rational out = exponent >= 0 ? Rational(digits * scale) : Rational(digits, scale);
  out.canonicalize();
  return out;
}

}  // namespace

int Precision::decimal_digits() const {
  return static_cast<int>(std::floor(static_cast<double>(bits) * 0.30102999566398120));
}

Rational parse_rational(std::string_view text) {
  std::string s = trim(text);
  if (s.empty()) throw InvalidArgument("empty rational literal");
  std::size_t slash = s.find('/');
  if (slash == std::string::npos) return parse_decimal(s);
  BigInt num = parse_integer(trim(s.substr(0, slash)));
  BigInt den = parse_integer(trim(s.substr(slash + 1)));
  if (den == 0) throw InvalidArgument("zero denominator in '" + s + "'");
  Rational out(num, den);
  out.canonicalize();
  return out;
}

std::string to_string(const Rational& r) { return r.get_str(10); }

// ---------------------------------------------------------------------------
// HPReal

HPReal::HPReal(Precision p) {
  mpfr_init2(value_, p.bits);
  mpfr_set_zero(value_, 1);
}

HPReal::HPReal(long value, Precision p) {
  mpfr_init2(value_, p.bits);
  mpfr_set_si(value_, value, kRound);
}

HPReal::HPReal(unsigned long value, Precision p) {
  mpfr_init2(value_, p.bits);
  mpfr_set_ui(value_, value, kRound);
}

HPReal::HPReal(double value, Precision p) {
  mpfr_init2(value_, p.bits);
  mpfr_set_d(value_, value, kRound);
}

HPReal::HPReal(const Rational& value, Precision p) {
  mpfr_init2(value_, p.bits);
  mpfr_set_q(value_, value.get_mpq_t(), kRound);
}

HPReal::HPReal(const BigInt& value, Precision p) {
  mpfr_init2(value_, p.bits);
  mpfr_set_z(value_, value.get_mpz_t(), kRound);
}

HPReal HPReal::parse(std::string_view text, Precision p) {
  std::string s = trim(text);
  if (s.find('/') != std::string::npos) return HPReal(parse_rational(s), p);
  HPReal out(p);
  char* end = nullptr;
  if (!s.empty()) mpfr_strtofr(out.value_, s.c_str(), &end, 10, kRound);
  if (s.empty() || end == s.c_str() || *end != '\0' || !out.is_finite()) {
    throw InvalidArgument("malformed decimal number: '" + s + "'");
  }
  return out;
}

HPReal::HPReal(const HPReal& other) {
  mpfr_init2(value_, mpfr_get_prec(other.value_));
  mpfr_set(value_, other.value_, kRound);
}

HPReal::HPReal(HPReal&& other) noexcept {
  // Steal the limb storage; the moved-from object may only be destroyed or assigned.
  *value_ = *other.value_;
  other.value_->_mpfr_d = nullptr;
}

HPReal& HPReal::operator=(const HPReal& other) {
  if (this == &other) return *this;
  if (value_->_mpfr_d == nullptr) {
    mpfr_init2(value_, mpfr_get_prec(other.value_));
  } else if (mpfr_get_prec(value_) != mpfr_get_prec(other.value_)) {
    mpfr_set_prec(value_, mpfr_get_prec(other.value_));
  }
  mpfr_set(value_, other.value_, kRound);
  return *this;
}

HPReal& HPReal::operator=(HPReal&& other) noexcept {
  if (this == &other) return *this;
  release();
  *value_ = *other.value_;
  other.value_->_mpfr_d = nullptr;
  return *this;
}

HPReal::~HPReal() { release(); }

void HPReal::release() {
  if (value_->_mpfr_d != nullptr) {
    mpfr_clear(value_);
    value_->_mpfr_d = nullptr;
  }
}

HPReal HPReal::with_precision(Precision p) const {
  HPReal out(p);
  mpfr_set(out.value_, value_, kRound);
  return out;
}

std::string HPReal::to_string(int digits) const {
  if (is_nan()) return "nan";
  if (!is_finite()) return sign() > 0 ? "inf" : "-inf";
  if (digits <= 0) digits = std::max(precision().decimal_digits(), 1);
  char* buffer = nullptr;
  mpfr_asprintf(&buffer, "%.*Re", digits - 1, value_);
  std::string out(buffer);
  mpfr_free_str(buffer);
  return out;
}

std::string HPReal::to_exact_string() const {
  if (!is_finite()) return to_string();
  if (is_zero()) return "0";
  mpfr_exp_t exponent = 0;
  char* digits = mpfr_get_str(nullptr, &exponent, 10, 0, value_, kRound);
  std::string d(digits);
  mpfr_free_str(digits);
  std::string sign;
  if (d[0] == '-') {
    sign = "-";
    d.erase(0, 1);
  }
  while (d.size() > 1 && d.back() == '0') d.pop_back();
  // value = 0.d * 10^exponent
  std::string out = sign + d.substr(0, 1);
  if (d.size() > 1) out += "." + d.substr(1);
  long e = static_cast<long>(exponent) - 1;
  if (e != 0) out += "e" + std::to_string(e);
  return out;
}

#define QRADIAL_COMPOUND(op, fn)                                                  \
  HPReal& HPReal::operator op(const HPReal& rhs) {                               \
    if (mpfr_get_prec(rhs.value_) > mpfr_get_prec(value_)) {                     \
      mpfr_prec_round(value_, mpfr_get_prec(rhs.value_), kRound);                 \
    }                                                                             \
    fn(value_, value_, rhs.value_, kRound);                                       \
    return *this;                                                                 \
  }
QRADIAL_COMPOUND(+=, mpfr_add)
QRADIAL_COMPOUND(-=, mpfr_sub)
QRADIAL_COMPOUND(*=, mpfr_mul)
QRADIAL_COMPOUND(/=, mpfr_div)
#undef QRADIAL_COMPOUND

HPReal& HPReal::operator*=(long rhs) {
  mpfr_mul_si(value_, value_, rhs, kRound);
  return *this;
}
HPReal& HPReal::operator/=(long rhs) {
  mpfr_div_si(value_, value_, rhs, kRound);
  return *this;
}
HPReal& HPReal::operator+=(long rhs) {
  mpfr_add_si(value_, value_, rhs, kRound);
  return *this;
}
HPReal& HPReal::operator-=(long rhs) {
  mpfr_sub_si(value_, value_, rhs, kRound);
  return *this;
}

HPReal operator-(const HPReal& x) {
  HPReal out(x.precision());
  mpfr_neg(out.value_, x.value_, kRound);
  return out;
}

HPReal operator-(long lhs, const HPReal& rhs) {
  HPReal out(rhs.precision());
  mpfr_si_sub(out.value_, lhs, rhs.value_, kRound);
  return out;
}

HPReal operator/(long lhs, const HPReal& rhs) {
  HPReal out(rhs.precision());
  mpfr_si_div(out.value_, lhs, rhs.value_, kRound);
  return out;
}

std::partial_ordering operator<=>(const HPReal& a, const HPReal& b) {
  if (a.is_nan() || b.is_nan()) return std::partial_ordering::unordered;
  int c = mpfr_cmp(a.value_, b.value_);
  return c < 0 ? std::partial_ordering::less
               : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
}

std::partial_ordering operator<=>(const HPReal& a, double b) {
  if (a.is_nan() || std::isnan(b)) return std::partial_ordering::unordered;
  int c = mpfr_cmp_d(a.value_, b);
  return c < 0 ? std::partial_ordering::less
               : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
}

#define QRADIAL_UNARY(name, fn)         \
  HPReal name(const HPReal& x) {        \
    HPReal out(x.precision());          \
    fn(out.raw(), x.raw(), kRound);     \
    return out;                         \
  }
QRADIAL_UNARY(abs, mpfr_abs)
QRADIAL_UNARY(sqrt, mpfr_sqrt)
QRADIAL_UNARY(exp, mpfr_exp)
QRADIAL_UNARY(expm1, mpfr_expm1)
QRADIAL_UNARY(log, mpfr_log)
QRADIAL_UNARY(log1p, mpfr_log1p)
QRADIAL_UNARY(sin, mpfr_sin)
QRADIAL_UNARY(cos, mpfr_cos)
QRADIAL_UNARY(sinh, mpfr_sinh)
QRADIAL_UNARY(cosh, mpfr_cosh)
#undef QRADIAL_UNARY

HPReal pow(const HPReal& base, const HPReal& exponent) {
  HPReal out(max(base.precision(), exponent.precision()));
  mpfr_pow(out.raw(), base.raw(), exponent.raw(), kRound);
  return out;
}

HPReal pow(const HPReal& base, long exponent) {
  HPReal out(base.precision());
  mpfr_pow_si(out.raw(), base.raw(), exponent, kRound);
  return out;
}

HPReal atan2(const HPReal& y, const HPReal& x) {
  HPReal out(max(y.precision(), x.precision()));
  mpfr_atan2(out.raw(), y.raw(), x.raw(), kRound);
  return out;
}

HPReal hypot(const HPReal& x, const HPReal& y) {
  HPReal out(max(x.precision(), y.precision()));
  mpfr_hypot(out.raw(), x.raw(), y.raw(), kRound);
  return out;
}

HPReal ldexp(const HPReal& x, long exponent) {
  HPReal out(x.precision());
  mpfr_mul_2si(out.raw(), x.raw(), exponent, kRound);
  return out;
}

HPReal min(const HPReal& a, const HPReal& b) { return (b < a) ? b : a; }
HPReal max(const HPReal& a, const HPReal& b) { return (a < b) ? b : a; }

HPReal pi(Precision p) {
  HPReal out(p);
  mpfr_const_pi(out.raw(), kRound);
  return out;
}

HPReal unit_roundoff(Precision p) { return power_of_two(-p.bits, p); }

HPReal power_of_two(long e, Precision p) {
  HPReal out(1L, p);
  mpfr_mul_2si(out.raw(), out.raw(), e, kRound);
  return out;
}

// ---------------------------------------------------------------------------
// HPComplex

HPComplex::HPComplex(HPReal re, HPReal im) : re_(std::move(re)), im_(std::move(im)) {
  Precision p = max(re_.precision(), im_.precision());
  if (re_.precision() != p) re_ = re_.with_precision(p);
  if (im_.precision() != p) im_ = im_.with_precision(p);
}

HPComplex HPComplex::parse(std::string_view re, std::string_view im, Precision p) {
  return {HPReal::parse(re, p), HPReal::parse(im, p)};
}

HPComplex HPComplex::unit(const HPReal& theta) {
  HPReal s(theta.precision());
  HPReal c(theta.precision());
  mpfr_sin_cos(s.raw(), c.raw(), theta.raw(), kRound);
  return {std::move(c), std::move(s)};
}

HPComplex HPComplex::root_of_unity(long num, long den, Precision p) {
  if (den <= 0) throw InvalidArgument("root of unity needs a positive order");
  long r = ((num % den) + den) % den;
  // Quarter turns are exact; everything else goes through sin/cos once.
  if (4 * r % den == 0) {
    switch (4 * r / den) {
      case 0: return {HPReal(1L, p), HPReal(p)};
      case 1: return {HPReal(p), HPReal(1L, p)};
      case 2: return {HPReal(-1L, p), HPReal(p)};
      default: return {HPReal(p), HPReal(-1L, p)};
    }
  }
  HPReal theta = pi(p.guarded(16)) * (2 * r);
  theta /= den;
  HPComplex z = unit(theta);
  return z.with_precision(p);
}

HPComplex& HPComplex::operator+=(const HPComplex& rhs) {
  re_ += rhs.re_;
  im_ += rhs.im_;
  return *this;
}

HPComplex& HPComplex::operator-=(const HPComplex& rhs) {
  re_ -= rhs.re_;
  im_ -= rhs.im_;
  return *this;
}

HPComplex& HPComplex::operator*=(const HPComplex& rhs) {
  HPReal re = re_ * rhs.re_ - im_ * rhs.im_;
  im_ *= rhs.re_;
  im_ += re_ * rhs.im_;
  re_ = std::move(re);
  return *this;
}

HPComplex& HPComplex::operator/=(const HPComplex& rhs) {
  HPReal denom = rhs.re_ * rhs.re_ + rhs.im_ * rhs.im_;
  if (denom.is_zero()) throw InvalidArgument("complex division by zero");
  HPReal re = re_ * rhs.re_ + im_ * rhs.im_;
  HPReal im = im_ * rhs.re_ - re_ * rhs.im_;
  re_ = re / denom;
  im_ = im / denom;
  return *this;
}

HPComplex& HPComplex::operator*=(const HPReal& rhs) {
  re_ *= rhs;
  im_ *= rhs;
  return *this;
}

HPComplex& HPComplex::operator/=(const HPReal& rhs) {
  re_ /= rhs;
  im_ /= rhs;
  return *this;
}

HPComplex& HPComplex::operator*=(long rhs) {
  re_ *= rhs;
  im_ *= rhs;
  return *this;
}

HPComplex& HPComplex::operator/=(long rhs) {
  re_ /= rhs;
  im_ /= rhs;
  return *this;
}

HPReal abs(const HPComplex& z) { return hypot(z.re(), z.im()); }
HPReal arg(const HPComplex& z) { return atan2(z.im(), z.re()); }
HPComplex conj(const HPComplex& z) { return {z.re(), -z.im()}; }

HPComplex exp(const HPComplex& z) {
  HPComplex out = HPComplex::unit(z.im());
  out *= exp(z.re());
  return out;
}

HPComplex log(const HPComplex& z) {
  if (z.is_zero()) throw InvalidArgument("logarithm of zero");
  return {log(abs(z)), arg(z)};
}

}  // namespace qradial
