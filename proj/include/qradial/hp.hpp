#pragma once

// Precision-parameterized real and complex arithmetic on top of MPFR, plus
// exact rationals from GMP. Every HPReal carries its own precision; binary
// operations produce a result at the larger of the operand precisions.

#include <gmpxx.h>
#include <mpfr.h>

#include <compare>
#include <concepts>
#include <cstdint>
#include <string>
#include <string_view>

namespace qradial {

using Rational = mpq_class;
using BigInt = mpz_class;

/// Working precision in bits.
struct Precision {
  static constexpr long kDefaultBits = 256;

  long bits = kDefaultBits;

  constexpr Precision() = default;
  constexpr explicit Precision(long b) : bits(b) {}

  /// Same precision plus `extra` guard bits.
  [[nodiscard]] constexpr Precision guarded(long extra) const { return Precision(bits + extra); }
  /// Approximate number of significant decimal digits.
  [[nodiscard]] int decimal_digits() const;

  friend constexpr auto operator<=>(Precision, Precision) = default;
};

constexpr Precision max(Precision a, Precision b) { return a.bits >= b.bits ? a : b; }

/// a / b in lowest terms (the two-argument mpq_class constructor does not reduce).
inline Rational ratio(long a, long b) {
  Rational r(a, b);
  r.canonicalize();
  return r;
}

/// Parses "p/q", an integer, or a finite decimal ("-2.5", "1e-3") into an
/// exact rational. Throws InvalidArgument on malformed input or zero denominator.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& r);

class HPReal {
 public:
  explicit HPReal(Precision p);
  HPReal(long value, Precision p);
  HPReal(int value, Precision p) : HPReal(static_cast<long>(value), p) {}
  HPReal(unsigned long value, Precision p);
  HPReal(double value, Precision p);
  HPReal(const Rational& value, Precision p);
  HPReal(const BigInt& value, Precision p);

  /// Decimal ("0.25", "-1e-6") or rational ("1/3") text, rounded to nearest.
  static HPReal parse(std::string_view text, Precision p);

  HPReal(const HPReal& other);
  HPReal(HPReal&& other) noexcept;
  HPReal& operator=(const HPReal& other);
  HPReal& operator=(HPReal&& other) noexcept;
  ~HPReal();

  [[nodiscard]] Precision precision() const { return Precision(mpfr_get_prec(value_)); }
  /// Copy rounded (or widened) to precision `p`.
  [[nodiscard]] HPReal with_precision(Precision p) const;

  [[nodiscard]] mpfr_srcptr raw() const { return value_; }
  [[nodiscard]] mpfr_ptr raw() { return value_; }

  [[nodiscard]] double to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }
  [[nodiscard]] long to_long() const { return mpfr_get_si(value_, MPFR_RNDZ); }
  /// Scientific notation with `digits` significant digits; 0 means all
  /// digits justified by the precision.
  [[nodiscard]] std::string to_string(int digits = 0) const;
  /// Shortest decimal string that reads back to exactly this value at its precision.
  [[nodiscard]] std::string to_exact_string() const;

  [[nodiscard]] bool is_zero() const { return mpfr_zero_p(value_) != 0; }
  [[nodiscard]] bool is_finite() const { return mpfr_number_p(value_) != 0; }
  [[nodiscard]] bool is_nan() const { return mpfr_nan_p(value_) != 0; }
  [[nodiscard]] int sign() const { return mpfr_sgn(value_); }

  HPReal& operator+=(const HPReal& rhs);
  HPReal& operator-=(const HPReal& rhs);
  HPReal& operator*=(const HPReal& rhs);
  HPReal& operator/=(const HPReal& rhs);
  HPReal& operator*=(long rhs);
  HPReal& operator/=(long rhs);
  HPReal& operator+=(long rhs);
  HPReal& operator-=(long rhs);

  friend HPReal operator-(const HPReal& x);
  friend HPReal operator+(HPReal lhs, const HPReal& rhs) { return lhs += rhs; }
  friend HPReal operator-(HPReal lhs, const HPReal& rhs) { return lhs -= rhs; }
  friend HPReal operator*(HPReal lhs, const HPReal& rhs) { return lhs *= rhs; }
  friend HPReal operator/(HPReal lhs, const HPReal& rhs) { return lhs /= rhs; }
  friend HPReal operator+(HPReal lhs, long rhs) { return lhs += rhs; }
  friend HPReal operator-(HPReal lhs, long rhs) { return lhs -= rhs; }
  friend HPReal operator*(HPReal lhs, long rhs) { return lhs *= rhs; }
  friend HPReal operator/(HPReal lhs, long rhs) { return lhs /= rhs; }
  friend HPReal operator*(long lhs, HPReal rhs) { return rhs *= lhs; }
  friend HPReal operator+(long lhs, HPReal rhs) { return rhs += lhs; }
  friend HPReal operator-(long lhs, const HPReal& rhs);
  friend HPReal operator/(long lhs, const HPReal& rhs);
  // A double would silently narrow to long through the overloads above.
  template <std::floating_point F> friend HPReal operator+(const HPReal&, F) = delete;
  template <std::floating_point F> friend HPReal operator-(const HPReal&, F) = delete;
  template <std::floating_point F> friend HPReal operator*(const HPReal&, F) = delete;
  template <std::floating_point F> friend HPReal operator/(const HPReal&, F) = delete;
  template <std::floating_point F> friend HPReal operator*(F, const HPReal&) = delete;

  friend std::partial_ordering operator<=>(const HPReal& a, const HPReal& b);
  friend bool operator==(const HPReal& a, const HPReal& b) { return mpfr_equal_p(a.value_, b.value_) != 0; }
  friend std::partial_ordering operator<=>(const HPReal& a, double b);
  friend bool operator==(const HPReal& a, double b) { return (a <=> b) == 0; }

 private:
  void release();
  mpfr_t value_;
};

HPReal abs(const HPReal& x);
HPReal sqrt(const HPReal& x);
HPReal exp(const HPReal& x);
HPReal expm1(const HPReal& x);
HPReal log(const HPReal& x);
HPReal log1p(const HPReal& x);
HPReal pow(const HPReal& base, const HPReal& exponent);
HPReal pow(const HPReal& base, long exponent);
HPReal sin(const HPReal& x);
HPReal cos(const HPReal& x);
HPReal sinh(const HPReal& x);
HPReal cosh(const HPReal& x);
HPReal atan2(const HPReal& y, const HPReal& x);
HPReal hypot(const HPReal& x, const HPReal& y);
HPReal ldexp(const HPReal& x, long exponent);
HPReal min(const HPReal& a, const HPReal& b);
HPReal max(const HPReal& a, const HPReal& b);

HPReal pi(Precision p);
/// 2^{-p.bits}: the unit in which per-operation relative error is measured.
HPReal unit_roundoff(Precision p);
/// 2^e at precision p.
HPReal power_of_two(long e, Precision p);

class HPComplex {
 public:
  explicit HPComplex(Precision p) : re_(p), im_(p) {}
  HPComplex(HPReal re, HPReal im);
  explicit HPComplex(const HPReal& re) : re_(re), im_(re.precision()) {}
  HPComplex(double re, double im, Precision p) : re_(re, p), im_(im, p) {}

  static HPComplex parse(std::string_view re, std::string_view im, Precision p);
  /// e^{iθ}.
  static HPComplex unit(const HPReal& theta);
  /// e^{2πi·num/den}, exact at multiples of a quarter turn.
  static HPComplex root_of_unity(long num, long den, Precision p);

  [[nodiscard]] const HPReal& re() const { return re_; }
  [[nodiscard]] const HPReal& im() const { return im_; }
  [[nodiscard]] HPReal& re() { return re_; }
  [[nodiscard]] HPReal& im() { return im_; }
  [[nodiscard]] Precision precision() const { return max(re_.precision(), im_.precision()); }
  [[nodiscard]] HPComplex with_precision(Precision p) const {
    return {re_.with_precision(p), im_.with_precision(p)};
  }
  [[nodiscard]] bool is_zero() const { return re_.is_zero() && im_.is_zero(); }
  [[nodiscard]] bool is_real() const { return im_.is_zero(); }

  HPComplex& operator+=(const HPComplex& rhs);
  HPComplex& operator-=(const HPComplex& rhs);
  HPComplex& operator*=(const HPComplex& rhs);
  HPComplex& operator/=(const HPComplex& rhs);
  HPComplex& operator*=(const HPReal& rhs);
  HPComplex& operator/=(const HPReal& rhs);
  HPComplex& operator*=(long rhs);
  HPComplex& operator/=(long rhs);

  friend HPComplex operator-(const HPComplex& z) { return {-z.re_, -z.im_}; }
  friend HPComplex operator+(HPComplex a, const HPComplex& b) { return a += b; }
  friend HPComplex operator-(HPComplex a, const HPComplex& b) { return a -= b; }
  friend HPComplex operator*(HPComplex a, const HPComplex& b) { return a *= b; }
  friend HPComplex operator/(HPComplex a, const HPComplex& b) { return a /= b; }
  friend HPComplex operator*(HPComplex a, const HPReal& b) { return a *= b; }
  friend HPComplex operator*(const HPReal& b, HPComplex a) { return a *= b; }
  friend HPComplex operator/(HPComplex a, const HPReal& b) { return a /= b; }
  friend HPComplex operator*(HPComplex a, long b) { return a *= b; }
  friend HPComplex operator*(long b, HPComplex a) { return a *= b; }
  friend HPComplex operator/(HPComplex a, long b) { return a /= b; }
  friend bool operator==(const HPComplex& a, const HPComplex& b) = default;

 private:
  HPReal re_;
  HPReal im_;
};

HPReal abs(const HPComplex& z);
HPReal arg(const HPComplex& z);
HPComplex conj(const HPComplex& z);
HPComplex exp(const HPComplex& z);
/// Principal branch.
HPComplex log(const HPComplex& z);

}  // namespace qradial
