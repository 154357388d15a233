#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "qradial/hp.hpp"

namespace qradial {

/// Dense univariate polynomial with exact rational coefficients a_0..a_d.
/// Trailing zero coefficients are stripped, so degree() is exact; the zero
/// polynomial has degree -1.
class RationalPolynomial {
 public:
  RationalPolynomial() = default;
  explicit RationalPolynomial(std::vector<Rational> coefficients);
  RationalPolynomial(std::initializer_list<long> coefficients);

  static RationalPolynomial monomial(const Rational& c, int exponent);
  /// Parses expressions such as "3t^5 + t + 7", "1/2*t^2 - t", "n^3" (either
  /// variable letter). Throws InvalidArgument on anything else.
  static RationalPolynomial parse(std::string_view text);

  [[nodiscard]] int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  [[nodiscard]] bool is_zero() const { return coeffs_.empty(); }
  [[nodiscard]] const std::vector<Rational>& coefficients() const { return coeffs_; }
  [[nodiscard]] Rational coefficient(int i) const;
  [[nodiscard]] const Rational& leading() const { return coeffs_.back(); }
  [[nodiscard]] bool has_integer_coefficients() const;

  [[nodiscard]] Rational operator()(const Rational& t) const;
  [[nodiscard]] HPReal operator()(const HPReal& t) const;

  [[nodiscard]] RationalPolynomial derivative() const;
  /// p(scale * t + shift).
  [[nodiscard]] RationalPolynomial compose_affine(const Rational& scale, const Rational& shift) const;
  /// p(t + 1) - p(t).
  [[nodiscard]] RationalPolynomial forward_difference() const;
  /// Strict upper bound on the modulus of every root (Cauchy). Zero polynomial excluded.
  [[nodiscard]] Rational root_bound() const;

  RationalPolynomial& operator+=(const RationalPolynomial& rhs);
  RationalPolynomial& operator-=(const RationalPolynomial& rhs);
  RationalPolynomial& operator*=(const Rational& rhs);
  friend RationalPolynomial operator+(RationalPolynomial a, const RationalPolynomial& b) { return a += b; }
  friend RationalPolynomial operator-(RationalPolynomial a, const RationalPolynomial& b) { return a -= b; }
  friend RationalPolynomial operator*(const RationalPolynomial& a, const RationalPolynomial& b);
  friend RationalPolynomial operator*(RationalPolynomial a, const Rational& c) { return a *= c; }
  friend bool operator==(const RationalPolynomial& a, const RationalPolynomial& b) { return a.coeffs_ == b.coeffs_; }

  /// Exact interpolation through (i, values[i]), i = 0..n-1.
  static RationalPolynomial interpolate(const std::vector<Rational>& values);

  [[nodiscard]] std::string to_string(char variable = 't') const;

 private:
  void normalize();
  std::vector<Rational> coeffs_;
};

}  // namespace qradial
