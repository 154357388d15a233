#pragma once

// Series of the form sum_{n>=0} C(n) q^{s(n)} with a periodic coefficient
// cycle C and an exponent s that is either a polynomial with exact rational
// coefficients or an exponential a^n.

#include <cstdint>
#include <string_view>
#include <variant>
#include <vector>

#include "qradial/hp.hpp"
#include "qradial/polynomial.hpp"

namespace qradial {

/// One period C(0), ..., C(k-1) of a periodic coefficient sequence.
class PeriodicCoefficients {
 public:
  explicit PeriodicCoefficients(std::vector<HPComplex> values);
  /// Real integer cycle, e.g. {1, -1}.
  static PeriodicCoefficients from_integers(std::initializer_list<long> values, Precision p);

  [[nodiscard]] std::size_t period() const { return values_.size(); }
  [[nodiscard]] const HPComplex& operator[](std::uint64_t n) const { return values_[n % values_.size()]; }
  [[nodiscard]] const std::vector<HPComplex>& values() const { return values_; }
  [[nodiscard]] Precision precision() const;

  [[nodiscard]] HPComplex sum() const;
  [[nodiscard]] HPComplex mean() const;
  [[nodiscard]] HPReal max_abs() const;
  /// The same sequence written with period `times * k`.
  [[nodiscard]] PeriodicCoefficients replicated(std::size_t times) const;

  friend bool operator==(const PeriodicCoefficients&, const PeriodicCoefficients&) = default;

 private:
  std::vector<HPComplex> values_;
};

/// s(n) = a_0 + a_1 n + ... + a_d n^d with d >= 1 and a_d > 0.
class PolynomialExponent {
 public:
  explicit PolynomialExponent(RationalPolynomial polynomial);
  static PolynomialExponent parse(std::string_view text) {
    return PolynomialExponent(RationalPolynomial::parse(text));
  }

  [[nodiscard]] const RationalPolynomial& polynomial() const { return poly_; }
  [[nodiscard]] int degree() const { return poly_.degree(); }
  [[nodiscard]] const Rational& leading() const { return poly_.leading(); }
  [[nodiscard]] Rational operator()(std::uint64_t n) const;

  /// Smallest n0 such that s(n+1) - s(n) is positive and nondecreasing for all n >= n0.
  [[nodiscard]] std::uint64_t increasing_from() const { return increasing_from_; }

  friend bool operator==(const PolynomialExponent& a, const PolynomialExponent& b) { return a.poly_ == b.poly_; }

 private:
  RationalPolynomial poly_;
  std::uint64_t increasing_from_ = 0;
};

/// s(n) = a^n with a > 1.
class ExponentialExponent {
 public:
  explicit ExponentialExponent(HPReal base);
  [[nodiscard]] const HPReal& base() const { return base_; }
  friend bool operator==(const ExponentialExponent&, const ExponentialExponent&) = default;

 private:
  HPReal base_;
};

using Exponent = std::variant<PolynomialExponent, ExponentialExponent>;

struct SeriesSpec {
  PeriodicCoefficients coefficients;
  Exponent exponent;

  [[nodiscard]] bool has_polynomial_exponent() const {
    return std::holds_alternative<PolynomialExponent>(exponent);
  }
  /// Throws InvalidArgument when the exponent is exponential.
  [[nodiscard]] const PolynomialExponent& polynomial() const;
  [[nodiscard]] const ExponentialExponent& exponential() const;

  friend bool operator==(const SeriesSpec&, const SeriesSpec&) = default;
};

/// Exact s(n) for polynomial exponents, a^n at precision p otherwise.
std::variant<Rational, HPReal> exponent_value(const Exponent& exponent, std::uint64_t n, Precision p);

struct EvaluationOptions {
  std::uint64_t term_budget = 10'000'000;
};

struct Evaluation {
  HPComplex value;
  /// Certified bound on |S - S_N| for the discarded tail.
  HPReal tail_bound;
  /// Conservative bound on accumulated rounding error in the kept terms.
  HPReal rounding_bound;
  std::uint64_t terms_used = 0;
};

/// Sums terms until the certified tail bound drops to `eps`. Requires |q| < 1
/// and eps > 0. Non-integer exponents use the principal branch of log q.
/// Throws BudgetExceeded (with the bound reached) when the term budget runs out.
Evaluation evaluate(const SeriesSpec& spec, const HPComplex& q, const HPReal& eps,
                    const EvaluationOptions& options = {});

/// Same as evaluate() at q = e^{-x}, x > 0. Keeping x instead of q avoids the
/// cancellation in 1 - q when q is very close to 1.
Evaluation evaluate_at(const SeriesSpec& spec, const HPReal& x, const HPReal& eps,
                       const EvaluationOptions& options = {});

/// sum_{n=0}^{last} C(n) q^{s(n)}, each term computed directly.
HPComplex partial_sum(const SeriesSpec& spec, const HPComplex& q, std::uint64_t last);

}  // namespace qradial
