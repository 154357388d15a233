#pragma once

// Limits of sum C(n) q^{s(n)} as q -> xi radially, xi a root of unity.
// Writing q = xi e^{-x} turns the limit at xi into a limit at 1 for the twisted
// coefficients C(n) xi^{s(n)}, which are again periodic.

#include <optional>
#include <vector>

#include "qradial/hp.hpp"
#include "qradial/lacunary.hpp"
#include "qradial/series.hpp"

namespace qradial {

/// xi = e^{2 pi i p / N}, stored reduced with N >= 1 and 0 <= p < N.
class RootOfUnity {
 public:
  RootOfUnity() = default;
  RootOfUnity(long p, long N);

  [[nodiscard]] long p() const { return p_; }
  [[nodiscard]] long N() const { return n_; }
  [[nodiscard]] bool is_one() const { return n_ == 1; }
  [[nodiscard]] HPComplex value(Precision prec) const { return HPComplex::root_of_unity(p_, n_, prec); }
  /// Product of two roots of unity.
  friend RootOfUnity operator*(const RootOfUnity& a, const RootOfUnity& b);
  friend bool operator==(const RootOfUnity&, const RootOfUnity&) = default;

 private:
  long p_ = 0;
  long n_ = 1;
};

/// |mean| below this counts as zero: 2^{16 - P}.
HPReal mean_zero_tolerance(Precision p);

HPComplex mean(const PeriodicCoefficients& coeffs);
bool has_mean_zero(const PeriodicCoefficients& coeffs);
/// Throws NonZeroMean carrying the mean.
void require_mean_zero(const PeriodicCoefficients& coeffs);

/// Limit at q -> 1 for a mean-zero cycle:
///   sum_{j=0}^{k-2} (k-1-j) C(j) / k,
/// checked against the equivalent -sum_j j C(j) / k. Throws NonZeroMean.
HPComplex closed_form_limit(const PeriodicCoefficients& coeffs);
/// The -sum_j j C(j) / k form on its own (no mean check).
HPComplex weighted_index_form(const PeriodicCoefficients& coeffs);

/// C(n) xi^{s(n)} with period lcm(k, N). The residue p s(n) mod N is exact
/// integer arithmetic. Requires integer coefficients in s unless xi = 1.
PeriodicCoefficients twist(const PeriodicCoefficients& coeffs, const PolynomialExponent& s, const RootOfUnity& xi);

/// coefficient * x^{exponent}, x = -log|q|.
struct LeadingTerm {
  HPComplex coefficient;
  Rational exponent;
};

struct RadialLimitResult {
  enum class Tag { Converges, Diverges, Oscillates };

  Tag tag = Tag::Converges;
  std::optional<HPComplex> value;             ///< Converges
  std::optional<LeadingTerm> leading_term;    ///< Diverges (conjectural leading term)
  std::optional<LacunaryReport> evidence;     ///< Oscillates, when the cycle has mean zero

  /// The cycle the limit was classified from, and its mean.
  PeriodicCoefficients twisted;
  HPComplex twisted_mean;
};

const char* to_string(RadialLimitResult::Tag tag);

/// Mean zero after twisting: Converges to the closed form. Nonzero mean μ:
/// Diverges with leading term μ Γ(1/d) / (d a_d^{1/d}) x^{-1/d}. Exponential
/// exponents (xi = 1 only): Oscillates, with lacunary evidence for mean zero.
RadialLimitResult classify_radial_limit(const SeriesSpec& spec, const RootOfUnity& xi, int lacunary_r_max = 8);

struct ExtrapolationGrid {
  HPReal x_min;
  HPReal x_max;
  int count = 12;

  /// 12 geometric points on [1e-4, 1e-2].
  static ExtrapolationGrid standard(Precision p);
  /// The standard grid slid down (if needed) until the exponentially small
  /// oscillating remainder exp(-E(x)) from Poisson summation is below e^{-35}
  /// at x_max, where for s ~ a_d t^d and twisted period k,
  ///   E(x) = ((d-1)/d) sin(pi / (2(d-1))) w^{d/(d-1)} (d a_d x)^{-1/(d-1)}, w = 2 pi / k.
  /// The window keeps its 100:1 span. Degree 1 has no such remainder.
  static ExtrapolationGrid automatic(const PolynomialExponent& s, std::size_t twisted_period, Precision p);
  [[nodiscard]] std::vector<HPReal> points() const;
};

/// ExtrapolationGrid::automatic for the twisted cycle of spec at xi.
ExtrapolationGrid default_grid(const SeriesSpec& spec, const RootOfUnity& xi);

struct ExtrapolationResult {
  HPComplex estimate;
  HPReal error_estimate;
  int fit_order = 0;
  std::vector<HPReal> xs;
  std::vector<HPComplex> values;
  /// c_0 .. c_{fit_order} for the basis x^{w/d}.
  std::vector<HPComplex> coefficients;
};

/// Evaluates the twisted series at q = e^{-x_i} on the grid and least-squares
/// fits sum_{w=0}^{fit_order} c_w x^{w/d}; returns c_0. fit_order < 0 selects 2d.
/// The error estimate is the larger of the standard error of c_0 and its change
/// when the fit order drops by one. Throws SingularFit for a rank-deficient or
/// underdetermined system.
ExtrapolationResult extrapolate_limit(const SeriesSpec& spec, const RootOfUnity& xi, const ExtrapolationGrid& grid,
                                      int fit_order = -1, const EvaluationOptions& options = {});

/// Least squares for the real system A c = b by Householder QR at the working
/// precision of A. Exposed for testing. Also returns the standard error of each
/// coefficient (zero when the system is square).
struct LeastSquaresFit {
  std::vector<HPReal> coefficients;
  std::vector<HPReal> standard_errors;
  HPReal residual_norm;
};
LeastSquaresFit least_squares(std::vector<std::vector<HPReal>> rows, std::vector<HPReal> rhs);

}  // namespace qradial
