#pragma once

// Asymptotic expansion of sum C(n) q^{s(n)} in x = -log q from Euler's
// summation formula on [0, inf):
//   sum f(n) = int_0^inf f + f(0)/2 - sum_{k<m} B_{2k}/(2k)! f^{(2k-1)}(0) + R_m,
// with f = q^{s(t)}. The integral expands in powers x^{w/d - 1/d}; the boundary
// terms in integer powers of x. Everything lives on the lattice {l/d : l >= -1}.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qradial/hp.hpp"
#include "qradial/series.hpp"

namespace qradial {

/// P_k(lambda, t) with d^k/dt^k e^{lambda s(t)} = P_k(lambda, t) e^{lambda s(t)}.
struct DerivativePolynomial {
  int order = 0;
  /// (power of lambda, power of t) -> coefficient; zero entries are not stored.
  std::map<std::pair<int, int>, Rational> terms;

  [[nodiscard]] Rational operator()(const Rational& lambda, const Rational& t) const;
  [[nodiscard]] HPReal operator()(const HPReal& lambda, const HPReal& t) const;
  /// Coefficient of lambda^r as a polynomial in t.
  [[nodiscard]] RationalPolynomial slice(int r) const;
};

/// P_0 .. P_K from P_0 = 1, P_{k+1} = dP_k/dt + lambda s'(t) P_k.
std::vector<DerivativePolynomial> derivative_polynomials(const PolynomialExponent& s, int K);

/// rational + sum_l gamma[l] * Gamma(l/d) * a_d^{-l/d} with 0 < l < d, a_d the
/// leading coefficient of the exponent the expansion was built for.
struct ExactCoefficient {
  Rational rational;
  std::map<int, Rational> gamma;

  [[nodiscard]] bool is_zero() const;
  ExactCoefficient& operator+=(const ExactCoefficient& rhs);
  ExactCoefficient& operator*=(const Rational& c);
  [[nodiscard]] std::string to_string(int d, const Rational& a_d) const;
};

struct ExpansionTerm {
  /// The term is coefficient * x^{lattice / d}.
  int lattice = 0;
  HPComplex coefficient;
  std::optional<ExactCoefficient> exact;
};

struct AsymptoticExpansion {
  int d = 1;
  /// Leading coefficient the exact forms refer to.
  Rational a_d;
  /// Strictly increasing in lattice; exact zeros are kept so the retained
  /// orders stay visible.
  std::vector<ExpansionTerm> terms;
  /// Highest lattice index retained.
  int order = 0;
  /// The remainder is O(x^{remainder_order / d}).
  int remainder_order = 0;
  /// |x^{-1/d} coefficient| that cancelled for a mean-zero cycle (not in terms).
  std::optional<HPReal> cancelled_leading;

  [[nodiscard]] HPComplex operator()(const HPReal& x) const;
  [[nodiscard]] const ExpansionTerm* find(int lattice) const;
  /// Coefficient at a lattice index, zero when absent.
  [[nodiscard]] HPComplex coefficient(int lattice, Precision p) const;
};

/// int_0^inf e^{-x s(t)} dt = x^{-1/d} / (d a_d^{1/d}) sum_w c_w x^{w/d}, w <= W,
/// from the multi-index expansion of exp(sum_i a~_{d-i} x^{i/d} u^{(d-i)/d}),
/// a~_j = -a_j / a_d^{j/d}. Lattice indices run from -1 to W - 1.
AsymptoticExpansion integral_expansion(const PolynomialExponent& s, int W, Precision p);

/// e^{-s(0) x} [1/2 - sum_{k=1}^{m-1} B_{2k}/(2k)! P_{2k-1}(-x, 0)] through x^W,
/// exact. Integer powers x^i sit at lattice i d.
AsymptoticExpansion boundary_terms(const PolynomialExponent& s, int m, int W, Precision p);

/// Sum over residues j of C(j) [integral + boundary] for s_j(n) = s(nk + j),
/// through lattice index W. For a mean-zero cycle the x^{-1/d} terms cancel:
/// the residual goes to cancelled_leading instead of the term list. Exact forms
/// are attached when every C(j) is an integer.
AsymptoticExpansion series_expansion(const SeriesSpec& spec, int m, int W, Precision p);

/// Defaults: m = 4, W = 2d + 2.
constexpr int kDefaultEulerDepth = 4;
inline int default_expansion_order(int d) { return 2 * d + 2; }

/// remainder_prefactor(m) |int_0^inf P_{2m}(-x, t) e^{-x s(t)} dt|, integral by
/// double-exponential quadrature. An asymptotic estimate, not a rigorous bound.
HPReal remainder_bound(const PolynomialExponent& s, int m, const HPReal& x);

struct ResidualPoint {
  HPReal x;
  HPComplex series;
  HPComplex expansion;
  HPReal residual;
  HPReal noise_floor;
};

struct VerificationReport {
  std::vector<ResidualPoint> points;
  /// Least-squares slope of log residual against log x over points above their floor.
  std::optional<HPReal> slope;
  Rational expected_exponent;
  bool consistent = false;
  std::string note;
};

/// Residuals |series(x) - expansion(x)| on the grid (inside (0, 0.1]) and their
/// empirical order, compared with the expansion's remainder order.
VerificationReport verify_expansion(const SeriesSpec& spec, const AsymptoticExpansion& expansion,
                                    const std::vector<HPReal>& grid);

}  // namespace qradial
