#pragma once

// q-integral approximants and the rectangle sums behind the periodic-limit
// argument: for eventually increasing x(t), y(t) with y/x -> c,
//   sum_{n>=0} q^{y(n)} (q^{x(n)} - q^{x(n+1)}) -> 1/(1+c)   as q -> 1-,
// squeezed between integrals over the curves (q^{x(t)}, q^{y(t)}) and
// (q^{x(t)}, q^{y(t-1)}).

#include <cstdint>

#include "qradial/hp.hpp"
#include "qradial/polynomial.hpp"
#include "qradial/series.hpp"

namespace qradial {

/// (1 - q) / (1 - q^{c+1}), the q-integral of x^c on [0, 1]. Requires c > 0, 0 < q < 1.
HPReal q_integral_power(const HPReal& c, const HPReal& q);

/// Polynomial x(t), y(t) of one degree with positive leading coefficients.
/// c = lead(y) / lead(x) = lim y(t)/x(t), which is the orientation that gives
/// 1/(1+c) (x = t, y = 2t sums to (1-q)/(1-q^3) -> 1/3).
struct LemmaPair {
  LemmaPair(PolynomialExponent x, PolynomialExponent y);

  PolynomialExponent x;
  PolynomialExponent y;
  Rational c;

  /// Smallest integer N with x, y positive and increasing on [N, inf), from root bounds.
  [[nodiscard]] std::uint64_t increasing_from() const { return n_; }

 private:
  std::uint64_t n_ = 0;
};

/// The pair for residue j of the mean-zero decomposition with period k:
///   x(n) = sum_{l<n} s(lk + k-1) - s(lk + j),  y(n) = s(nk + j) - x(n),
/// so that q^{y(n)}(q^{x(n)} - q^{x(n+1)}) = q^{s(nk+j)} - q^{s(nk+k-1)}.
/// Requires 0 <= j <= k - 2.
LemmaPair decomposition_pair(const PolynomialExponent& s, int k, int j);

/// q^{y(n)} (q^{x(n)} - q^{x(n+1)}).
HPReal rectangle_area(const LemmaPair& pair, const HPReal& q, std::uint64_t n);

struct LemmaSum {
  HPReal sum;       ///< n >= 0
  HPReal tail_sum;  ///< n >= N + 1
  /// int_{N+1}^inf q^{y(t)} d(-q^{x(t)}) and the same with y(t - 1).
  HPReal lower_int;
  HPReal upper_int;
  std::uint64_t N = 0;
  /// Certified truncation plus rounding bound on sum (and tail_sum).
  HPReal error_bound;
  /// Quadrature error estimate, larger of the two integrals.
  HPReal quadrature_error;
  std::uint64_t terms_used = 0;
};

/// Requires 0 < q < 1 and eps > 0. The sum is split as
/// sum q^{x(n)+y(n)} - sum q^{y(n)+x(n+1)}, each evaluated with a certified
/// tail at enough guard bits to absorb the cancellation near q = 1. The squeeze
/// integrals use double-exponential quadrature in t with tolerance eps/10.
LemmaSum lemma_sum(const LemmaPair& pair, const HPReal& q, const HPReal& eps);

/// 1 / (1 + c).
Rational lemma_limit(const LemmaPair& pair);

}  // namespace qradial
