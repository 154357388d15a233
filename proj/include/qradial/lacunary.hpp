#pragma once

// Oscillation of sum C(n) q^{a^n} near q = 1 for a mean-zero cycle C.
//
// With K the largest index where C(K) != 0, mean zero lets the series be
// rewritten as sum_{j<K} C(j) G_j, where after q -> Q = q^{X_j}
//   G_j(Q) = sum_n Q^{a^{nk} M} (Q^{a^{nk}} - Q^{a^{nk+k}}),
// a sum of rectangle areas whose corners lie on y = x^M and y = x^m.
// Two sequences Q_r, Q'_r -> 1 keep G_j above and below fixed levels; when the
// levels separate, G_j has two cluster points.

#include <string>
#include <vector>

#include "qradial/hp.hpp"
#include "qradial/series.hpp"

namespace qradial {

struct Slopes {
  HPReal M;
  HPReal m;
  /// X_j = (a^K - a^j) / (a^k - 1): the exponent scale with Q = q^{X_j}.
  HPReal x_scale;
};

/// Slopes for residue j with anchor K (default k - 1):
///   M = (a^{k+j} - a^K) / (a^K - a^j),  m = (a^j - a^{K-k}) / (a^K - a^j).
/// Requires a > 1 and 0 <= j < K <= k - 1.
Slopes slopes(const HPReal& a, int k, int j);
Slopes slopes(const HPReal& a, int k, int j, int anchor);

struct FixedPoints {
  HPReal x0;        ///< x^m = 1 - x on (0, 1/2]
  HPReal x0_prime;  ///< x^M = 1 - x on [1/2, 1)
};

/// Bisection to absolute tolerance `tol`. Requires 0 < m <= 1 <= M.
FixedPoints fixed_points(const HPReal& M, const HPReal& m, const HPReal& tol);

struct OscillationSequences {
  /// Q_r = x0^{(m/M)^r}, from Q_r^M = Q_{r-1}^m, r = 1..r_max.
  std::vector<HPReal> q;
  std::vector<HPReal> q_prime;
  /// -log Q_r, kept separately because Q_r is within 1e-16 of 1 quickly.
  std::vector<HPReal> x;
  std::vector<HPReal> x_prime;
};

OscillationSequences oscillation_sequences(const HPReal& x0, const HPReal& x0_prime, const HPReal& M,
                                           const HPReal& m, int r_max);

/// G_j(Q) at Q = e^{-x} for the given slopes and period, summed until terms
/// fall below eps (the terms decay doubly exponentially).
HPReal rectangle_sum(const HPReal& x, const HPReal& M, const HPReal& a, int k, const HPReal& eps);

struct ResidueAnalysis {
  int j = 0;
  HPReal M, m, x_scale;
  HPReal x0, x0_prime;
  /// (x0^{m/M} - x0) x0^m: G_j(Q_r) stays above this.
  HPReal lower_value;
  /// 1 - x0'(1 - x0'^M): G_j(Q'_r) stays below this.
  HPReal upper_value;
  bool inequality_holds = false;
  /// min_r G_j(Q_r) and max_r G_j(Q'_r), measured directly.
  HPReal inner_high_min, inner_low_max;
  bool inner_bounds_hold = false;
};

struct LacunarySample {
  int r = 0;
  /// -log q in the original variable.
  HPReal x;
  HPComplex value;
};

struct LacunaryReport {
  HPReal a;
  int k = 0;
  int anchor = 0;
  int r_max = 0;
  std::vector<ResidueAnalysis> per_residue;
  /// Residue whose sequences are mapped back to the original series.
  int cluster_residue = 0;
  std::vector<LacunarySample> samples_high;  ///< along Q_r
  std::vector<LacunarySample> samples_low;   ///< along Q'_r
  HPComplex cluster_high;
  HPComplex cluster_low;
  HPReal separation;
  /// "oscillates" when the separating inequality holds for every residue, else "inconclusive".
  std::string verdict;
};

/// Throws NonZeroMean for a nonzero mean and InvalidArgument for a <= 1 or an
/// identically zero cycle. Series evaluation failures surface as
/// EvaluationFailure carrying -log q.
LacunaryReport oscillation_report(const PeriodicCoefficients& coeffs, const HPReal& a, int r_max, Precision p);

}  // namespace qradial
