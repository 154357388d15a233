#include "qradial/lacunary.hpp"

#include <algorithm>
#include <string>

#include "qradial/errors.hpp"
#include "qradial/radial.hpp"

namespace qradial {

namespace {

void check_base(const HPReal& a) {
  if (!(a > 1.0) || !a.is_finite()) throw InvalidArgument("lacunary base a must be a finite real > 1");
}

// Bisection for the sign change of f on [lo, hi], f(lo) < 0 <= f(hi).
template <class F>
HPReal bisect(F f, HPReal lo, HPReal hi, const HPReal& tol) {
  if (!(f(lo) < 0.0) || f(hi) < 0.0) throw Error("fixed point: no sign change on the bracket");
  if (f(hi) == 0.0) return hi;
  while (hi - lo > tol) {
    HPReal mid = (lo + hi) / 2;
    if (f(mid) < 0.0) {
      lo = std::move(mid);
    } else {
      hi = std::move(mid);
    }
  }
  return (lo + hi) / 2;
}

HPComplex tail_mean(const std::vector<LacunarySample>& samples, Precision p) {
  const std::size_t count = (samples.size() + 1) / 2;
  HPComplex total(p);
  for (std::size_t i = samples.size() - count; i < samples.size(); ++i) total += samples[i].value;
  return total / static_cast<long>(count);
}

}  // namespace

Slopes slopes(const HPReal& a, int k, int j) { return slopes(a, k, j, k - 1); }

Slopes slopes(const HPReal& a, int k, int j, int anchor) {
  check_base(a);
  if (k < 2) throw InvalidArgument("slopes need period k >= 2");
  if (anchor < 1 || anchor > k - 1) throw InvalidArgument("anchor must lie in 1..k-1");
  if (j < 0 || j >= anchor) throw InvalidArgument("residue j must lie in 0..anchor-1");
  const HPReal aK = pow(a, static_cast<long>(anchor));
  const HPReal aj = pow(a, static_cast<long>(j));
  const HPReal ak = pow(a, static_cast<long>(k));
  const HPReal gap = aK - aj;
  return {(ak * aj - aK) / gap, (aj - aK / ak) / gap, gap / (ak - 1L)};
}

FixedPoints fixed_points(const HPReal& M, const HPReal& m, const HPReal& tol) {
  if (!(m > 0.0) || m > 1.0 || M < 1.0) throw InvalidArgument("fixed points need 0 < m <= 1 <= M");
  const Precision p = max(M.precision(), m.precision());
  const HPReal half(Rational(1, 2), p);
  // x^m - (1 - x) increases on (0, 1/2]; x^M - (1 - x) increases on [1/2, 1).
  auto low = [&](const HPReal& x) { return pow(x, m) - (1L - x); };
  auto high = [&](const HPReal& x) { return pow(x, M) - (1L - x); };
  HPReal x0 = low(half) == 0.0 ? half : bisect(low, HPReal(p), half, tol);
  HPReal x0p = high(half) == 0.0 ? half : bisect(high, half, HPReal(1L, p), tol);
  return {std::move(x0), std::move(x0p)};
}

OscillationSequences oscillation_sequences(const HPReal& x0, const HPReal& x0_prime, const HPReal& M,
                                           const HPReal& m, int r_max) {
  if (r_max < 1) throw InvalidArgument("r_max must be at least 1");
  if (!(x0 > 0.0) || !(x0 < 1.0) || !(x0_prime > 0.0) || !(x0_prime < 1.0))
    throw InvalidArgument("fixed points must lie in (0, 1)");
  const HPReal ratio = m / M;
  OscillationSequences out;
  HPReal x = -log(x0);
  HPReal xp = -log(x0_prime);
  for (int r = 1; r <= r_max; ++r) {
    x *= ratio;
    xp *= ratio;
    out.x.push_back(x);
    out.x_prime.push_back(xp);
    out.q.push_back(exp(-x));
    out.q_prime.push_back(exp(-xp));
  }
  return out;
}

HPReal rectangle_sum(const HPReal& x, const HPReal& M, const HPReal& a, int k, const HPReal& eps) {
  if (!(x > 0.0)) throw InvalidArgument("rectangle_sum needs x > 0");
  const Precision p = x.precision();
  const HPReal ak_minus_one = pow(a.with_precision(p), static_cast<long>(k)) - 1L;
  const HPReal ak = ak_minus_one + 1L;
  const HPReal height_exponent = M.with_precision(p) + 1L;
  HPReal t = x;  // x a^{nk}
  HPReal total(p);
  for (int n = 0; n < 100000; ++n) {
    // Q^{a^{nk} M} (Q^{a^{nk}} - Q^{a^{nk+k}}) = e^{-t(M+1)} (1 - e^{-t(a^k - 1)})
    const HPReal term = exp(-t * height_exponent) * -expm1(-t * ak_minus_one);
    total += term;
    if (term <= eps && t * height_exponent >= 1.0) return total;
    t *= ak;
  }
  throw Error("rectangle_sum did not settle");
}

LacunaryReport oscillation_report(const PeriodicCoefficients& coeffs_in, const HPReal& a_in, int r_max, Precision p) {
  check_base(a_in);
  if (r_max < 1) throw InvalidArgument("r_max must be at least 1");
  const PeriodicCoefficients coeffs(
      [&] {
        std::vector<HPComplex> v;
        for (const auto& c : coeffs_in.values()) v.push_back(c.with_precision(p));
        return v;
      }());
  require_mean_zero(coeffs);
  const int k = static_cast<int>(coeffs.period());
  const HPReal zero_tol = mean_zero_tolerance(p);
  int anchor = -1;
  for (int j = k - 1; j >= 0; --j) {
    if (abs(coeffs.values()[j]) > zero_tol) {
      anchor = j;
      break;
    }
  }
  if (anchor < 1) throw InvalidArgument("coefficient cycle is identically zero");

  const HPReal a = a_in.with_precision(p);
  const HPReal tol = power_of_two(-p.bits / 2, p);
  const HPReal eps = tol;

  std::vector<ResidueAnalysis> per_residue;
  std::vector<OscillationSequences> sequences;
  for (int j = 0; j < anchor; ++j) {
    const Slopes sl = slopes(a, k, j, anchor);
    const FixedPoints fp = fixed_points(sl.M, sl.m, tol);
    HPReal lower = (pow(fp.x0, sl.m / sl.M) - fp.x0) * pow(fp.x0, sl.m);
    HPReal upper = 1L - fp.x0_prime * (1L - pow(fp.x0_prime, sl.M));
    const bool holds = upper < lower;
    auto seq = oscillation_sequences(fp.x0, fp.x0_prime, sl.M, sl.m, r_max);
    HPReal high_min(1L, p);
    HPReal low_max(p);
    for (int i = 0; i < r_max; ++i) {
      high_min = min(high_min, rectangle_sum(seq.x[i], sl.M, a, k, eps));
      low_max = max(low_max, rectangle_sum(seq.x_prime[i], sl.M, a, k, eps));
    }
    // At r = 1 the bounding rectangle is R_0 itself and the remaining area can
    // sit below the working precision, so compare up to the fixed-point tolerance.
    const bool inner_ok = high_min >= lower - tol && low_max <= upper + tol;
    per_residue.push_back(ResidueAnalysis{j, sl.M, sl.m, sl.x_scale, fp.x0, fp.x0_prime, std::move(lower),
                                          std::move(upper), holds, std::move(high_min), std::move(low_max),
                                          inner_ok});
    sequences.push_back(std::move(seq));
  }

  // Map the sequences of the dominant residue back to the original variable:
  // Q = q^{X_j}, so -log q = -log Q / X_j.
  int best = 0;
  for (int j = 1; j < anchor; ++j)
    if (abs(coeffs.values()[j]) > abs(coeffs.values()[best])) best = j;
  const SeriesSpec spec{coeffs, ExponentialExponent(a)};
  const HPReal& scale = per_residue[best].x_scale;
  auto sample = [&](const HPReal& x_q, int r) {
    const HPReal x = x_q / scale;
    try {
      return LacunarySample{r, x, evaluate_at(spec, x, eps).value};
    } catch (const Error& e) {
      throw EvaluationFailure(std::string("lacunary sample: ") + e.what(), x);
    }
  };
  std::vector<LacunarySample> high, low;
  for (int i = 0; i < r_max; ++i) {
    high.push_back(sample(sequences[best].x[i], i + 1));
    low.push_back(sample(sequences[best].x_prime[i], i + 1));
  }
  HPComplex cluster_high = tail_mean(high, p);
  HPComplex cluster_low = tail_mean(low, p);
  HPReal separation = abs(cluster_high - cluster_low);
  const bool all_hold = std::all_of(per_residue.begin(), per_residue.end(),
                                    [](const ResidueAnalysis& r) { return r.inequality_holds; });
  return LacunaryReport{a,
                        k,
                        anchor,
                        r_max,
                        std::move(per_residue),
                        best,
                        std::move(high),
                        std::move(low),
                        std::move(cluster_high),
                        std::move(cluster_low),
                        std::move(separation),
                        all_hold ? "oscillates" : "inconclusive"};
}

}  // namespace qradial
