#include "qradial/series.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "qradial/errors.hpp"

namespace qradial {

namespace {

constexpr long kGuardBits = 64;
// The multiplicative recurrence for q^{s(n)} drifts by a few ulps per step;
// recompute every entry of the difference table this often.
constexpr std::uint64_t kResyncInterval = 1024;

HPReal infinity(Precision p) {
  HPReal r(p);
  mpfr_set_inf(r.raw(), 1);
  return r;
}

// exp(r * L) for real or complex L.
HPReal scaled_exp(const Rational& r, const HPReal& L) { return exp(HPReal(r, L.precision()) * L); }
HPComplex scaled_exp(const Rational& r, const HPComplex& L) {
  const HPReal rr(r, L.precision());
  return exp(HPComplex(rr * L.re(), rr * L.im()));
}
HPReal scaled_exp(const HPReal& r, const HPReal& L) { return exp(r * L); }
HPComplex scaled_exp(const HPReal& r, const HPComplex& L) { return exp(HPComplex(r * L.re(), r * L.im())); }

HPReal magnitude(const HPReal& z) { return abs(z); }
HPReal magnitude(const HPComplex& z) { return abs(z); }

HPComplex as_complex(const HPReal& z) { return HPComplex(z); }
HPComplex as_complex(const HPComplex& z) { return z; }

// |q|^{delta} < 1 bound denominators: 1 - exp(delta * Re L) = -expm1(delta * Re L).
HPReal one_minus_power(const HPReal& delta, const HPReal& re_log_q) { return -expm1(delta * re_log_q); }

HPComplex combine(const PeriodicCoefficients& c, const std::vector<HPComplex>& per_residue, Precision wp) {
  HPComplex value(wp);
  for (std::size_t j = 0; j < per_residue.size(); ++j) value += c.values()[j].with_precision(wp) * per_residue[j];
  return value;
}

// Polynomial exponent. `L` = log q (real or complex), `re_log_q` = log|q| < 0.
template <class Scalar>
Evaluation sum_polynomial(const PeriodicCoefficients& coeffs, const PolynomialExponent& s, const Scalar& L,
                          const HPReal& re_log_q, const HPReal& eps, const EvaluationOptions& options,
                          Precision out) {
  const Precision wp = L.precision();
  const int d = s.degree();
  const std::size_t k = coeffs.period();

  // Delta^i s as polynomials, so the table can be rebuilt exactly at any n.
  std::vector<RationalPolynomial> differences{s.polynomial()};
  for (int i = 1; i <= d; ++i) differences.push_back(differences.back().forward_difference());

  std::vector<Scalar> factors;  // factors[i] = q^{Delta^i s(n)}
  factors.reserve(d + 1);
  auto resync = [&](std::uint64_t n) {
    factors.clear();
    const Rational nn(static_cast<unsigned long>(n));
    for (int i = 0; i <= d; ++i) factors.push_back(scaled_exp(differences[i](nn), L));
  };

  const HPReal max_c = coeffs.max_abs().with_precision(wp);
  const std::uint64_t n0 = s.increasing_from();
  const HPReal first_gap_den = one_minus_power(HPReal(differences[1](Rational(static_cast<unsigned long>(n0))), wp), re_log_q);

  std::vector<Scalar> accumulators(k, Scalar(wp));
  HPReal abs_sum(wp);
  HPReal tail = infinity(wp);
  std::uint64_t n = 0;
  for (;; ++n) {
    if (n % kResyncInterval == 0) resync(n);
    const Scalar& term = factors[0];
    if (n >= n0 + 1) {
      // Candidate truncation after index N = n - 1 >= n0: every later gap is at
      // least Delta s(n0), and at least Delta s(n) once we look closer.
      const HPReal mag = magnitude(term);
      HPReal bound = max_c * mag / first_gap_den;
      if (bound <= eps) {
        const HPReal gap(differences[1](Rational(static_cast<unsigned long>(n))), wp);
        tail = min(bound, max_c * mag / one_minus_power(gap, re_log_q));
        break;
      }
      if (n >= options.term_budget)
        throw BudgetExceeded("term budget of " + std::to_string(options.term_budget) +
                                 " exhausted before the tail bound reached eps",
                             bound.with_precision(out), n);
    } else if (n >= options.term_budget) {
      throw BudgetExceeded("term budget exhausted before the exponent became increasing", infinity(out), n);
    }
    accumulators[n % k] += term;
    abs_sum += magnitude(term);
    for (int i = 0; i < d; ++i) factors[i] *= factors[i + 1];
  }

  std::vector<HPComplex> per_residue;
  per_residue.reserve(k);
  for (auto& a : accumulators) per_residue.push_back(as_complex(a));
  HPComplex value = combine(coeffs, per_residue, wp);
  // Each term carries at most (d + 2) * kResyncInterval relative roundings from
  // the recurrence; accumulation adds at most n more.
  const HPReal per_term_ulps(static_cast<unsigned long>((d + 2) * kResyncInterval + n + 8), wp);
  HPReal rounding = max_c * abs_sum * per_term_ulps * unit_roundoff(wp) * 4L;
  rounding += abs(value) * unit_roundoff(out) * 2L;
  return {value.with_precision(out), tail.with_precision(out), rounding.with_precision(out), n};
}

template <class Scalar>
Evaluation sum_exponential(const PeriodicCoefficients& coeffs, const ExponentialExponent& e, const Scalar& L,
                           const HPReal& re_log_q, const HPReal& eps, const EvaluationOptions& options,
                           Precision out) {
  const Precision wp = L.precision();
  const HPReal a = e.base().with_precision(wp);
  const HPReal a_minus_one = a - 1L;
  const std::size_t k = coeffs.period();
  const HPReal max_c = coeffs.max_abs().with_precision(wp);

  std::vector<Scalar> accumulators(k, Scalar(wp));
  HPReal abs_sum(wp);
  HPReal tail = infinity(wp);
  HPReal power(1L, wp);  // a^n
  std::uint64_t n = 0;
  for (;; ++n) {
    if (n % 64 == 0) power = pow(a, static_cast<long>(n));
    const Scalar term = scaled_exp(power, L);
    if (n >= 1) {
      // Tail after N = n - 1: gaps a^m (a - 1) grow with m, so the smallest is at m = n.
      const HPReal mag = magnitude(term);
      const HPReal bound = max_c * mag / one_minus_power(power * a_minus_one, re_log_q);
      if (bound <= eps) {
        tail = bound;
        break;
      }
      if (n >= options.term_budget)
        throw BudgetExceeded("term budget exhausted before the tail bound reached eps", bound.with_precision(out), n);
    }
    accumulators[n % k] += term;
    abs_sum += magnitude(term);
    power *= a;
  }

  std::vector<HPComplex> per_residue;
  for (auto& acc : accumulators) per_residue.push_back(as_complex(acc));
  HPComplex value = combine(coeffs, per_residue, wp);
  HPReal rounding = max_c * abs_sum * HPReal(static_cast<unsigned long>(n + 200), wp) * unit_roundoff(wp) * 4L;
  rounding += abs(value) * unit_roundoff(out) * 2L;
  return {value.with_precision(out), tail.with_precision(out), rounding.with_precision(out), n};
}

template <class Scalar>
Evaluation dispatch(const SeriesSpec& spec, const Scalar& L, const HPReal& re_log_q, const HPReal& eps,
                    const EvaluationOptions& options, Precision out) {
  if (spec.has_polynomial_exponent())
    return sum_polynomial(spec.coefficients, spec.polynomial(), L, re_log_q, eps, options, out);
  return sum_exponential(spec.coefficients, spec.exponential(), L, re_log_q, eps, options, out);
}

void check_eps(const HPReal& eps) {
  if (!(eps > 0.0) || !eps.is_finite()) throw InvalidArgument("eps must be positive and finite");
}

// q = 0: only terms with s(n) = 0 survive; s(n) < 0 is a pole.
Evaluation evaluate_at_zero(const SeriesSpec& spec, Precision out) {
  HPComplex value(out);
  if (spec.has_polynomial_exponent()) {
    const auto& s = spec.polynomial();
    const std::uint64_t last = s.increasing_from() + 1;
    for (std::uint64_t n = 0; n <= last; ++n) {
      const Rational v = s(n);
      if (v < 0) throw InvalidArgument("q = 0 with s(" + std::to_string(n) + ") < 0");
      if (v == 0) value += spec.coefficients[n].with_precision(out);
    }
  }
  return {value, HPReal(out), HPReal(out), 0};
}

}  // namespace

PeriodicCoefficients::PeriodicCoefficients(std::vector<HPComplex> values) : values_(std::move(values)) {
  if (values_.empty()) throw InvalidArgument("coefficient period must be at least 1");
  const Precision p = precision();
  for (auto& v : values_) v = v.with_precision(p);
}

PeriodicCoefficients PeriodicCoefficients::from_integers(std::initializer_list<long> values, Precision p) {
  std::vector<HPComplex> out;
  for (long v : values) out.emplace_back(HPReal(v, p), HPReal(p));
  return PeriodicCoefficients(std::move(out));
}

Precision PeriodicCoefficients::precision() const {
  Precision p(2);
  for (const auto& v : values_) p = max(p, v.precision());
  return p;
}

HPComplex PeriodicCoefficients::sum() const {
  HPComplex total(precision());
  for (const auto& v : values_) total += v;
  return total;
}

HPComplex PeriodicCoefficients::mean() const { return sum() / static_cast<long>(values_.size()); }

HPReal PeriodicCoefficients::max_abs() const {
  HPReal best(precision());
  for (const auto& v : values_) best = max(best, abs(v));
  return best;
}

PeriodicCoefficients PeriodicCoefficients::replicated(std::size_t times) const {
  if (times == 0) throw InvalidArgument("replication count must be positive");
  std::vector<HPComplex> out;
  out.reserve(values_.size() * times);
  for (std::size_t r = 0; r < times; ++r) out.insert(out.end(), values_.begin(), values_.end());
  return PeriodicCoefficients(std::move(out));
}

PolynomialExponent::PolynomialExponent(RationalPolynomial polynomial) : poly_(std::move(polynomial)) {
  if (poly_.degree() < 1) throw InvalidArgument("exponent polynomial must have positive degree");
  if (poly_.leading() <= 0) throw InvalidArgument("exponent polynomial must have a positive leading coefficient");
  // Beyond the largest real root of s'' the increments Delta s(n) are increasing;
  // from there walk forward to the first positive increment.
  std::uint64_t start = 0;
  if (poly_.degree() >= 2) {
    const RationalPolynomial second = poly_.derivative().derivative();
    if (second.degree() >= 1) {
      const Rational bound = second.root_bound();
      BigInt ceiling;
      mpz_cdiv_q(ceiling.get_mpz_t(), bound.get_num_mpz_t(), bound.get_den_mpz_t());
      if (!ceiling.fits_ulong_p()) throw InvalidArgument("exponent polynomial coefficients are too large");
      start = ceiling.get_ui();
    }
  }
  const RationalPolynomial delta = poly_.forward_difference();
  while (delta(Rational(static_cast<unsigned long>(start))) <= 0) ++start;
  increasing_from_ = start;
}

Rational PolynomialExponent::operator()(std::uint64_t n) const { return poly_(Rational(static_cast<unsigned long>(n))); }

ExponentialExponent::ExponentialExponent(HPReal base) : base_(std::move(base)) {
  if (!(base_ > 1.0) || !base_.is_finite()) throw InvalidArgument("exponential base must be a finite real > 1");
}

const PolynomialExponent& SeriesSpec::polynomial() const {
  if (const auto* p = std::get_if<PolynomialExponent>(&exponent)) return *p;
  throw InvalidArgument("operation requires a polynomial exponent");
}

const ExponentialExponent& SeriesSpec::exponential() const {
  if (const auto* e = std::get_if<ExponentialExponent>(&exponent)) return *e;
  throw InvalidArgument("operation requires an exponential exponent");
}

std::variant<Rational, HPReal> exponent_value(const Exponent& exponent, std::uint64_t n, Precision p) {
  if (const auto* s = std::get_if<PolynomialExponent>(&exponent)) return (*s)(n);
  return pow(std::get<ExponentialExponent>(exponent).base().with_precision(p), static_cast<long>(n));
}

Evaluation evaluate(const SeriesSpec& spec, const HPComplex& q, const HPReal& eps, const EvaluationOptions& options) {
  check_eps(eps);
  const Precision out = max(q.precision(), spec.coefficients.precision());
  const Precision wp = out.guarded(kGuardBits);
  const HPComplex qw = q.with_precision(wp);
  const HPReal modulus = abs(qw);
  if (!(modulus < 1.0)) throw InvalidArgument("evaluate requires |q| < 1");
  if (modulus.is_zero()) return evaluate_at_zero(spec, out);
  const HPReal re_log_q = log(modulus);
  if (qw.is_real() && qw.re() > 0.0) return dispatch(spec, re_log_q, re_log_q, eps, options, out);
  return dispatch(spec, log(qw), re_log_q, eps, options, out);
}

Evaluation evaluate_at(const SeriesSpec& spec, const HPReal& x, const HPReal& eps, const EvaluationOptions& options) {
  check_eps(eps);
  if (!(x > 0.0) || !x.is_finite()) throw InvalidArgument("evaluate_at requires finite x > 0");
  const Precision out = max(x.precision(), spec.coefficients.precision());
  const Precision wp = out.guarded(kGuardBits);
  const HPReal L = -x.with_precision(wp);
  return dispatch(spec, L, L, eps, options, out);
}

HPComplex partial_sum(const SeriesSpec& spec, const HPComplex& q, std::uint64_t last) {
  const Precision p = max(q.precision(), spec.coefficients.precision());
  HPComplex total(p);
  if (q.is_zero()) {
    for (std::uint64_t n = 0; n <= last; ++n) {
      if (spec.has_polynomial_exponent()) {
        const Rational v = spec.polynomial()(n);
        if (v < 0) throw InvalidArgument("q = 0 with s(" + std::to_string(n) + ") < 0");
        if (v == 0) total += spec.coefficients[n];
      }
    }
    return total;
  }
  const HPComplex L = log(q.with_precision(p));
  for (std::uint64_t n = 0; n <= last; ++n) {
    const auto s = exponent_value(spec.exponent, n, p);
    const HPComplex power = std::holds_alternative<Rational>(s) ? scaled_exp(std::get<Rational>(s), L)
                                                                : scaled_exp(std::get<HPReal>(s), L);
    total += spec.coefficients[n] * power;
  }
  return total;
}

}  // namespace qradial
