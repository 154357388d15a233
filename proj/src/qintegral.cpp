#include "qradial/qintegral.hpp"

#include <algorithm>
#include <cmath>

#include "qradial/errors.hpp"
#include "qradial/quadrature.hpp"

namespace qradial {

namespace {

void check_q(const HPReal& q) {
  if (!(q > 0.0) || !(q < 1.0)) throw InvalidArgument("q must lie in (0, 1)");
}

Rational ceil_q(const Rational& r) {
  BigInt out;
  mpz_cdiv_q(out.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return Rational(out);
}

// Largest real root bound of p, or 0 for a nonzero constant.
Rational roots_below(const RationalPolynomial& p) { return p.degree() >= 1 ? p.root_bound() : Rational(0); }

}  // namespace

HPReal q_integral_power(const HPReal& c, const HPReal& q) {
  if (!(c > 0.0) || !c.is_finite()) throw InvalidArgument("q_integral_power needs c > 0");
  check_q(q);
  const Precision p = max(c.precision(), q.precision());
  // 1 - q^{c+1} = -expm1((c+1) log q) keeps full relative accuracy near q = 1.
  const HPReal qp = q.with_precision(p);
  return (1L - qp) / -expm1((c.with_precision(p) + 1L) * log(qp));
}

LemmaPair::LemmaPair(PolynomialExponent x_in, PolynomialExponent y_in) : x(std::move(x_in)), y(std::move(y_in)) {
  if (x.degree() != y.degree())
    throw InvalidArgument("lemma pair needs x and y of the same degree (got " + std::to_string(x.degree()) + " and " +
                          std::to_string(y.degree()) + ")");
  c = y.leading() / x.leading();
  Rational bound = 0;
  for (const RationalPolynomial* poly : {&x.polynomial(), &y.polynomial()}) {
    bound = std::max(bound, roots_below(*poly));
    bound = std::max(bound, roots_below(poly->derivative()));
  }
  n_ = ceil_q(bound).get_num().get_ui();
}

LemmaPair decomposition_pair(const PolynomialExponent& s, int k, int j) {
  if (k < 2) throw InvalidArgument("decomposition needs period k >= 2");
  if (j < 0 || j > k - 2) throw InvalidArgument("decomposition residue j must lie in 0..k-2");
  const RationalPolynomial& poly = s.polynomial();
  const int d = poly.degree();
  // x has degree d, so d + 1 samples of the partial sums determine it.
  std::vector<Rational> xs;
  Rational acc = 0;
  for (int n = 0; n <= d + 1; ++n) {
    xs.push_back(acc);
    acc += poly(Rational(n * k + k - 1)) - poly(Rational(n * k + j));
  }
  RationalPolynomial x = RationalPolynomial::interpolate(xs);
  RationalPolynomial y = poly.compose_affine(Rational(k), Rational(j)) - x;
  return {PolynomialExponent(std::move(x)), PolynomialExponent(std::move(y))};
}

HPReal rectangle_area(const LemmaPair& pair, const HPReal& q, std::uint64_t n) {
  check_q(q);
  const Precision p = q.precision();
  const HPReal xi = -log(q);
  const HPReal xn(pair.x(n), p);
  const HPReal xn1(pair.x(n + 1), p);
  const HPReal yn(pair.y(n), p);
  // q^{y} (q^{x(n)} - q^{x(n+1)}) = e^{-xi (y + x(n))} (1 - e^{-xi (x(n+1) - x(n))})
  return exp(-xi * (yn + xn)) * -expm1(-xi * (xn1 - xn));
}

LemmaSum lemma_sum(const LemmaPair& pair, const HPReal& q, const HPReal& eps) {
  check_q(q);
  if (!(eps > 0.0)) throw InvalidArgument("eps must be positive");
  const Precision p = q.precision();
  const HPReal xi_p = -log(q);
  // The two sums are each about xi^{-1/d}, their difference O(1).
  const long lost = std::max(0L, static_cast<long>(std::ceil(-std::log2(xi_p.to_double()))));
  const Precision wp = p.guarded(32 + lost);
  const HPReal qw = q.with_precision(wp);
  const HPReal xi = -log(qw);

  const RationalPolynomial& X = pair.x.polynomial();
  const RationalPolynomial& Y = pair.y.polynomial();
  const PeriodicCoefficients ones = PeriodicCoefficients::from_integers({1}, wp);
  const SeriesSpec upper_corners{ones, PolynomialExponent(X + Y)};
  const SeriesSpec lower_corners{ones, PolynomialExponent(Y + X.compose_affine(Rational(1), Rational(1)))};
  const HPReal half_eps = eps.with_precision(wp) / 4;
  const Evaluation a = evaluate_at(upper_corners, xi, half_eps);
  const Evaluation b = evaluate_at(lower_corners, xi, half_eps);
  HPReal sum = a.value.re() - b.value.re();
  HPReal error = a.tail_bound + b.tail_bound + a.rounding_bound + b.rounding_bound;

  const std::uint64_t N = pair.increasing_from();
  HPReal head(wp);
  for (std::uint64_t n = 0; n <= N; ++n) head += rectangle_area(pair, qw, n);
  HPReal tail = sum - head;

  // t = N + 1 + L u, L the decay scale of e^{-xi (x + y)}.
  const int d = X.degree();
  const HPReal start(static_cast<unsigned long>(N + 1), wp);
  const HPReal L = max(HPReal(1L, wp), pow(xi * HPReal(pair.x.leading() + pair.y.leading(), wp),
                                            HPReal(ratio(-1, d), wp)));
  const RationalPolynomial dX = X.derivative();
  const RationalPolynomial Yshift = Y.compose_affine(Rational(1), Rational(-1));
  auto integrand = [&](const RationalPolynomial& ycurve) {
    return RealFunction([&, ycurve](const HPReal& u) {
      const HPReal t = start + L * u;
      return L * xi * dX(t) * exp(-xi * (X(t) + ycurve(t)));
    });
  };
  const HPReal tol = eps.with_precision(wp) / 10;
  const QuadratureResult lo = exp_sinh(integrand(Y), HPReal(wp), tol, 14);
  const QuadratureResult hi = exp_sinh(integrand(Yshift), HPReal(wp), tol, 14);

  return LemmaSum{sum.with_precision(p),
                  tail.with_precision(p),
                  lo.value.with_precision(p),
                  hi.value.with_precision(p),
                  N,
                  error.with_precision(p),
                  max(lo.error_estimate, hi.error_estimate).with_precision(p),
                  std::max(a.terms_used, b.terms_used)};
}

Rational lemma_limit(const LemmaPair& pair) { return Rational(1) / (Rational(1) + pair.c); }

}  // namespace qradial
