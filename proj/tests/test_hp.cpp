#include <doctest.h>

#include <random>

#include "qradial/errors.hpp"
#include "qradial/hp.hpp"
#include "qradial/polynomial.hpp"
#include "qradial/quadrature.hpp"
#include "qradial/special.hpp"

using namespace qradial;

namespace {

// |a - b| <= tol * max(1, |b|)
bool close(const HPReal& a, const HPReal& b, const HPReal& tol) { return abs(a - b) <= tol * max(HPReal(1L, b.precision()), abs(b)); }

}  // namespace

TEST_CASE("rational parsing is exact") {
  CHECK(parse_rational("1/3") == Rational(1, 3));
  CHECK(parse_rational("-2.5") == Rational(-5, 2));
  CHECK(parse_rational("1e-3") == Rational(1, 1000));
  CHECK(parse_rational("6/4") == Rational(3, 2));
  CHECK_THROWS_AS(parse_rational("1/0"), InvalidArgument);
  CHECK_THROWS_AS(parse_rational("abc"), InvalidArgument);
}

TEST_CASE("HPReal round trip and precision") {
  const Precision p(256);
  const HPReal third = HPReal::parse("1/3", p);
  CHECK(HPReal::parse(third.to_exact_string(), p) == third);
  CHECK(third.precision().bits == 256);
  const HPReal sum = third * 3L;
  CHECK(abs(sum - 1L) <= unit_roundoff(p) * 4L);
  CHECK_THROWS_AS(HPReal::parse("1.2.3", p), InvalidArgument);
}

TEST_CASE("roots of unity are exact at quarter turns") {
  const Precision p(128);
  const HPComplex i = HPComplex::root_of_unity(1, 4, p);
  CHECK(i.re().is_zero());
  CHECK(i.im() == 1.0);
  const HPComplex minus_one = HPComplex::root_of_unity(3, 6, p);
  CHECK(minus_one.re() == -1.0);
  CHECK(minus_one.im().is_zero());
  const HPComplex w = HPComplex::root_of_unity(1, 3, p);
  const HPComplex one = w * w * w;
  CHECK(abs(one - HPComplex(1.0, 0.0, p)) <= unit_roundoff(p) * 16L);
}

TEST_CASE("Bernoulli numbers satisfy the defining recurrence") {
  const auto b = bernoulli_numbers(30);
  REQUIRE(b.size() == 31);
  CHECK(b[0] == 1);
  CHECK(b[1] == Rational(-1, 2));
  CHECK(b[2] == Rational(1, 6));
  CHECK(b[4] == Rational(-1, 30));
  CHECK(b[30] == Rational(BigInt("8615841276005"), BigInt(14322)));
  for (int n = 1; n <= 30; ++n) {
    const auto row = binomial_row(n + 1);
    Rational total = 0;
    for (int k = 0; k <= n; ++k) total += Rational(row[k]) * b[k];
    CHECK(total == 0);
  }
  for (int k = 3; k <= 29; k += 2) CHECK(b[k] == 0);
  CHECK(bernoulli_numbers(0).size() == 1);
}

TEST_CASE("gamma at reference points") {
  const Precision p(256);
  CHECK(gamma_hp(HPReal(1L, p)) == 1.0);
  const HPReal tol = power_of_two(8 - p.bits, p);
  CHECK(close(gamma_hp(HPReal(Rational(1, 2), p)), sqrt(pi(p)), tol));
  // Independent oracle: Gamma(1/3) = int_0^inf t^{-2/3} e^{-t} dt by double-exponential quadrature.
  const Precision qp(160);
  const RealFunction integrand = [](const HPReal& t) { return exp(-t) / pow(t, HPReal(Rational(2, 3), t.precision())); };
  const auto head = tanh_sinh(integrand, HPReal(0L, qp), HPReal(1L, qp), power_of_two(-140, qp));
  const auto rest = exp_sinh(integrand, HPReal(1L, qp), power_of_two(-140, qp));
  const HPReal by_quadrature = head.value + rest.value;
  CHECK(close(gamma_hp(HPReal(Rational(1, 3), qp)), by_quadrature, power_of_two(-120, qp)));
  // Frozen oracle: mpmath quad of 3 exp(-u^3) on [0, inf), 80 digits.
  CHECK(close(by_quadrature, HPReal::parse("2.6789385347077476336556929409746776441286893779573011009504283275904176101677438", qp),
              power_of_two(-120, qp)));
  CHECK_THROWS_AS(gamma_hp(HPReal(0L, p)), InvalidArgument);
  CHECK_THROWS_AS(gamma_hp(HPReal(-1.5, p)), InvalidArgument);
}

TEST_CASE("gamma recurrence and precision doubling") {
  const Precision p(256);
  std::mt19937_64 rng(20240607);
  std::uniform_real_distribution<double> dist(1e-3, 5.0);
  for (int i = 0; i < 20; ++i) {
    const HPReal x(dist(rng), p);
    const HPReal g = gamma_hp(x);
    const HPReal g1 = gamma_hp(x + 1L);
    CHECK(abs(g1 - x * g) / g1 <= power_of_two(12 - p.bits, p));
    const HPReal wide = gamma_hp(x.with_precision(Precision(2 * p.bits)));
    CHECK(abs(wide - g) / abs(wide) <= power_of_two(8 - p.bits, Precision(2 * p.bits)));
  }
}

TEST_CASE("zeta(2m) matches the Bernoulli closed form") {
  const Precision p(256);
  const auto b = bernoulli_numbers(40);
  for (int m = 1; m <= 20; ++m) {
    // zeta(2m) = (-1)^{m+1} B_{2m} (2 pi)^{2m} / (2 (2m)!), evaluated at doubled
    // precision since (2 pi)^{2m} amplifies the rounding of pi by 2m.
    const Precision wide(2 * p.bits);
    HPReal closed = HPReal(b[2 * m], wide) * pow(pi(wide) * 2L, 2L * m) / (HPReal(factorial(2 * m), wide) * 2L);
    if (m % 2 == 0) closed = -closed;
    CHECK(close(zeta_even(m, p), closed, power_of_two(4 - p.bits, p)));
  }
  CHECK_THROWS_AS(zeta_even(0, p), InvalidArgument);
}

TEST_CASE("remainder prefactor") {
  const Precision p(128);
  const HPReal tol = power_of_two(-100, p);
  CHECK(close(remainder_prefactor(1, p), HPReal::parse("0.133993925154502219055273064938197152785", p), tol));
  CHECK(close(remainder_prefactor(2, p), HPReal::parse("0.00267213667072443078753298679727872565662", p), tol));
  HPReal previous = remainder_prefactor(2, p);
  for (int m = 3; m <= 12; ++m) {
    const HPReal current = remainder_prefactor(m, p);
    CHECK(current < previous);
    previous = current;
  }
  CHECK_THROWS_AS(remainder_prefactor(0, p), InvalidArgument);
}

TEST_CASE("polynomial arithmetic") {
  const auto s = RationalPolynomial::parse("3t^5 + t + 7");
  CHECK(s.degree() == 5);
  CHECK(s(Rational(2)) == 3 * 32 + 2 + 7);
  CHECK(RationalPolynomial::parse("1/2*n^2 - n") == RationalPolynomial({Rational(0), Rational(-1), Rational(1, 2)}));
  CHECK(RationalPolynomial::parse("2t^3+t")(Rational(2)) == 18);
  CHECK(s.derivative() == RationalPolynomial::parse("15t^4 + 1"));
  CHECK(RationalPolynomial::parse("t^2").forward_difference() == RationalPolynomial::parse("2t+1"));
  CHECK(RationalPolynomial::parse("t^2").compose_affine(3, 1) == RationalPolynomial::parse("9t^2+6t+1"));
  const std::vector<Rational> values{7, 11, 103, 745};
  const auto interp = RationalPolynomial::interpolate(values);
  for (int i = 0; i < 4; ++i) CHECK(interp(Rational(i)) == values[i]);
  CHECK(RationalPolynomial::parse("t^2 - 4").root_bound() > 2);
  CHECK_THROWS_AS(RationalPolynomial::parse("t^^2"), InvalidArgument);
  CHECK(RationalPolynomial::parse("0").degree() == -1);
}

TEST_CASE("quadrature on elementary integrals") {
  const Precision p(192);
  const auto r = tanh_sinh([](const HPReal& t) { return sqrt(t); }, HPReal(0L, p), HPReal(1L, p), power_of_two(-150, p));
  CHECK(abs(r.value - HPReal(Rational(2, 3), p)) <= power_of_two(-140, p));
  const auto e = exp_sinh([](const HPReal& t) { return exp(-t * t); }, HPReal(0L, p), power_of_two(-150, p));
  CHECK(abs(e.value - sqrt(pi(p)) / 2L) <= power_of_two(-140, p));
}
