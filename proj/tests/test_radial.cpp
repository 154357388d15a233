#include <doctest.h>

#include <random>

#include "qradial/errors.hpp"
#include "qradial/radial.hpp"
#include "qradial/special.hpp"

using namespace qradial;

namespace {

const Precision P(256);

PeriodicCoefficients ints(std::initializer_list<long> c) { return PeriodicCoefficients::from_integers(c, P); }

HPComplex omega() { return HPComplex::root_of_unity(1, 3, P); }

bool near(const HPComplex& a, const HPComplex& b, const HPReal& tol) { return abs(a - b) <= tol; }

HPReal tiny() { return power_of_two(8 - P.bits, P); }

}  // namespace

TEST_CASE("roots of unity reduce") {
  CHECK(RootOfUnity(2, 4) == RootOfUnity(1, 2));
  CHECK(RootOfUnity(0, 5).is_one());
  CHECK(RootOfUnity(-1, 6) == RootOfUnity(5, 6));
  CHECK(RootOfUnity(1, 2) * RootOfUnity(1, 3) == RootOfUnity(5, 6));
  CHECK_THROWS_AS(RootOfUnity(1, 0), InvalidArgument);
}

TEST_CASE("mean") {
  CHECK(mean(ints({1, -1})).is_zero());
  CHECK(abs(mean(PeriodicCoefficients({HPComplex(HPReal(1L, P)), omega(), omega() * omega()}))) <= tiny());
  CHECK(mean(ints({1, 1})).re() == 1.0);
}

TEST_CASE("closed form limit") {
  CHECK(closed_form_limit(ints({1, -1})).re() == 0.5);
  CHECK(closed_form_limit(ints({0, 0, 0})).is_zero());
  const PeriodicCoefficients cubic({HPComplex(HPReal(1L, P)), omega(), omega() * omega()});
  // (2 + omega) / 3: the Abel mean of the partial sums 1, 1 + omega, 0.
  const HPComplex expected = (HPComplex(HPReal(2L, P)) + omega()) / 3L;
  CHECK(near(closed_form_limit(cubic), expected, tiny()));
  // The printed -omega - 2/3 is far from it.
  const HPComplex printed = -omega() - HPComplex(HPReal(Rational(2, 3), P));
  CHECK(abs(closed_form_limit(cubic) - printed) > 0.5);
  try {
    (void)closed_form_limit(ints({1, 1}));
    FAIL("expected NonZeroMean");
  } catch (const NonZeroMean& e) {
    CHECK(e.mean().re() == 1.0);
  }
}

TEST_CASE("property: both forms agree, replication invariance") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> coef(-9, 9);
  for (int trial = 0; trial < 50; ++trial) {
    const int k = 1 + trial % 6;
    std::vector<HPComplex> c;
    HPComplex sum(P);
    for (int j = 0; j + 1 < k; ++j) {
      c.emplace_back(HPReal(static_cast<long>(coef(rng)), P), HPReal(static_cast<long>(coef(rng)), P));
      sum += c.back();
    }
    c.push_back(-sum);
    const PeriodicCoefficients cycle(c);
    const HPComplex limit = closed_form_limit(cycle);
    CHECK(limit == weighted_index_form(cycle));
    for (std::size_t m : {2u, 3u}) CHECK(near(closed_form_limit(cycle.replicated(m)), limit, tiny() * 64L));
  }
}

TEST_CASE("twist") {
  const auto s2 = PolynomialExponent::parse("n^2");
  CHECK(twist(ints({1, -1}), s2, RootOfUnity()) == ints({1, -1}));

  const auto t = twist(ints({1, -1}), s2, RootOfUnity(1, 6));
  REQUIRE(t.period() == 6);
  const HPComplex xi = HPComplex::root_of_unity(1, 6, P);
  const HPComplex xi4 = HPComplex::root_of_unity(4, 6, P);
  const HPComplex one(HPReal(1L, P));
  const std::vector<HPComplex> expected{one, -xi, xi4, one, xi4, -xi};
  for (int n = 0; n < 6; ++n) CHECK(near(t.values()[n], expected[n], tiny()));
  CHECK(near(mean(t), HPComplex(HPReal(P), -HPReal(1L, P) / sqrt(HPReal(3L, P))), tiny()));

  const auto c = twist(ints({1, 1, 1}), PolynomialExponent::parse("n^3"), RootOfUnity(1, 3));
  REQUIRE(c.period() == 3);
  for (int n = 0; n < 3; ++n) CHECK(near(c.values()[n], HPComplex::root_of_unity(n, 3, P), tiny()));

  CHECK_THROWS_AS(twist(ints({1, -1}), PolynomialExponent::parse("1/2*n^2"), RootOfUnity(1, 3)), InvalidArgument);
  // Rational exponents are fine without a twist.
  CHECK(twist(ints({1, -1}), PolynomialExponent::parse("1/2*n^2"), RootOfUnity()) == ints({1, -1}));
}

TEST_CASE("property: twisting is multiplicative over coprime orders") {
  const auto s = PolynomialExponent::parse("2n^3 + n + 4");
  const PeriodicCoefficients c = ints({3, -1, -2});
  for (auto [a, b] : {std::pair{RootOfUnity(1, 2), RootOfUnity(1, 3)}, std::pair{RootOfUnity(2, 5), RootOfUnity(3, 4)}}) {
    const auto twice = twist(twist(c, s, a), s, b);
    const auto once = twist(c, s, a * b);
    REQUIRE(twice.period() == once.period());
    for (std::size_t n = 0; n < once.period(); ++n) CHECK(near(twice.values()[n], once.values()[n], tiny() * 4L));
  }
}

TEST_CASE("classification") {
  using Tag = RadialLimitResult::Tag;
  const auto s2 = PolynomialExponent::parse("n^2");
  auto r = classify_radial_limit({ints({1, -1}), s2}, RootOfUnity());
  CHECK(r.tag == Tag::Converges);
  CHECK(r.value->re() == 0.5);

  r = classify_radial_limit({ints({1, -1}), s2}, RootOfUnity(1, 6));
  CHECK(r.tag == Tag::Diverges);
  CHECK(r.leading_term->exponent == Rational(-1, 2));

  r = classify_radial_limit({ints({1, 1}), s2}, RootOfUnity());
  REQUIRE(r.tag == Tag::Diverges);
  CHECK(near(r.leading_term->coefficient, HPComplex(sqrt(pi(P)) / 2L), tiny()));

  // Cubic: Gamma(1/3) / (3 * 2^{1/3}) for s = 2n^3.
  r = classify_radial_limit({ints({1}), PolynomialExponent::parse("2n^3")}, RootOfUnity());
  const HPReal third(Rational(1, 3), P);
  CHECK(near(r.leading_term->coefficient, HPComplex(gamma_hp(third) / (pow(HPReal(2L, P), third) * 3L)), tiny()));

  const SeriesSpec lac{ints({1, -1}), ExponentialExponent(HPReal(10L, P))};
  r = classify_radial_limit(lac, RootOfUnity());
  CHECK(r.tag == Tag::Oscillates);
  CHECK(r.evidence.has_value());
  CHECK_THROWS_AS(classify_radial_limit(lac, RootOfUnity(1, 3)), InvalidArgument);
}

TEST_CASE("property: converged value depends only on the twisted cycle") {
  const PeriodicCoefficients c = ints({2, -1, 0, -1});
  const char* cubics[] = {"n^3", "n^3 + n", "n^3 + 5n^2 + 2", "n^3 + 7n^2 + 3n + 9"};
  const RootOfUnity xi(1, 2);
  const auto base = classify_radial_limit({c, PolynomialExponent::parse(cubics[0])}, xi);
  for (const char* s : cubics) {
    const auto poly = PolynomialExponent::parse(s);
    const auto r = classify_radial_limit({c, poly}, xi);
    const auto twisted = twist(c, poly, xi);
    if (!has_mean_zero(twisted)) continue;
    CHECK(r.value.has_value());
    CHECK(*r.value == closed_form_limit(twisted));
    if (twisted == base.twisted) CHECK(*r.value == *base.value);
  }
}

TEST_CASE("least squares") {
  // Exact cubic recovered from 6 samples.
  std::vector<std::vector<HPReal>> rows;
  std::vector<HPReal> rhs;
  for (long t = 0; t < 6; ++t) {
    rows.push_back({HPReal(1L, P), HPReal(t, P), HPReal(t * t, P), HPReal(t * t * t, P)});
    rhs.push_back(HPReal(3 - 2 * t + 5 * t * t * t, P));
  }
  const auto fit = least_squares(rows, rhs);
  CHECK(abs(fit.coefficients[0] - 3L) <= tiny() * 1024L);
  CHECK(abs(fit.coefficients[1] + 2L) <= tiny() * 1024L);
  CHECK(abs(fit.coefficients[2]) <= tiny() * 1024L);
  CHECK(abs(fit.coefficients[3] - 5L) <= tiny() * 1024L);

  std::vector<std::vector<HPReal>> dup;
  for (long t = 0; t < 5; ++t) dup.push_back({HPReal(t, P), HPReal(2 * t, P)});
  CHECK_THROWS_AS(least_squares(dup, std::vector<HPReal>(5, HPReal(1L, P))), SingularFit);
  CHECK_THROWS_AS(least_squares({{HPReal(1L, P), HPReal(2L, P)}}, {HPReal(1L, P)}), SingularFit);
}

TEST_CASE("default grids") {
  const auto g = default_grid({ints({1, -1}), PolynomialExponent::parse("n^2")}, RootOfUnity());
  CHECK(g.x_min == HPReal::parse("1e-4", P));
  CHECK(g.x_max == HPReal::parse("1e-2", P));
  CHECK(g.count == 12);
  const auto pts = g.points();
  CHECK(pts.front() == g.x_min);
  CHECK(abs(pts.back() - g.x_max) <= tiny());
  // Quintic: the window slides far below 1e-2.
  const auto q = default_grid({ints({1, -1}), PolynomialExponent::parse("n^5 + 3n^2 + 1")}, RootOfUnity());
  CHECK(q.x_max < 1e-6);
}

TEST_CASE("extrapolation") {
  const auto run = [](const SeriesSpec& spec, const RootOfUnity& xi) {
    return extrapolate_limit(spec, xi, default_grid(spec, xi));
  };
  auto r = run({ints({1, -1}), PolynomialExponent::parse("n^2")}, RootOfUnity());
  CHECK(abs(r.estimate - HPComplex(HPReal(Rational(1, 2), P))) <= 1e-6);
  CHECK(r.error_estimate <= 1e-6);

  r = run({ints({1, 1, 1}), PolynomialExponent::parse("n^3")}, RootOfUnity(1, 3));
  CHECK(abs(r.estimate - (HPComplex(HPReal(2L, P)) + omega()) / 3L) <= 1e-4);

  r = run({ints({1, -1}), PolynomialExponent::parse("3n^5 + n + 7")}, RootOfUnity());
  CHECK(abs(r.estimate - HPComplex(HPReal(Rational(1, 2), P))) <= 1e-4);

  ExtrapolationGrid few{HPReal::parse("1e-3", P), HPReal::parse("1e-2", P), 3};
  CHECK_THROWS_AS(extrapolate_limit({ints({1, -1}), PolynomialExponent::parse("n^2")}, RootOfUnity(), few),
                  SingularFit);
}

TEST_CASE("property: degree independence of the limit") {
  const PeriodicCoefficients c = ints({2, -1, -1});
  const HPComplex limit = closed_form_limit(c);
  for (const char* s : {"n", "n^2", "2n^3+n", "n^5+3n^2+1"}) {
    const SeriesSpec spec{c, PolynomialExponent::parse(s)};
    const auto r = extrapolate_limit(spec, RootOfUnity(), default_grid(spec, RootOfUnity()));
    CHECK_MESSAGE(abs(r.estimate - limit) <= 1e-4, s);
  }
}
