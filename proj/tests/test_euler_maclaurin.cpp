#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>

#include "qradial/errors.hpp"
#include "qradial/euler_maclaurin.hpp"
#include "qradial/radial.hpp"
#include "qradial/special.hpp"

using namespace qradial;

namespace {

const Precision P(256);

PeriodicCoefficients ints(std::initializer_list<long> c) { return PeriodicCoefficients::from_integers(c, P); }

HPReal num(const char* text) { return HPReal::parse(text, P); }

HPReal tiny() { return power_of_two(16 - P.bits, P); }

// d^k/dt^k e^{lambda s} by the product rule on lambda^r prod_i s^{(c_i)}, then
// expanded into polynomials. Independent of the (r, e) recurrence.
std::map<std::pair<int, int>, Rational> brute_force(const RationalPolynomial& s, int K) {
  using Key = std::pair<int, std::vector<int>>;
  std::map<Key, Rational> cur{{{0, {}}, Rational(1)}};
  for (int k = 0; k < K; ++k) {
    std::map<Key, Rational> next;
    for (const auto& [key, c] : cur) {
      const auto& [r, orders] = key;
      for (std::size_t i = 0; i < orders.size(); ++i) {
        auto o = orders;
        ++o[i];
        std::sort(o.begin(), o.end());
        next[{r, o}] += c;
      }
      auto o = orders;
      o.push_back(1);
      std::sort(o.begin(), o.end());
      next[{r + 1, o}] += c;
    }
    cur = std::move(next);
  }
  std::map<std::pair<int, int>, Rational> out;
  for (const auto& [key, c] : cur) {
    RationalPolynomial prod{1};
    for (int o : key.second) {
      RationalPolynomial deriv = s;
      for (int i = 0; i < o; ++i) deriv = deriv.derivative();
      prod = prod * deriv;
    }
    for (int e = 0; e <= prod.degree(); ++e) out[{key.first, e}] += c * prod.coefficient(e);
  }
  std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
  return out;
}

RationalPolynomial random_polynomial(std::mt19937_64& rng, int d) {
  std::uniform_int_distribution<int> coef(-5, 5);
  std::uniform_int_distribution<int> lead(1, 4);
  std::vector<Rational> c;
  for (int i = 0; i < d; ++i) c.emplace_back(coef(rng), lead(rng));
  c.emplace_back(lead(rng));
  return RationalPolynomial(c);
}

}  // namespace

TEST_CASE("derivative polynomials match the product rule") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 12; ++trial) {
    const int d = 1 + trial % 4;
    const PolynomialExponent s(random_polynomial(rng, d));
    const auto P6 = derivative_polynomials(s, 6);
    REQUIRE(P6.size() == 7);
    for (int k = 0; k <= 6; ++k) {
      CAPTURE(k);
      CHECK(P6[k].order == k);
      CHECK(P6[k].terms == brute_force(s.polynomial(), k));
    }
  }
}

TEST_CASE("derivative polynomial slices vanish beyond r d") {
  std::mt19937_64 rng(5);
  for (int d = 1; d <= 4; ++d) {
    const PolynomialExponent s(random_polynomial(rng, d));
    const auto Pk = derivative_polynomials(s, 10);
    for (int k = 1; k <= 10; ++k) {
      for (int r = 0; r <= k; ++r) {
        CAPTURE(d);
        CAPTURE(k);
        CAPTURE(r);
        const RationalPolynomial sl = Pk[k].slice(r);
        if (k > r * d) CHECK(sl.is_zero());
        // t-degree of a nonzero slice is at most r d - k.
        if (!sl.is_zero()) CHECK(sl.degree() <= r * d - k);
      }
    }
  }
}

TEST_CASE("derivative polynomial of t^2 evaluates") {
  const auto Pk = derivative_polynomials(PolynomialExponent::parse("t^2"), 2);
  // d^2/dt^2 e^{lambda t^2} = (2 lambda + 4 lambda^2 t^2) e^{lambda t^2}
  CHECK(Pk[2](Rational(3), Rational(2)) == Rational(6 + 4 * 9 * 4));
  CHECK(Pk[2](HPReal(3L, P), HPReal(2L, P)) == 150.0);
}

TEST_CASE("integral expansion") {
  SUBCASE("t^2 + t through x^0") {
    const auto e = integral_expansion(PolynomialExponent::parse("t^2 + t"), 1, P);
    REQUIRE(e.terms.size() == 2);
    CHECK(e.terms[0].lattice == -1);
    CHECK(abs(e.terms[0].coefficient.re() - sqrt(pi(P)) / 2) <= tiny());
    CHECK(e.terms[0].exact->gamma.at(1) == Rational(1, 2));
    CHECK(e.terms[1].lattice == 0);
    CHECK(e.terms[1].coefficient.re() == -0.5);
    CHECK(e.remainder_order == 1);
  }
  SUBCASE("linear exponent is e^{-a_0 x} / (a_1 x)") {
    const auto e = integral_expansion(PolynomialExponent::parse("2t + 3"), 4, P);
    // 1/(2x) (1 - 3x + 9x^2/2 - 9x^3/2 + 27x^4/8)
    const Rational expect[] = {Rational(1, 2), Rational(-3, 2), Rational(9, 4), Rational(-9, 4), Rational(27, 16)};
    for (int l = -1; l <= 3; ++l) {
      CAPTURE(l);
      CHECK(e.find(l)->exact->rational == expect[l + 1]);
      CHECK(e.find(l)->exact->gamma.empty());
    }
  }
  SUBCASE("2t^3 + t against quadrature") {
    // mpmath quad of int_0^inf exp(-x(2t^3 + t)) dt
    const auto e = integral_expansion(PolynomialExponent::parse("2t^3 + t"), 12, P);
    const HPReal x4 = num("1e-4");
    const HPReal x3 = num("1e-3");
    CHECK(abs(e(x4).re() - num("15.256544969430403323548999407369762168397219667575")) <= 1e-20);
    CHECK(abs(e(x3).re() - num("7.0592315221735743929302426728729520401830050338908")) <= 1e-16);
  }
}

TEST_CASE("boundary terms") {
  SUBCASE("s = t, m = 2") {
    const auto e = boundary_terms(PolynomialExponent::parse("t"), 2, 1, P);
    REQUIRE(e.terms.size() == 2);
    CHECK(e.terms[0].exact->rational == Rational(1, 2));
    CHECK(e.terms[1].exact->rational == Rational(1, 12));
  }
  SUBCASE("constant term shifts by e^{-s(0) x}") {
    const auto e = boundary_terms(PolynomialExponent::parse("t^2 + 2"), 1, 2, P);
    // 1/2 e^{-2x} on the lattice {0, 2, 4}
    CHECK(e.find(0)->exact->rational == Rational(1, 2));
    CHECK(e.find(2)->exact->rational == Rational(-1));
    CHECK(e.find(4)->exact->rational == Rational(1));
    CHECK(e.find(1) == nullptr);
  }
}

TEST_CASE("series expansion of the alternating geometric series") {
  // 1/(1 + e^{-x}) = 1/2 + x/4 - x^3/48 + ...
  const auto e = series_expansion({ints({1, -1}), PolynomialExponent::parse("n")}, 3, 3, P);
  REQUIRE(e.terms.size() == 4);
  const Rational expect[] = {Rational(1, 2), Rational(1, 4), Rational(0), Rational(-1, 48)};
  for (int l = 0; l <= 3; ++l) {
    CAPTURE(l);
    CHECK(e.terms[l].lattice == l);
    CHECK(e.terms[l].exact->rational == expect[l]);
    CHECK(e.terms[l].exact->gamma.empty());
  }
  CHECK(e.remainder_order == 4);
  REQUIRE(e.cancelled_leading);
  CHECK(e.cancelled_leading->is_zero());
}

TEST_CASE("theta expansion is sqrt(pi)/2 x^{-1/2} + 1/2 to all retained orders") {
  const auto e = series_expansion({ints({1, 1}), PolynomialExponent::parse("n^2")}, kDefaultEulerDepth,
                                  default_expansion_order(2), P);
  CHECK(e.order == 6);
  CHECK(e.remainder_order == 7);
  CHECK(!e.cancelled_leading);
  for (const auto& t : e.terms) {
    CAPTURE(t.lattice);
    if (t.lattice == -1) {
      CHECK(abs(t.coefficient.re() - sqrt(pi(P)) / 2) <= tiny());
    } else if (t.lattice == 0) {
      CHECK(t.exact->rational == Rational(1, 2));
    } else {
      CHECK(t.exact->is_zero());
      CHECK(t.coefficient.is_zero());
    }
  }
}

TEST_CASE("constant term equals the closed-form limit") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> coef(-6, 6);
  for (int trial = 0; trial < 20; ++trial) {
    const int k = 2 + trial % 4;
    std::vector<long> c;
    long total = 0;
    for (int i = 0; i + 1 < k; ++i) {
      c.push_back(coef(rng));
      total += c.back();
    }
    c.push_back(-total);
    std::vector<HPComplex> values;
    for (long v : c) values.emplace_back(HPReal(v, P));
    const PeriodicCoefficients C(values);
    const PolynomialExponent s(random_polynomial(rng, 1 + trial % 3));
    CAPTURE(s.polynomial().to_string());
    const auto e = series_expansion({C, s}, 3, 3, P);
    CHECK(e.find(-1) == nullptr);
    CHECK(e.find(0)->exact->gamma.empty());
    CHECK(abs(e.coefficient(0, P) - closed_form_limit(C)) <= tiny());
  }
}

TEST_CASE("leading terms cancel for a complex mean-zero cycle") {
  const HPComplex one(HPReal(1L, P));
  const HPComplex w = HPComplex::root_of_unity(1, 3, P);
  const PeriodicCoefficients C({one, w, w * w});
  const auto e = series_expansion({C, PolynomialExponent::parse("2n^3 + n")}, 4, 8, P);
  REQUIRE(e.cancelled_leading);
  CHECK(*e.cancelled_leading <= 1e-20);
  CHECK(e.find(-1) == nullptr);
  CHECK(!e.terms.front().exact);
  CHECK(abs(e.coefficient(0, P) - closed_form_limit(C)) <= 1e-60);
}

TEST_CASE("remainder estimate") {
  SUBCASE("s = t: prefactor(m) x^{2m-1}") {
    const HPReal x = num("0.1");
    const HPReal r = remainder_bound(PolynomialExponent::parse("t"), 1, x);
    CHECK(abs(r - remainder_prefactor(1, P) * x) <= 1e-60);
    CHECK(abs(r - num("0.0133993925154502219055")) <= 1e-20);
    const HPReal r3 = remainder_bound(PolynomialExponent::parse("t"), 3, x);
    CHECK(abs(r3 - remainder_prefactor(3, P) * pow(x, 5L)) <= 1e-60);
  }
  SUBCASE("integral of f^{(2m)} is -f^{(2m-1)}(0)") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 6; ++trial) {
      const PolynomialExponent s(random_polynomial(rng, 1 + trial % 3));
      const int m = 1 + trial % 3;
      const HPReal x = num("0.01");
      const auto Pk = derivative_polynomials(s, 2 * m - 1);
      const HPReal exact = remainder_prefactor(m, P) * abs(Pk.back()(-x, HPReal(P))) *
                           exp(-x * HPReal(s.polynomial().coefficient(0), P));
      CAPTURE(s.polynomial().to_string());
      CHECK(abs(remainder_bound(s, m, x) - exact) <= exact * num("1e-30"));
    }
  }
  CHECK_THROWS_AS(remainder_bound(PolynomialExponent::parse("t"), 0, num("0.1")), InvalidArgument);
  CHECK_THROWS_AS(remainder_bound(PolynomialExponent::parse("t"), 1, HPReal(P)), InvalidArgument);
}

namespace {

std::vector<HPReal> geometric(const char* lo, const char* hi, int n) {
  std::vector<HPReal> g;
  const HPReal a = num(lo);
  const HPReal ratio = num(hi) / a;
  for (int i = 0; i < n; ++i) g.push_back(a * pow(ratio, HPReal(Rational(i, n - 1), P)));
  return g;
}

}  // namespace

TEST_CASE("verification") {
  SUBCASE("geometric: residual order at least 4") {
    const SeriesSpec spec{ints({1, -1}), PolynomialExponent::parse("n")};
    const auto e = series_expansion(spec, 3, 3, P);
    const auto v = verify_expansion(spec, e, geometric("1e-3", "1e-2", 6));
    REQUIRE(v.slope);
    CHECK(*v.slope >= 4.0);
    CHECK(v.expected_exponent == 4);
    CHECK(v.consistent);
  }
  SUBCASE("theta: residual is beyond all orders") {
    const SeriesSpec spec{ints({1, -1}), PolynomialExponent::parse("n^2")};
    const auto e = series_expansion(spec, 4, 6, P);
    const auto v = verify_expansion(spec, e, geometric("0.02", "0.1", 6));
    REQUIRE(v.slope);
    CHECK(*v.slope >= 3.5);
    CHECK(v.consistent);
    for (const auto& pt : v.points) CHECK(pt.residual > pt.noise_floor);
  }
  SUBCASE("n^2 with (1, 1): through x^{1/2}") {
    // The true residual is e^{-pi^2/x}, so only the top of the window sees it.
    const SeriesSpec spec{ints({1, 1}), PolynomialExponent::parse("n^2")};
    const auto e = series_expansion(spec, 2, 1, P);
    CHECK(e.coefficient(1, P).is_zero());
    const auto v = verify_expansion(spec, e, geometric("0.03", "0.1", 6));
    CHECK(v.expected_exponent == 1);
    REQUIRE(v.slope);
    CHECK(*v.slope >= 1.0);
    CHECK(v.consistent);
  }
  SUBCASE("residuals below the floor are reported") {
    const SeriesSpec spec{ints({1, 1}), PolynomialExponent::parse("n^2")};
    const auto e = series_expansion(spec, 4, 6, P);
    const auto v = verify_expansion(spec, e, geometric("1e-3", "1e-2", 4));
    CHECK(!v.slope);
    CHECK(v.consistent);
    CHECK(v.note == "all residuals below the noise floor");
  }
  SUBCASE("a single residual above the floor is not enough") {
    const SeriesSpec spec{ints({1, 1}), PolynomialExponent::parse("n^2")};
    const auto e = series_expansion(spec, 4, 6, P);
    const auto v = verify_expansion(spec, e, geometric("1e-3", "1e-1", 6));
    CHECK(!v.slope);
    CHECK(!v.consistent);
  }
  SUBCASE("grid outside (0, 0.1]") {
    const SeriesSpec spec{ints({1, -1}), PolynomialExponent::parse("n")};
    const auto e = series_expansion(spec, 3, 3, P);
    CHECK_THROWS_AS(verify_expansion(spec, e, geometric("0.05", "0.2", 3)), InvalidArgument);
    CHECK_THROWS_AS(verify_expansion(spec, e, {num("0.01")}), InvalidArgument);
  }
}

TEST_CASE("expansion arguments") {
  const SeriesSpec spec{ints({1, -1}), PolynomialExponent::parse("n")};
  CHECK_THROWS_AS(series_expansion(spec, 0, 3, P), InvalidArgument);
  CHECK_THROWS_AS(series_expansion(spec, 3, -1, P), InvalidArgument);
  CHECK_THROWS_AS(integral_expansion(PolynomialExponent::parse("t"), -1, P), InvalidArgument);
  CHECK_THROWS_AS(boundary_terms(PolynomialExponent::parse("t"), 0, 1, P), InvalidArgument);
  CHECK_THROWS_AS(derivative_polynomials(PolynomialExponent::parse("t"), -1), InvalidArgument);
  const SeriesSpec lac{ints({1, -1}), ExponentialExponent(HPReal(2L, P))};
  CHECK_THROWS(series_expansion(lac, 3, 3, P));
}
