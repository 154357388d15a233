// One line per acceptance criterion: "criterion N: PASS|FAIL  <what was measured>".
// Tolerances are pinned here. With arguments, only the listed criteria run.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qradial/cli.hpp"
#include "qradial/errors.hpp"
#include "qradial/euler_maclaurin.hpp"
#include "qradial/lacunary.hpp"
#include "qradial/qintegral.hpp"
#include "qradial/radial.hpp"
#include "qradial/special.hpp"

using namespace qradial;

namespace {

const Precision P(256);

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + ("failed: " + what);
    }
  }
  void note(const std::string& text) { detail += (detail.empty() ? "" : "; ") + text; }
};

std::string sci(const HPReal& x) { return x.to_string(3); }
HPReal num(const char* s) { return HPReal::parse(s, P); }
HPComplex real(const Rational& r) { return HPComplex(HPReal(r, P)); }
PeriodicCoefficients ints(std::initializer_list<long> v) { return PeriodicCoefficients::from_integers(v, P); }
PeriodicCoefficients ints(const std::vector<long>& v) {
  std::vector<HPComplex> c;
  for (long x : v) c.emplace_back(HPReal(x, P));
  return PeriodicCoefficients(std::move(c));
}
SeriesSpec series(PeriodicCoefficients c, const char* s) { return {std::move(c), PolynomialExponent::parse(s)}; }

HPComplex extrapolate(const SeriesSpec& spec, const RootOfUnity& xi) {
  return extrapolate_limit(spec, xi, default_grid(spec, xi)).estimate;
}

// Shared by criteria 2 and 7: mean-zero integer cycles with k <= 6 against
// polynomials with d <= 4 and integer coefficients in [-9, 9].
std::vector<SeriesSpec> random_suite() {
  std::mt19937_64 rng(20240611);
  std::uniform_int_distribution<int> period(2, 6), degree(1, 4), entry(-9, 9), lead(1, 9);
  std::vector<SeriesSpec> out;
  while (out.size() < 12) {
    const int k = period(rng);
    std::vector<long> c;
    long sum = 0;
    for (int i = 0; i < k - 1; ++i) {
      c.push_back(entry(rng));
      sum += c.back();
    }
    if (sum < -9 || sum > 9) continue;  // keep the balancing entry in range too
    c.push_back(-sum);
    if (std::all_of(c.begin(), c.end(), [](long v) { return v == 0; })) continue;
    const int d = degree(rng);
    std::vector<Rational> s;
    for (int i = 0; i < d; ++i) s.emplace_back(entry(rng));
    s.emplace_back(lead(rng));
    out.push_back({ints(c), PolynomialExponent(RationalPolynomial(s))});
  }
  return out;
}

std::string describe(const SeriesSpec& spec) {
  std::string c = "(";
  for (const auto& v : spec.coefficients.values()) c += std::to_string(v.re().to_long()) + ",";
  c.back() = ')';
  return c + " " + spec.polynomial().polynomial().to_string('n');
}

Verdict criterion_1() {
  Verdict v;
  const HPComplex half = real(ratio(1, 2));
  for (const char* s : {"n", "n^2", "2n^3 + n", "n^5 + 3n^2 + 1"}) {
    const SeriesSpec spec = series(ints({1, -1}), s);
    const HPComplex closed = closed_form_limit(spec.coefficients);
    const HPReal err = abs(extrapolate(spec, RootOfUnity()) - half);
    const double tol = spec.polynomial().degree() == 5 ? 1e-4 : 1e-6;
    v.require(closed == half, std::string("closed form exactly 1/2 for ") + s);
    v.require(err <= tol, std::string("extrapolation for ") + s);
    v.note(std::string(s) + ": |num-1/2|=" + sci(err));
  }
  return v;
}

Verdict criterion_2() {
  Verdict v;
  HPReal worst(P);
  for (const SeriesSpec& spec : random_suite()) {
    const HPReal err = abs(extrapolate(spec, RootOfUnity()) - closed_form_limit(spec.coefficients));
    v.require(err <= 1e-4, describe(spec) + " |num-closed|=" + sci(err));
    worst = max(worst, err);
  }
  v.note("12 cases, max |numeric - closed| = " + sci(worst) + " (tol 1e-4)");
  return v;
}

Verdict criterion_3() {
  Verdict v;
  const SeriesSpec spec = series(ints({1, -1}), "n^2");
  const RootOfUnity xi(1, 6);
  const RadialLimitResult r = classify_radial_limit(spec, xi);
  v.require(r.tag == RadialLimitResult::Tag::Diverges, std::string("classification ") + to_string(r.tag));
  const HPComplex expected(HPReal(P), -1L / sqrt(HPReal(3L, P)));
  const HPReal mean_err = abs(r.twisted_mean - expected);
  v.require(mean_err <= 1e-20, "twisted mean -i/sqrt(3)");

  const SeriesSpec twisted{r.twisted, spec.exponent};
  std::vector<double> lx, ly;
  for (const char* x : {"1e-2", "1e-3", "1e-4"}) {
    const Evaluation e = evaluate_at(twisted, num(x), power_of_two(-120, P));
    lx.push_back(std::log(num(x).to_double()));
    ly.push_back(std::log(abs(e.value).to_double()));
  }
  const double mx = (lx[0] + lx[1] + lx[2]) / 3, my = (ly[0] + ly[1] + ly[2]) / 3;
  double sxy = 0, sxx = 0;
  for (int i = 0; i < 3; ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  const double slope = sxy / sxx;
  v.require(std::abs(slope + 0.5) <= 0.1, "growth slope near -1/2");
  char buf[160];
  std::snprintf(buf, sizeof buf, "%s, |mean + i/sqrt3| = %s, log-log slope %.4f", to_string(r.tag),
                sci(mean_err).c_str(), slope);
  v.note(buf);
  return v;
}

Verdict criterion_4() {
  Verdict v;
  const SeriesSpec spec = series(ints({1, 1, 1}), "n^3");
  const RootOfUnity xi(1, 3);
  const HPComplex w = xi.value(P);
  const PeriodicCoefficients tw = twist(spec.coefficients, spec.polynomial(), xi);
  const HPComplex closed = closed_form_limit(tw);
  const HPComplex derived = (HPComplex(HPReal(2L, P)) + w) / 3L;
  const HPComplex printed = -w - HPComplex(HPReal(ratio(2, 3), P));
  const HPComplex numeric = extrapolate(spec, xi);
  const HPReal to_derived = abs(numeric - closed);
  const HPReal to_printed = abs(numeric - printed);
  v.require(abs(closed - derived) <= 1e-40, "closed form of the twisted cycle is (2+w)/3");
  v.require(to_derived <= 1e-4, "numeric vs (2+w)/3");
  v.require(to_printed > 1e-3, "numeric differs from -w-2/3 by more than 10x tol");
  v.note("numeric " + numeric.re().to_string(8) + " + " + numeric.im().to_string(8) + "i; (2+w)/3: |diff| = " +
         sci(to_derived) + "; printed -w-2/3 = " + printed.re().to_string(6) + " + " + printed.im().to_string(6) +
         "i: |diff| = " + sci(to_printed));
  return v;
}

Verdict criterion_5() {
  Verdict v;
  const AsymptoticExpansion ex = series_expansion(series(ints({1, -1}), "n"), 3, 3, P);
  const Rational expected[] = {ratio(1, 2), ratio(1, 4), Rational(0), ratio(-1, 48)};
  HPReal worst(P);
  for (int l = 0; l <= 3; ++l) worst = max(worst, abs(ex.coefficient(l, P) - real(expected[l])));
  v.require(worst <= 1e-20, "coefficients (1/2, 1/4, 0, -1/48)");
  v.note("max deviation from (1/2, 1/4, 0, -1/48) = " + sci(worst));
  return v;
}

Verdict criterion_6() {
  Verdict v;
  const AsymptoticExpansion alt = series_expansion(series(ints({1, -1}), "n^2"), kDefaultEulerDepth, 4, P);
  HPReal others(P);
  for (const ExpansionTerm& t : alt.terms)
    if (t.lattice != 0) others = max(others, abs(t.coefficient));
  const HPReal const_err = abs(alt.coefficient(0, P) - real(ratio(1, 2)));
  v.require(const_err <= 1e-20, "alternating constant term 1/2");
  v.require(others <= 1e-20, "alternating other coefficients vanish");

  const AsymptoticExpansion ones = series_expansion(
      series(ints({1, 1}), "n^2"), kDefaultEulerDepth, default_expansion_order(2), P);
  const HPReal lead_err = abs(ones.coefficient(-1, P) - HPComplex(sqrt(pi(P)) / 2L));
  const HPReal ones_const = abs(ones.coefficient(0, P) - real(ratio(1, 2)));
  v.require(lead_err <= 1e-20, "(1,1) leading sqrt(pi)/2 x^{-1/2}");
  v.require(ones_const <= 1e-20, "(1,1) constant 1/2");
  v.note("(1,-1): |c0-1/2|=" + sci(const_err) + ", max other=" + sci(others) + "; (1,1): |lead-sqrt(pi)/2|=" +
         sci(lead_err) + ", |c0-1/2|=" + sci(ones_const));
  return v;
}

Verdict criterion_7() {
  Verdict v;
  HPReal worst(P);
  for (const SeriesSpec& spec : random_suite()) {
    const AsymptoticExpansion ex = series_expansion(spec, kDefaultEulerDepth, 2, P);
    const HPReal c = ex.cancelled_leading.value_or(HPReal(P));
    v.require(ex.cancelled_leading.has_value() && c <= 1e-20, describe(spec));
    worst = max(worst, c);
  }
  v.note("12 cases, max cancelled x^{-1/d} residual = " + sci(worst) + " (tol 1e-20)");
  return v;
}

Verdict criterion_8() {
  Verdict v;
  const LacunaryReport r10 = oscillation_report(ints({1, -1}), HPReal(10L, P), 8, P);
  v.require(r10.per_residue[0].inequality_holds, "a = 10 inequality");
  v.require(r10.separation > 0.5, "a = 10 cluster separation > 0.5 (measured " + r10.separation.to_string(6) + ")");
  const LacunaryReport r11 = oscillation_report(ints({1, -1}), num("1.1"), 8, P);
  v.require(!r11.per_residue[0].inequality_holds, "a = 1.1 inequality fails");
  v.require(r11.verdict == "inconclusive", "a = 1.1 verdict inconclusive");
  v.note("a=10: inequality " + std::string(r10.per_residue[0].inequality_holds ? "holds" : "fails") +
         ", clusters " + r10.cluster_high.re().to_string(6) + " / " + r10.cluster_low.re().to_string(6) +
         ", separation " + r10.separation.to_string(6) + "; a=1.1: verdict " + r11.verdict);
  return v;
}

Verdict criterion_9() {
  Verdict v;
  const LemmaPair pair(PolynomialExponent::parse("t"), PolynomialExponent::parse("2t"));
  const HPReal q = 1L - num("1e-5");
  const LemmaSum s = lemma_sum(pair, q, num("1e-15"));
  const HPReal closed = (1L - q) / (1L - pow(q, 3L));
  const HPReal to_third = abs(s.sum - HPReal(ratio(1, 3), P));
  const HPReal to_closed = abs(s.sum - closed);
  v.require(lemma_limit(pair) == ratio(1, 3), "1/(1+c) = 1/3");
  v.require(to_third <= 1e-4, "within 1e-4 of 1/3");
  v.require(to_closed <= 1e-12, "agrees with (1-q)/(1-q^3)");
  v.note("|sum-1/3| = " + sci(to_third) + ", |sum-(1-q)/(1-q^3)| = " + sci(to_closed));
  return v;
}

Verdict criterion_10() {
  Verdict v;
  const HPReal q = 1L - num("1e-6");
  for (const auto& [name, c] : {std::pair{"1/2", num("1/2")}, {"1", HPReal(1L, P)}, {"pi", pi(P)}}) {
    const HPReal err = abs(q_integral_power(c, q) - 1L / (c + 1L));
    v.require(err <= 1e-5, std::string("c = ") + name);
    v.note(std::string("c=") + name + ": " + sci(err));
  }
  return v;
}

Verdict criterion_11() {
  Verdict v;
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> coef(-4, 4), lead(1, 5);
  const char* qs[] = {"0.5", "0.9", "0.99", "0.999", "0.9999"};
  const HPReal eps = power_of_two(-120, P);
  int violations = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 1 + trial % 3;
    auto poly = [&] {
      std::vector<Rational> c;
      for (int i = 0; i < d; ++i) c.emplace_back(coef(rng));
      c.emplace_back(lead(rng));
      return PolynomialExponent(RationalPolynomial(c));
    };
    auto x = poly();
    auto y = poly();
    const LemmaPair pair(std::move(x), std::move(y));
    const LemmaSum s = lemma_sum(pair, num(qs[trial % 5]), eps);
    const HPReal slack = s.error_bound + s.quadrature_error + eps;
    if (!(s.lower_int <= s.tail_sum + slack && s.tail_sum <= s.upper_int + slack)) ++violations;
  }
  v.require(violations == 0, std::to_string(violations) + " squeeze violations");
  v.note("20 pairs, " + std::to_string(violations) + " violations");
  return v;
}

int run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  return cli::run(args, out, err);
}

Verdict criterion_12() {
  Verdict v;
  const char* oracle[] = {"1", "-1/2", "1/6", "0", "-1/30", "0", "1/42", "0", "-1/30", "0", "5/66", "0",
                          "-691/2730", "0", "7/6", "0", "-3617/510", "0", "43867/798", "0", "-174611/330", "0",
                          "854513/138", "0", "-236364091/2730", "0", "8553103/6", "0", "-23749461029/870", "0",
                          "8615841276005/14322"};
  const std::vector<Rational> b = bernoulli_numbers(30);
  int bad_b = 0;
  for (int n = 0; n <= 30; ++n) bad_b += b[n] == parse_rational(oracle[n]) ? 0 : 1;
  v.require(bad_b == 0, "Bernoulli B_0..B_30");

  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> dist(0.05, 30.0);
  int bad_g = 0;
  for (int i = 0; i < 20; ++i) {
    const HPReal x(dist(rng), P);
    const HPReal lhs = gamma_hp(x + 1L, P);
    if (abs(lhs - x * gamma_hp(x, P)) > abs(lhs) * power_of_two(-240, P)) ++bad_g;
  }
  v.require(bad_g == 0, "Gamma recurrence");

  // CLI: round trip plus each exit code.
  const std::string alternating = R"({"coefficients": {"period": 2, "values": [["1", "0"], ["-1/1", "0"]]},
    "exponent": {"type": "polynomial", "coefficients": ["0", "0", "2/2"]}})";
  const cli::SeriesDocument doc = cli::parse_document(alternating, P);
  v.require(cli::parse_document(cli::serialize_document(doc), P) == doc, "document round trip");

  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("qradial_acceptance_" + std::to_string(std::random_device{}()));
  fs::create_directories(dir);
  auto write = [&](const char* name, const std::string& text) {
    std::ofstream((dir / name).string()) << text;
    return (dir / name).string();
  };
  const std::string ok = write("alt.json", alternating);
  const std::string empty = write("empty.json", R"({"coefficients": {"period": 0, "values": []},
    "exponent": {"type": "polynomial", "coefficients": ["0", "1"]}})");
  const std::string sixth = write("sixth.json", R"({"coefficients": {"period": 2, "values": [["1", "0"], ["-1", "0"]]},
    "exponent": {"type": "polynomial", "coefficients": ["0", "0", "1"]}, "root_of_unity": {"p": 1, "N": 6}})");
  const int c0 = run_cli({"limit", ok, "--mode", "closed"});
  const int c2 = run_cli({"limit", empty});
  const int c3 = run_cli({"limit", sixth, "--mode", "closed"});
  const int c4 = run_cli({"--out", (dir / "missing" / "r.json").string(), "limit", ok, "--mode", "closed"});
  fs::remove_all(dir);
  v.require(c0 == 0 && c2 == 2 && c3 == 3 && c4 == 4, "exit codes");
  v.note("Bernoulli mismatches " + std::to_string(bad_b) + ", Gamma recurrence misses " + std::to_string(bad_g) +
         ", exit codes " + std::to_string(c0) + "/" + std::to_string(c2) + "/" + std::to_string(c3) + "/" +
         std::to_string(c4) + " (want 0/2/3/4)");
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Verdict()>> criteria = {
      criterion_1, criterion_2, criterion_3, criterion_4,  criterion_5,  criterion_6,
      criterion_7, criterion_8, criterion_9, criterion_10, criterion_11, criterion_12};
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
  if (selected.empty())
    for (int i = 1; i <= static_cast<int>(criteria.size()); ++i) selected.push_back(i);

  bool all = true;
  for (int id : selected) {
    if (id < 1 || id > static_cast<int>(criteria.size())) {
      std::cerr << "no criterion " << id << "\n";
      return 2;
    }
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[id - 1]();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const std::chrono::duration<double> t = std::chrono::steady_clock::now() - start;
    char head[48];
    std::snprintf(head, sizeof head, "criterion %2d: %s (%.1fs)  ", id, v.pass ? "PASS" : "FAIL", t.count());
    std::cout << head << v.detail << std::endl;
    all = all && v.pass;
  }
  return all ? 0 : 1;
}
