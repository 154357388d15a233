#include "qradial/euler_maclaurin.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qradial/errors.hpp"
#include "qradial/quadrature.hpp"
#include "qradial/radial.hpp"
#include "qradial/special.hpp"

namespace qradial {

namespace {

Rational rational_power(const Rational& base, int e) {
  Rational out = 1;
  const Rational b = e >= 0 ? base : Rational(1) / base;
  for (int i = 0; i < std::abs(e); ++i) out *= b;
  return out;
}

Rational factorial_q(int n) { return Rational(factorial(n)); }

// Γ(l/d) a^{-l/d} at precision p, cached per l.
class GammaPowers {
 public:
  GammaPowers(int d, const Rational& a_d, Precision p) : d_(d), a_(a_d, p), p_(p) {}

  const HPReal& operator()(int l) {
    auto it = cache_.find(l);
    if (it != cache_.end()) return it->second;
    const HPReal exponent(ratio(l, d_), p_);
    HPReal v = gamma_hp(exponent, p_) * pow(a_, -exponent);
    return cache_.emplace(l, std::move(v)).first->second;
  }

 private:
  int d_;
  HPReal a_;
  Precision p_;
  std::map<int, HPReal> cache_;
};

HPReal numeric_value(const ExactCoefficient& c, GammaPowers& gp, Precision p) {
  HPReal v(c.rational, p);
  for (const auto& [l, w] : c.gamma) v += HPReal(w, p) * gp(l);
  return v;
}

// Terms keyed by lattice while an expansion is assembled.
struct Accumulator {
  std::map<int, HPComplex> numeric;
  std::map<int, ExactCoefficient> exact;
  bool exact_valid = true;

  void add(int lattice, const HPComplex& value) {
    auto it = numeric.find(lattice);
    if (it == numeric.end()) {
      numeric.emplace(lattice, value);
    } else {
      it->second += value;
    }
  }
  void add_exact(int lattice, const ExactCoefficient& c) { exact[lattice] += c; }

  AsymptoticExpansion finish(int d, const Rational& a_d, int order, int remainder_order, Precision p) const {
    AsymptoticExpansion out;
    out.d = d;
    out.a_d = a_d;
    out.order = order;
    out.remainder_order = remainder_order;
    int low = -1;
    if (!numeric.empty()) low = std::min(low, numeric.begin()->first);
    for (int l = low; l <= order; ++l) {
      auto it = numeric.find(l);
      ExpansionTerm term{l, it == numeric.end() ? HPComplex(p) : it->second.with_precision(p), std::nullopt};
      if (exact_valid) {
        auto ex = exact.find(l);
        term.exact = ex == exact.end() ? ExactCoefficient{} : ex->second;
      }
      // The x^{-1/d} slot is only listed when something landed there.
      if (l == -1 && it == numeric.end()) continue;
      out.terms.push_back(std::move(term));
    }
    return out;
  }
};

// Calls visit(m) for every multi-index m_1..m_d (m[i-1] = m_i) of weight
// sum i m_i <= W.
template <class F>
void for_each_multi_index(int d, int W, F visit) {
  std::vector<int> m(d, 0);
  auto rec = [&](auto& self, int i, int remaining) -> void {
    if (i > d) {
      visit(m);
      return;
    }
    for (int c = 0; c * i <= remaining; ++c) {
      m[i - 1] = c;
      self(self, i + 1, remaining - c * i);
    }
    m[i - 1] = 0;
  };
  rec(rec, 1, W);
}

bool integer_cycle(const PeriodicCoefficients& coeffs, std::vector<Rational>& out) {
  for (const auto& c : coeffs.values()) {
    if (!c.im().is_zero() || !c.re().is_finite()) return false;
    const long v = c.re().to_long();
    if (!(c.re() == HPReal(v, c.re().precision()))) return false;
    out.emplace_back(v);
  }
  return true;
}

}  // namespace

Rational DerivativePolynomial::operator()(const Rational& lambda, const Rational& t) const {
  Rational total = 0;
  for (const auto& [re, c] : terms) total += c * rational_power(lambda, re.first) * rational_power(t, re.second);
  return total;
}

HPReal DerivativePolynomial::operator()(const HPReal& lambda, const HPReal& t) const {
  const Precision p = max(lambda.precision(), t.precision());
  HPReal total(p);
  for (const auto& [re, c] : terms) total += HPReal(c, p) * pow(lambda, re.first) * pow(t, re.second);
  return total;
}

RationalPolynomial DerivativePolynomial::slice(int r) const {
  std::vector<Rational> coeffs;
  for (const auto& [re, c] : terms) {
    if (re.first != r) continue;
    if (static_cast<int>(coeffs.size()) <= re.second) coeffs.resize(re.second + 1, Rational(0));
    coeffs[re.second] = c;
  }
  return RationalPolynomial(std::move(coeffs));
}

std::vector<DerivativePolynomial> derivative_polynomials(const PolynomialExponent& s, int K) {
  if (K < 0) throw InvalidArgument("derivative order must be non-negative");
  const RationalPolynomial ds = s.polynomial().derivative();
  std::vector<DerivativePolynomial> out;
  DerivativePolynomial current{0, {{{0, 0}, Rational(1)}}};
  out.push_back(current);
  for (int k = 1; k <= K; ++k) {
    DerivativePolynomial next{k, {}};
    for (const auto& [re, c] : current.terms) {
      const auto [r, e] = re;
      if (e > 0) next.terms[{r, e - 1}] += c * e;
      for (int i = 0; i <= ds.degree(); ++i) {
        const Rational& b = ds.coefficients()[i];
        if (b != 0) next.terms[{r + 1, e + i}] += c * b;
      }
    }
    std::erase_if(next.terms, [](const auto& kv) { return kv.second == 0; });
    out.push_back(next);
    current = std::move(next);
  }
  return out;
}

bool ExactCoefficient::is_zero() const {
  return rational == 0 && std::all_of(gamma.begin(), gamma.end(), [](const auto& kv) { return kv.second == 0; });
}

ExactCoefficient& ExactCoefficient::operator+=(const ExactCoefficient& rhs) {
  rational += rhs.rational;
  for (const auto& [l, w] : rhs.gamma) gamma[l] += w;
  std::erase_if(gamma, [](const auto& kv) { return kv.second == 0; });
  return *this;
}

ExactCoefficient& ExactCoefficient::operator*=(const Rational& c) {
  rational *= c;
  for (auto& [l, w] : gamma) w *= c;
  std::erase_if(gamma, [](const auto& kv) { return kv.second == 0; });
  return *this;
}

std::string ExactCoefficient::to_string(int d, const Rational& a_d) const {
  std::ostringstream out;
  bool first = true;
  if (rational != 0 || gamma.empty()) {
    out << qradial::to_string(rational);
    first = false;
  }
  for (const auto& [l, w] : gamma) {
    if (!first) out << " + ";
    first = false;
    out << "(" << qradial::to_string(w) << ")*Gamma(" << qradial::to_string(ratio(l, d)) << ")";
    if (a_d != 1) out << "*(" << qradial::to_string(a_d) << ")^(" << qradial::to_string(ratio(-l, d)) << ")";
  }
  return out.str();
}

HPComplex AsymptoticExpansion::operator()(const HPReal& x) const {
  const Precision p = x.precision();
  HPComplex total(p);
  for (const auto& t : terms) {
    if (t.coefficient.is_zero()) continue;
    total += t.coefficient.with_precision(p) * pow(x, HPReal(ratio(t.lattice, d), p));
  }
  return total;
}

const ExpansionTerm* AsymptoticExpansion::find(int lattice) const {
  for (const auto& t : terms)
    if (t.lattice == lattice) return &t;
  return nullptr;
}

HPComplex AsymptoticExpansion::coefficient(int lattice, Precision p) const {
  const ExpansionTerm* t = find(lattice);
  return t ? t->coefficient.with_precision(p) : HPComplex(p);
}

AsymptoticExpansion integral_expansion(const PolynomialExponent& s, int W, Precision p) {
  if (W < 0) throw InvalidArgument("expansion order must be non-negative");
  const int d = s.degree();
  const RationalPolynomial& poly = s.polynomial();
  const Rational& a_d = s.leading();
  const Precision wp = p.guarded(32);
  GammaPowers gp(d, a_d, wp);
  Accumulator acc;
  // Each multi-index contributes
  //   prod_i (-a_{d-i})^{m_i} / m_i! / d * Γ(l/d) a_d^{-l/d} x^{(w-1)/d},
  // l = 1 + sum (d-i) m_i, w = sum i m_i.
  for_each_multi_index(d, W, [&](const std::vector<int>& m) {
    Rational weight(1, d);
    int l = 1;
    int w = 0;
    for (int i = 1; i <= d; ++i) {
      if (m[i - 1] == 0) continue;
      const Rational c = -poly.coefficient(d - i);
      weight *= rational_power(c, m[i - 1]) / factorial_q(m[i - 1]);
      l += (d - i) * m[i - 1];
      w += i * m[i - 1];
    }
    if (weight == 0) return;
    // Γ(r/d + n) a_d^{-r/d - n} = Γ(r/d) a_d^{-r/d} prod_{i<n} (r/d + i) / a_d^n,
    // so only 0 < r < d survives as a symbol and exact zeros show up as zeros.
    const int r = l % d;
    const int n = l / d;
    if (r == 0) weight *= factorial_q(n - 1);
    for (int i = 0; r != 0 && i < n; ++i) weight *= ratio(r, d) + i;
    weight *= rational_power(a_d, -n);
    ExactCoefficient term;
    if (r == 0) {
      term.rational = weight;
    } else {
      term.gamma[r] = weight;
    }
    acc.add(w - 1, HPComplex(numeric_value(term, gp, wp)));
    acc.add_exact(w - 1, term);
  });
  return acc.finish(d, a_d, W - 1, W, p);
}

AsymptoticExpansion boundary_terms(const PolynomialExponent& s, int m, int W, Precision p) {
  if (m < 1) throw InvalidArgument("Euler-Maclaurin depth m must be at least 1");
  if (W < 0) throw InvalidArgument("expansion order must be non-negative");
  const int d = s.degree();
  const auto P = derivative_polynomials(s, std::max(0, 2 * m - 3));
  const auto B = bernoulli_numbers(std::max(0, 2 * m - 2));
  // Bracket 1/2 - sum_k B_{2k}/(2k)! P_{2k-1}(-x, 0) as a polynomial in x.
  std::vector<Rational> bracket(W + 1, Rational(0));
  bracket[0] = Rational(1, 2);
  for (int k = 1; k < m; ++k) {
    const Rational factor = B[2 * k] / factorial_q(2 * k);
    for (const auto& [re, c] : P[2 * k - 1].terms) {
      const auto [r, e] = re;
      if (e != 0 || r > W) continue;
      bracket[r] -= factor * c * rational_power(Rational(-1), r);
    }
  }
  // times e^{-s(0) x}
  const Rational s0 = s.polynomial().coefficient(0);
  std::vector<Rational> expo(W + 1);
  for (int i = 0; i <= W; ++i) expo[i] = rational_power(-s0, i) / factorial_q(i);
  Accumulator acc;
  const Precision wp = p.guarded(32);
  for (int i = 0; i <= W; ++i) {
    Rational c = 0;
    for (int j = 0; j <= i; ++j) c += bracket[j] * expo[i - j];
    ExactCoefficient term;
    term.rational = c;
    acc.add(i * d, HPComplex(HPReal(c, wp)));
    acc.add_exact(i * d, term);
  }
  AsymptoticExpansion out = acc.finish(d, s.leading(), W * d, (W + 1) * d, p);
  // Only integer powers carry information here; drop the empty lattice slots.
  std::erase_if(out.terms, [d](const ExpansionTerm& t) { return t.lattice % d != 0; });
  return out;
}

AsymptoticExpansion series_expansion(const SeriesSpec& spec, int m, int W, Precision p) {
  if (m < 1) throw InvalidArgument("Euler-Maclaurin depth m must be at least 1");
  if (W < 0) throw InvalidArgument("expansion order must be non-negative");
  const PolynomialExponent& s = spec.polynomial();
  const int d = s.degree();
  const auto& coeffs = spec.coefficients;
  const int k = static_cast<int>(coeffs.period());
  const Precision wp = p.guarded(32);

  std::vector<Rational> integer_c;
  Accumulator acc;
  acc.exact_valid = integer_cycle(coeffs, integer_c);

  for (int j = 0; j < k; ++j) {
    const HPComplex c = coeffs[j].with_precision(wp);
    if (c.is_zero()) continue;
    const PolynomialExponent sj(s.polynomial().compose_affine(Rational(k), Rational(j)));
    const AsymptoticExpansion integral = integral_expansion(sj, W + 1, wp);
    const AsymptoticExpansion boundary = boundary_terms(sj, m, W / d, wp);
    for (const auto* part : {&integral, &boundary}) {
      for (const auto& t : part->terms) {
        if (t.lattice > W) continue;
        acc.add(t.lattice, c * t.coefficient);
        if (acc.exact_valid && t.exact) {
          // Exact forms of s_j refer to a_d k^d; rewrite against a_d:
          // (a_d k^d)^{-l/d} = a_d^{-l/d} k^{-l}.
          ExactCoefficient e = *t.exact;
          for (auto& [l, w] : e.gamma) w *= rational_power(Rational(k), -l);
          e *= integer_c[j];
          acc.add_exact(t.lattice, e);
        }
      }
    }
  }

  AsymptoticExpansion out = acc.finish(d, s.leading(), W, std::min(W + 1, 2 * m - 1), p);
  if (acc.exact_valid) {
    // Integer cycles: take the numbers from the exact forms, free of the
    // cancellation between residues.
    GammaPowers gp(d, s.leading(), wp);
    for (auto& t : out.terms) t.coefficient = HPComplex(numeric_value(*t.exact, gp, wp).with_precision(p));
  }
  if (has_mean_zero(coeffs)) {
    auto it = std::find_if(out.terms.begin(), out.terms.end(), [](const ExpansionTerm& t) { return t.lattice == -1; });
    HPReal residual(p);
    if (it != out.terms.end()) {
      residual = abs(it->coefficient);
      out.terms.erase(it);
    }
    // The x^{-1/d} coefficient is k mean(C) Γ(1/d) / (d a_d^{1/d} k): zero up
    // to the accumulated rounding of the residue sum.
    const HPReal scale = coeffs.max_abs().with_precision(p) * static_cast<long>(k) + 1L;
    if (residual > scale * mean_zero_tolerance(p) * 16L)
      throw Error("leading x^{-1/d} terms did not cancel for a mean-zero cycle: residual " + residual.to_string(6));
    out.cancelled_leading = std::move(residual);
  }
  return out;
}

HPReal remainder_bound(const PolynomialExponent& s, int m, const HPReal& x) {
  if (m < 1) throw InvalidArgument("Euler-Maclaurin depth m must be at least 1");
  if (!(x > 0.0)) throw InvalidArgument("remainder_bound needs x > 0");
  const Precision p = x.precision();
  const Precision wp = p.guarded(32);
  const HPReal xw = x.with_precision(wp);
  const auto P = derivative_polynomials(s, 2 * m);
  const DerivativePolynomial& P2m = P.back();
  const HPReal lambda = -xw;
  const int d = s.degree();
  // t = L u with L = (x a_d)^{-1/d} puts the decay scale at u ~ 1.
  const HPReal L = pow(xw * HPReal(s.leading(), wp), HPReal(Rational(-1, d), wp));
  RealFunction f = [&](const HPReal& u) {
    const HPReal t = L * u;
    return P2m(lambda, t) * exp(-xw * s.polynomial()(t));
  };
  const HPReal rough = abs(exp_sinh(f, HPReal(wp), HPReal(1L, wp), 3).value);
  const HPReal tol = max(rough, unit_roundoff(wp)) * power_of_two(-p.bits / 2 - 8, wp);
  const HPReal integral = exp_sinh(f, HPReal(wp), tol, 14).value * L;
  return (remainder_prefactor(m, wp) * abs(integral)).with_precision(p);
}

VerificationReport verify_expansion(const SeriesSpec& spec, const AsymptoticExpansion& expansion,
                                    const std::vector<HPReal>& grid) {
  if (grid.size() < 2) throw InvalidArgument("verification grid needs at least two points");
  VerificationReport report;
  report.expected_exponent = ratio(expansion.remainder_order, expansion.d);
  for (const auto& x : grid) {
    if (!(x > 0.0) || x > 0.1) throw InvalidArgument("verification grid must lie inside (0, 0.1]");
    const Precision p = x.precision();
    const Evaluation ev = evaluate_at(spec, x, power_of_two(-p.bits, p));
    const HPComplex approx = expansion(x);
    HPReal residual = abs(ev.value - approx);
    // Series error plus the rounding of summing the expansion, plus whatever
    // survived the leading cancellation.
    HPReal floor = ev.tail_bound + ev.rounding_bound;
    HPReal magnitude(p);
    for (const auto& t : expansion.terms)
      magnitude += abs(t.coefficient.with_precision(p)) * pow(x, HPReal(ratio(t.lattice, expansion.d), p));
    floor += (magnitude + abs(ev.value)) * power_of_two(8 - p.bits, p);
    if (expansion.cancelled_leading)
      floor += expansion.cancelled_leading->with_precision(p) * pow(x, HPReal(Rational(-1, expansion.d), p));
    floor *= 4L;
    report.points.push_back(ResidualPoint{x, ev.value, approx, std::move(residual), std::move(floor)});
  }

  std::vector<const ResidualPoint*> above;
  for (const auto& pt : report.points)
    if (pt.residual > pt.noise_floor) above.push_back(&pt);
  if (above.empty()) {
    report.consistent = true;
    report.note = "all residuals below the noise floor";
    return report;
  }
  if (above.size() < 2) {
    report.note = "fewer than two residuals above the noise floor";
    return report;
  }
  const Precision p = above.front()->x.precision();
  HPReal sx(p), sy(p), sxx(p), sxy(p);
  for (const auto* pt : above) {
    const HPReal lx = log(pt->x);
    const HPReal ly = log(pt->residual);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const long n = static_cast<long>(above.size());
  const HPReal denom = sxx * n - sx * sx;
  if (denom.is_zero()) {
    report.note = "grid points coincide";
    return report;
  }
  HPReal slope = (sxy * n - sx * sy) / denom;
  // A quarter order of slack absorbs the next correction across the window.
  report.consistent = slope >= HPReal(report.expected_exponent, p) - HPReal(Rational(1, 4), p);
  report.note = report.consistent ? "residual order consistent with the remainder order"
                                  : "residuals decay slower than the remainder order";
  report.slope = std::move(slope);
  return report;
}

}  // namespace qradial
