#include "qradial/radial.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "qradial/errors.hpp"
#include "qradial/special.hpp"

namespace qradial {

namespace {

long positive_mod(long a, long n) {
  const long r = a % n;
  return r < 0 ? r + n : r;
}

}  // namespace

RootOfUnity::RootOfUnity(long p, long N) {
  if (N < 1) throw InvalidArgument("root of unity order N must be >= 1");
  p = positive_mod(p, N);
  const long g = std::gcd(p, N);
  p_ = p / g;
  n_ = N / g;
}

RootOfUnity operator*(const RootOfUnity& a, const RootOfUnity& b) {
  const long l = std::lcm(a.n_, b.n_);
  return {a.p_ * (l / a.n_) + b.p_ * (l / b.n_), l};
}

HPReal mean_zero_tolerance(Precision p) { return power_of_two(16 - p.bits, p); }

HPComplex mean(const PeriodicCoefficients& coeffs) { return coeffs.mean(); }

bool has_mean_zero(const PeriodicCoefficients& coeffs) {
  return abs(coeffs.mean()) <= mean_zero_tolerance(coeffs.precision());
}

void require_mean_zero(const PeriodicCoefficients& coeffs) {
  HPComplex mu = coeffs.mean();
  if (abs(mu) > mean_zero_tolerance(coeffs.precision())) {
    const std::string what =
        "coefficient cycle has nonzero mean " + mu.re().to_string(12) + " + " + mu.im().to_string(12) + "i";
    throw NonZeroMean(what, std::move(mu));
  }
}

HPComplex weighted_index_form(const PeriodicCoefficients& coeffs) {
  const long k = static_cast<long>(coeffs.period());
  HPComplex total(coeffs.precision());
  for (long j = 1; j < k; ++j) total -= coeffs.values()[j] * j;
  return total / k;
}

HPComplex closed_form_limit(const PeriodicCoefficients& coeffs) {
  require_mean_zero(coeffs);
  const long k = static_cast<long>(coeffs.period());
  const Precision p = coeffs.precision();
  HPComplex total(p);
  for (long j = 0; j + 2 <= k; ++j) total += coeffs.values()[j] * (k - 1 - j);
  total /= k;
  // The two forms differ by exactly (k - 1) * mean.
  const HPReal slack = mean_zero_tolerance(p) * (k - 1) +
                       coeffs.max_abs() * HPReal(k * k, p) * power_of_two(8 - p.bits, p);
  if (abs(total - weighted_index_form(coeffs)) > slack)
    throw Error("closed_form_limit: the two forms of the limit disagree");
  return total;
}

PeriodicCoefficients twist(const PeriodicCoefficients& coeffs, const PolynomialExponent& s, const RootOfUnity& xi) {
  if (xi.is_one()) return coeffs;
  if (!s.polynomial().has_integer_coefficients())
    throw InvalidArgument("twisting by a root of unity needs integer exponent coefficients");
  const Precision p = coeffs.precision();
  const long k = static_cast<long>(coeffs.period());
  const long period = std::lcm(k, xi.N());
  const BigInt modulus(xi.N());
  std::vector<HPComplex> values;
  values.reserve(period);
  for (long n = 0; n < period; ++n) {
    const BigInt sn = s(static_cast<std::uint64_t>(n)).get_num();
    BigInt r;
    const BigInt scaled = sn * xi.p();
    mpz_fdiv_r(r.get_mpz_t(), scaled.get_mpz_t(), modulus.get_mpz_t());
    values.push_back(coeffs.values()[n % k] * HPComplex::root_of_unity(r.get_si(), xi.N(), p));
  }
  return PeriodicCoefficients(std::move(values));
}

const char* to_string(RadialLimitResult::Tag tag) {
  switch (tag) {
    case RadialLimitResult::Tag::Converges: return "Converges";
    case RadialLimitResult::Tag::Diverges: return "Diverges";
    case RadialLimitResult::Tag::Oscillates: return "Oscillates";
  }
  return "?";
}

RadialLimitResult classify_radial_limit(const SeriesSpec& spec, const RootOfUnity& xi, int lacunary_r_max) {
  using Tag = RadialLimitResult::Tag;
  const Precision p = spec.coefficients.precision();
  if (!spec.has_polynomial_exponent()) {
    if (!xi.is_one()) throw InvalidArgument("root-of-unity twists need a polynomial exponent");
    HPComplex mu = spec.coefficients.mean();
    if (spec.coefficients.max_abs() <= mean_zero_tolerance(p))
      return {Tag::Converges, HPComplex(p), std::nullopt, std::nullopt, spec.coefficients, std::move(mu)};
    std::optional<LacunaryReport> evidence;
    if (has_mean_zero(spec.coefficients))
      evidence = oscillation_report(spec.coefficients, spec.exponential().base(), lacunary_r_max, p);
    return {Tag::Oscillates, std::nullopt, std::nullopt, std::move(evidence), spec.coefficients, std::move(mu)};
  }

  const auto& s = spec.polynomial();
  PeriodicCoefficients twisted = twist(spec.coefficients, s, xi);
  HPComplex mu = twisted.mean();
  if (abs(mu) <= mean_zero_tolerance(p)) {
    HPComplex value = closed_form_limit(twisted);
    return {Tag::Converges, std::move(value), std::nullopt, std::nullopt, std::move(twisted), std::move(mu)};
  }
  // sum_n e^{-x s(n)} ~ Γ(1/d) / (d a_d^{1/d}) x^{-1/d}; each residue class
  // carries 1/k of it, so the cycle contributes its mean times this.
  const long d = s.degree();
  const HPReal inv_d(Rational(1, d), p);
  const HPReal scale = gamma_hp(inv_d, p) / (HPReal(d, p) * pow(HPReal(s.leading(), p), inv_d));
  LeadingTerm lead{mu * scale, Rational(-1, d)};
  return {Tag::Diverges, std::nullopt, std::move(lead), std::nullopt, std::move(twisted), std::move(mu)};
}

ExtrapolationGrid ExtrapolationGrid::standard(Precision p) {
  return {HPReal::parse("1e-4", p), HPReal::parse("1e-2", p), 12};
}

ExtrapolationGrid ExtrapolationGrid::automatic(const PolynomialExponent& s, std::size_t twisted_period, Precision p) {
  const int d = s.degree();
  if (d < 2) return standard(p);
  constexpr double kTarget = 35.0;
  const double dd = d;
  const double omega = 2.0 * M_PI / static_cast<double>(twisted_period);
  const double c = (dd - 1.0) / dd * std::sin(M_PI / (2.0 * (dd - 1.0))) * std::pow(omega, dd / (dd - 1.0));
  // Solve E(x_max) = kTarget.
  const double x_max = std::pow(c / kTarget, dd - 1.0) / (dd * s.leading().get_d());
  if (x_max >= 1e-2) return standard(p);
  // Round down to two significant digits so the grid is easy to reproduce by hand.
  const long exponent = static_cast<long>(std::floor(std::log10(x_max))) - 1;
  const long mantissa = static_cast<long>(std::floor(x_max / std::pow(10.0, static_cast<double>(exponent))));
  BigInt ten_power;
  mpz_ui_pow_ui(ten_power.get_mpz_t(), 10, static_cast<unsigned long>(-exponent));
  const Rational top = Rational(BigInt(mantissa), ten_power);
  return {HPReal(top / 100, p), HPReal(top, p), 12};
}

ExtrapolationGrid default_grid(const SeriesSpec& spec, const RootOfUnity& xi) {
  const auto& s = spec.polynomial();
  const Precision p = spec.coefficients.precision();
  return ExtrapolationGrid::automatic(s, twist(spec.coefficients, s, xi).period(), p);
}

std::vector<HPReal> ExtrapolationGrid::points() const {
  if (count < 1) throw InvalidArgument("grid count must be positive");
  if (!(x_min > 0.0) || x_max < x_min) throw InvalidArgument("grid needs 0 < x_min <= x_max");
  std::vector<HPReal> out;
  if (count == 1) return {x_min};
  const HPReal log_ratio = log(x_max / x_min);
  for (int i = 0; i < count; ++i) out.push_back(x_min * exp(log_ratio * i / (count - 1)));
  return out;
}

LeastSquaresFit least_squares(std::vector<std::vector<HPReal>> a, std::vector<HPReal> b) {
  const std::size_t m = a.size();
  if (m == 0) throw SingularFit("least squares: no rows");
  const std::size_t n = a[0].size();
  if (n == 0 || m < n) throw SingularFit("least squares: " + std::to_string(m) + " points for " + std::to_string(n) +
                                         " unknowns");
  const Precision p = a[0][0].precision();

  HPReal largest(p);
  for (const auto& row : a)
    for (const auto& v : row) largest = max(largest, abs(v));

  // Householder QR, applied to b on the fly.
  for (std::size_t c = 0; c < n; ++c) {
    HPReal norm(p);
    for (std::size_t r = c; r < m; ++r) norm += a[r][c] * a[r][c];
    norm = sqrt(norm);
    if (norm.is_zero()) continue;
    const HPReal alpha = a[c][c].sign() > 0 ? -norm : norm;
    std::vector<HPReal> v;
    for (std::size_t r = c; r < m; ++r) v.push_back(a[r][c]);
    v[0] -= alpha;
    HPReal vnorm2(p);
    for (const auto& e : v) vnorm2 += e * e;
    if (vnorm2.is_zero()) continue;
    auto reflect = [&](auto&& get) {
      HPReal dot(p);
      for (std::size_t r = c; r < m; ++r) dot += v[r - c] * get(r);
      const HPReal f = dot * 2L / vnorm2;
      for (std::size_t r = c; r < m; ++r) get(r) -= f * v[r - c];
    };
    for (std::size_t cc = c; cc < n; ++cc) reflect([&](std::size_t r) -> HPReal& { return a[r][cc]; });
    reflect([&](std::size_t r) -> HPReal& { return b[r]; });
  }

  const HPReal cutoff = largest * power_of_two(-p.bits / 2, p);
  for (std::size_t i = 0; i < n; ++i)
    if (abs(a[i][i]) <= cutoff) throw SingularFit("least squares: design matrix is rank deficient");

  std::vector<HPReal> coef(n, HPReal(p));
  for (std::size_t i = n; i-- > 0;) {
    HPReal acc = b[i];
    for (std::size_t j = i + 1; j < n; ++j) acc -= a[i][j] * coef[j];
    coef[i] = acc / a[i][i];
  }
  HPReal rss(p);
  for (std::size_t r = n; r < m; ++r) rss += b[r] * b[r];

  // Standard errors from sigma^2 (R^T R)^{-1}: row norms of R^{-1}.
  std::vector<HPReal> se(n, HPReal(p));
  if (m > n) {
    const HPReal sigma = sqrt(rss / static_cast<long>(m - n));
    std::vector<std::vector<HPReal>> rinv(n, std::vector<HPReal>(n, HPReal(p)));
    for (std::size_t col = 0; col < n; ++col) {
      for (std::size_t i = col + 1; i-- > 0;) {
        HPReal acc(i == col ? 1L : 0L, p);
        for (std::size_t j = i + 1; j <= col; ++j) acc -= a[i][j] * rinv[j][col];
        rinv[i][col] = acc / a[i][i];
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      HPReal s2(p);
      for (std::size_t j = i; j < n; ++j) s2 += rinv[i][j] * rinv[i][j];
      se[i] = sigma * sqrt(s2);
    }
  }
  return {std::move(coef), std::move(se), sqrt(rss)};
}

namespace {

struct ComplexFit {
  std::vector<HPComplex> coefficients;  // in the scaled basis (x / x_max)^{w/d}
  HPReal c0_standard_error;
};

ComplexFit fit_powers(const std::vector<HPReal>& scaled_roots, const std::vector<HPComplex>& values, int order) {
  const Precision p = values[0].precision();
  std::vector<std::vector<HPReal>> rows;
  for (const auto& t : scaled_roots) {
    std::vector<HPReal> row;
    HPReal power(1L, p);
    for (int w = 0; w <= order; ++w) {
      row.push_back(power);
      power *= t;
    }
    rows.push_back(std::move(row));
  }
  std::vector<HPReal> re, im;
  for (const auto& v : values) {
    re.push_back(v.re());
    im.push_back(v.im());
  }
  const auto fr = least_squares(rows, std::move(re));
  const auto fi = least_squares(rows, std::move(im));
  ComplexFit out{{}, hypot(fr.standard_errors[0], fi.standard_errors[0])};
  for (int w = 0; w <= order; ++w) out.coefficients.emplace_back(fr.coefficients[w], fi.coefficients[w]);
  return out;
}

}  // namespace

ExtrapolationResult extrapolate_limit(const SeriesSpec& spec, const RootOfUnity& xi, const ExtrapolationGrid& grid,
                                      int fit_order, const EvaluationOptions& options) {
  const auto& s = spec.polynomial();
  const int d = s.degree();
  if (fit_order < 0) fit_order = 2 * d;
  const auto xs = grid.points();
  if (static_cast<int>(xs.size()) < fit_order + 1)
    throw SingularFit("extrapolation needs at least fit_order + 1 grid points");

  const Precision p = spec.coefficients.precision();
  const SeriesSpec twisted{twist(spec.coefficients, s, xi), spec.exponent};
  const HPReal eps = power_of_two(-p.bits / 2, p);
  std::vector<HPComplex> values;
  std::vector<HPReal> xs_p;
  for (const auto& x_in : xs) {
    const HPReal x = x_in.with_precision(p);
    try {
      values.push_back(evaluate_at(twisted, x, eps, options).value);
    } catch (const EvaluationFailure&) {
      throw;
    } catch (const Error& e) {
      throw EvaluationFailure(std::string("extrapolation grid point: ") + e.what(), x);
    }
    xs_p.push_back(x);
  }

  // Basis in t = (x / x_max)^{1/d}, so powers stay in (0, 1] and c_0 is unchanged.
  const HPReal x_max = xs_p.back();
  const HPReal inv_d(Rational(1, d), p);
  std::vector<HPReal> roots;
  for (const auto& x : xs_p) roots.push_back(pow(x / x_max, inv_d));

  const ComplexFit full = fit_powers(roots, values, fit_order);
  HPReal error = full.c0_standard_error;
  if (fit_order >= 1) {
    const ComplexFit lower = fit_powers(roots, values, fit_order - 1);
    error = max(error, abs(full.coefficients[0] - lower.coefficients[0]));
  }
  std::vector<HPComplex> coefficients;
  for (int w = 0; w <= fit_order; ++w)
    coefficients.push_back(full.coefficients[w] / pow(x_max, HPReal(ratio(w, d), p)));
  HPComplex estimate = coefficients[0];
  return {std::move(estimate), std::move(error), fit_order, std::move(xs_p), std::move(values),
          std::move(coefficients)};
}

}  // namespace qradial
