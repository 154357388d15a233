#include <sstream>

#include "common.hpp"
#include "qradial/euler_maclaurin.hpp"
#include "qradial/lacunary.hpp"
#include "qradial/qintegral.hpp"

namespace qradial::cli::detail {

namespace {

std::string exponent_string(int lattice, int d) { return to_string(ratio(lattice, d)); }

json root_json(const RootOfUnity& xi) { return {{"p", xi.p()}, {"N", xi.N()}}; }

json cycle_json(const PeriodicCoefficients& c, int digits) {
  json out = json::array();
  for (const auto& v : c.values()) out.push_back(complex_number(v, digits));
  return out;
}

json lacunary_json(const LacunaryReport& r, int digits) {
  json residues = json::array();
  for (const ResidueAnalysis& a : r.per_residue) {
    residues.push_back({{"j", a.j},
                        {"M", number(a.M, digits)},
                        {"m", number(a.m, digits)},
                        {"x_scale", number(a.x_scale, digits)},
                        {"x0", number(a.x0, digits)},
                        {"x0_prime", number(a.x0_prime, digits)},
                        {"lower_value", number(a.lower_value, digits)},
                        {"upper_value", number(a.upper_value, digits)},
                        {"inequality_holds", a.inequality_holds},
                        {"inner_high_min", number(a.inner_high_min, digits)},
                        {"inner_low_max", number(a.inner_low_max, digits)},
                        {"inner_bounds_hold", a.inner_bounds_hold}});
  }
  auto samples = [&](const std::vector<LacunarySample>& ss) {
    json out = json::array();
    for (const auto& s : ss)
      out.push_back({{"r", s.r}, {"x", number(s.x, digits)}, {"value", complex_number(s.value, digits)}});
    return out;
  };
  return {{"a", number(r.a, digits)},
          {"k", r.k},
          {"anchor", r.anchor},
          {"r_max", r.r_max},
          {"per_residue", residues},
          {"cluster_residue", r.cluster_residue},
          {"samples_high", samples(r.samples_high)},
          {"samples_low", samples(r.samples_low)},
          {"cluster_high", complex_number(r.cluster_high, digits)},
          {"cluster_low", complex_number(r.cluster_low, digits)},
          {"separation", number(r.separation, digits)},
          {"verdict", r.verdict}};
}

std::pair<std::string, std::string> split_pair(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos || text.find(',', comma + 1) != std::string::npos)
    throw InvalidArgument("--pair takes two polynomials separated by one comma");
  return {text.substr(0, comma), text.substr(comma + 1)};
}

}  // namespace

SeriesDocument load_document(const std::string& path, Precision p) { return parse_document(read_file(path), p); }

Outcome cmd_limit(const Globals& g, const LimitArgs& a) {
  if (a.mode != "closed" && a.mode != "numeric" && a.mode != "both")
    throw InvalidArgument("--mode must be closed, numeric or both");
  const SeriesDocument doc = load_document(a.spec, g.precision);
  const RootOfUnity xi = doc.root.value_or(RootOfUnity());
  const int digits = g.digits();

  Outcome o;
  o.inputs = {{"spec_file", a.spec}, {"document", document_json(doc)}, {"mode", a.mode}};

  const RadialLimitResult cls = classify_radial_limit(doc.spec, xi);
  json& r = o.results;
  r["classification"] = to_string(cls.tag);
  r["root_of_unity"] = root_json(xi);
  r["twisted"] = {{"period", cls.twisted.period()},
                  {"mean", complex_number(cls.twisted_mean, digits)},
                  {"values", cycle_json(cls.twisted, digits)}};
  if (cls.leading_term) {
    r["leading_term"] = {{"coefficient", complex_number(cls.leading_term->coefficient, digits)},
                         {"exponent", to_string(cls.leading_term->exponent)},
                         {"status", "conjectural leading term"}};
  }
  if (cls.evidence) r["lacunary_evidence"] = lacunary_json(*cls.evidence, digits);
  if (cls.tag != RadialLimitResult::Tag::Converges) {
    o.code = kNotConvergent;
    return o;
  }

  std::optional<HPComplex> closed;
  if (a.mode != "numeric") {
    closed = *cls.value;
    r["closed_form"] = complex_number(*closed, digits);
  }
  if (a.mode != "closed") {
    if (!doc.spec.has_polynomial_exponent()) throw InvalidArgument("numeric limits need a polynomial exponent");
    const ExtrapolationGrid grid = a.grid.empty() ? default_grid(doc.spec, xi) : parse_grid(a.grid, g.precision);
    const ExtrapolationResult ex = extrapolate_limit(doc.spec, xi, grid, a.fit_order);
    r["numeric"] = {{"value", complex_number(ex.estimate, digits)},
                    {"error_estimate", number(ex.error_estimate, 6)},
                    {"fit_order", ex.fit_order},
                    {"grid", grid_json(grid)}};
    if (closed) r["difference"] = number(abs(ex.estimate - *closed), 6);
  }
  return o;
}

Outcome cmd_asympt(const Globals& g, const AsymptArgs& a) {
  const SeriesDocument doc = load_document(a.spec, g.precision);
  if (!doc.spec.has_polynomial_exponent()) throw InvalidArgument("asymptotic expansions need a polynomial exponent");
  const SeriesSpec spec = effective_spec(doc);
  const int d = spec.polynomial().degree();
  const int W = a.order >= 0 ? a.order : default_expansion_order(d);
  const int m = a.em_depth >= 1 ? a.em_depth : kDefaultEulerDepth;
  const int digits = g.digits();

  Outcome o;
  o.inputs = {{"spec_file", a.spec}, {"document", document_json(doc)}, {"order", W}, {"em_depth", m}};

  const AsymptoticExpansion ex = series_expansion(spec, m, W, g.precision);
  json terms = json::array();
  for (const ExpansionTerm& t : ex.terms) {
    json term = {{"lattice", t.lattice},
                 {"exponent", exponent_string(t.lattice, d)},
                 {"coefficient", complex_number(t.coefficient, digits)}};
    if (t.exact) term["exact"] = t.exact->to_string(d, ex.a_d);
    terms.push_back(std::move(term));
  }
  json& r = o.results;
  r["degree"] = d;
  r["terms"] = terms;
  r["remainder_order"] = exponent_string(ex.remainder_order, d);
  if (ex.cancelled_leading) r["cancelled_leading"] = number(*ex.cancelled_leading, 6);

  if (a.verify) {
    const VerificationReport v = verify_expansion(spec, ex, parse_grid(a.verify_grid, g.precision).points());
    json points = json::array();
    for (const ResidualPoint& p : v.points) {
      points.push_back({{"x", number(p.x, 6)}, {"residual", number(p.residual, 6)},
                        {"noise_floor", number(p.noise_floor, 6)}});
    }
    r["verification"] = {{"points", points},
                         {"slope", v.slope ? json(number(*v.slope, 6)) : json(nullptr)},
                         {"expected_exponent", to_string(v.expected_exponent)},
                         {"consistent", v.consistent},
                         {"note", v.note}};
  }
  return o;
}

Outcome cmd_lacunary(const Globals& g, const LacunaryArgs& a) {
  const SeriesDocument doc = load_document(a.spec, g.precision);
  if (a.r_max < 1) throw InvalidArgument("--rmax must be at least 1");
  const HPReal base = [&] {
    if (!a.base.empty()) return HPReal::parse(a.base, g.precision);
    if (doc.spec.has_polynomial_exponent())
      throw InvalidArgument("lacunary analysis needs an exponential exponent or --base");
    return doc.spec.exponential().base();
  }();
  Outcome o;
  o.inputs = {{"spec_file", a.spec}, {"document", document_json(doc)}, {"rmax", a.r_max}};
  if (!a.base.empty()) o.inputs["base"] = a.base;
  o.results = lacunary_json(oscillation_report(doc.spec.coefficients, base, a.r_max, g.precision), g.digits());
  return o;
}

Outcome cmd_qint(const Globals& g, const QintArgs& a) {
  if (a.q.empty()) throw InvalidArgument("qint needs --q");
  if (a.c.empty() == a.pair.empty()) throw InvalidArgument("qint needs exactly one of --c and --pair");
  const Precision p = g.precision;
  const int digits = g.digits();
  const HPReal q = HPReal::parse(a.q, p);
  Outcome o;
  o.inputs = {{"q", a.q}};
  json& r = o.results;

  if (!a.c.empty()) {
    o.inputs["c"] = a.c;
    const HPReal c = HPReal::parse(a.c, p);
    const HPReal value = q_integral_power(c, q);
    const HPReal limit = 1L / (c + 1L);
    r = {{"value", number(value, digits)}, {"limit", number(limit, digits)},
         {"difference", number(abs(value - limit), 6)}};
    return o;
  }

  o.inputs["pair"] = a.pair;
  const auto [xs, ys] = split_pair(a.pair);
  const LemmaPair pair(PolynomialExponent::parse(xs), PolynomialExponent::parse(ys));
  const HPReal eps = a.eps.empty() ? power_of_two(-(p.bits / 2), p) : HPReal::parse(a.eps, p);
  o.inputs["eps"] = number(eps, 6);
  const LemmaSum s = lemma_sum(pair, q, eps);
  const HPReal limit(lemma_limit(pair), p);
  const HPReal slack = s.error_bound + s.quadrature_error + eps;
  r = {{"x", pair.x.polynomial().to_string()},
       {"y", pair.y.polynomial().to_string()},
       {"c", to_string(pair.c)},
       {"sum", number(s.sum, digits)},
       {"tail_sum", number(s.tail_sum, digits)},
       {"lower_int", number(s.lower_int, digits)},
       {"upper_int", number(s.upper_int, digits)},
       {"N", s.N},
       {"error_bound", number(s.error_bound, 6)},
       {"quadrature_error", number(s.quadrature_error, 6)},
       {"terms_used", s.terms_used},
       {"squeeze_holds", s.lower_int <= s.tail_sum + slack && s.tail_sum <= s.upper_int + slack},
       {"limit", {{"exact", to_string(lemma_limit(pair))}, {"value", number(limit, digits)}}},
       {"difference", number(abs(s.sum - limit), 6)}};
  return o;
}

}  // namespace qradial::cli::detail
