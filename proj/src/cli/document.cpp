#include <fstream>
#include <sstream>

#include "common.hpp"

namespace qradial::cli {

namespace detail {

namespace {

// A JSON string, or an integer literal; JSON floats are refused so nothing
// passes through a double on the way in.
std::string scalar_text(const json& v, const char* what) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  throw InvalidArgument(std::string(what) + " must be a string (decimals and rationals travel as text)");
}

const json& field(const json& obj, const char* key) {
  if (!obj.is_object()) throw InvalidArgument("expected a JSON object around '" + std::string(key) + "'");
  auto it = obj.find(key);
  if (it == obj.end()) throw InvalidArgument(std::string("missing field '") + key + "'");
  return *it;
}

long integer_field(const json& obj, const char* key) {
  const json& v = field(obj, key);
  if (!v.is_number_integer()) throw InvalidArgument(std::string("field '") + key + "' must be an integer");
  return v.get<long>();
}

}  // namespace

SeriesDocument document_from_json(const json& j, Precision p) {
  const json& coeffs = field(j, "coefficients");
  const long period = integer_field(coeffs, "period");
  const json& values = field(coeffs, "values");
  if (!values.is_array()) throw InvalidArgument("coefficients.values must be an array");
  if (period < 1) throw InvalidArgument("coefficient period must be at least 1");
  if (static_cast<long>(values.size()) != period)
    throw InvalidArgument("coefficients.values has " + std::to_string(values.size()) + " entries, period is " +
                          std::to_string(period));
  std::vector<HPComplex> cycle;
  for (const json& v : values) {
    if (!v.is_array() || v.size() != 2) throw InvalidArgument("each coefficient is a [re, im] pair");
    cycle.emplace_back(HPReal::parse(scalar_text(v[0], "coefficient"), p),
                       HPReal::parse(scalar_text(v[1], "coefficient"), p));
  }

  const json& exponent = field(j, "exponent");
  const json& type = field(exponent, "type");
  if (!type.is_string()) throw InvalidArgument("exponent.type must be a string");
  Exponent exp = [&]() -> Exponent {
    if (type == "polynomial") {
      const json& cs = field(exponent, "coefficients");
      if (!cs.is_array() || cs.empty()) throw InvalidArgument("exponent.coefficients must be a non-empty array");
      std::vector<Rational> poly;
      for (const json& c : cs) poly.push_back(parse_rational(scalar_text(c, "exponent coefficient")));
      return PolynomialExponent(RationalPolynomial(std::move(poly)));
    }
    if (type == "exponential") {
      return ExponentialExponent(HPReal::parse(scalar_text(field(exponent, "base"), "exponent base"), p));
    }
    throw InvalidArgument("exponent.type must be \"polynomial\" or \"exponential\"");
  }();

  std::optional<RootOfUnity> root;
  if (auto it = j.find("root_of_unity"); it != j.end() && !it->is_null()) {
    root = RootOfUnity(integer_field(*it, "p"), integer_field(*it, "N"));
  }
  return {SeriesSpec{PeriodicCoefficients(std::move(cycle)), std::move(exp)}, root};
}

json document_json(const SeriesDocument& doc) {
  json values = json::array();
  for (const auto& c : doc.spec.coefficients.values())
    values.push_back(json::array({c.re().to_exact_string(), c.im().to_exact_string()}));
  json exponent;
  if (doc.spec.has_polynomial_exponent()) {
    json cs = json::array();
    for (const auto& c : doc.spec.polynomial().polynomial().coefficients()) cs.push_back(to_string(c));
    exponent = {{"type", "polynomial"}, {"coefficients", cs}};
  } else {
    exponent = {{"type", "exponential"}, {"base", doc.spec.exponential().base().to_exact_string()}};
  }
  json out = {{"coefficients", {{"period", doc.spec.coefficients.period()}, {"values", values}}},
              {"exponent", exponent}};
  if (doc.root) out["root_of_unity"] = {{"p", doc.root->p()}, {"N", doc.root->N()}};
  return out;
}

ExtrapolationGrid parse_grid(std::string_view text, Precision p) {
  std::vector<std::string> parts;
  std::stringstream ss{std::string(text)};
  for (std::string item; std::getline(ss, item, ',');) parts.push_back(item);
  if (parts.size() != 3) throw InvalidArgument("grid must be XMIN,XMAX,COUNT");
  ExtrapolationGrid g{HPReal::parse(parts[0], p), HPReal::parse(parts[1], p), 0};
  try {
    std::size_t used = 0;
    g.count = std::stoi(parts[2], &used);
    if (used != parts[2].size()) throw InvalidArgument("");
  } catch (const std::exception&) {
    throw InvalidArgument("grid count must be an integer");
  }
  if (!(g.x_min > 0.0) || !(g.x_min < g.x_max) || g.count < 2)
    throw InvalidArgument("grid needs 0 < XMIN < XMAX and COUNT >= 2");
  return g;
}

json grid_json(const ExtrapolationGrid& g) {
  return {{"x_min", number(g.x_min, 6)}, {"x_max", number(g.x_max, 6)}, {"count", g.count}};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoFailure("error while reading '" + path + "'");
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoFailure("cannot write '" + path + "'");
  out << content;
  out.flush();
  if (!out) throw IoFailure("error while writing '" + path + "'");
}

SeriesSpec effective_spec(const SeriesDocument& doc) {
  if (!doc.root || doc.root->is_one()) return doc.spec;
  if (!doc.spec.has_polynomial_exponent())
    throw InvalidArgument("a root of unity other than 1 needs a polynomial exponent");
  const PolynomialExponent& s = doc.spec.polynomial();
  return SeriesSpec{twist(doc.spec.coefficients, s, *doc.root), s};
}

}  // namespace detail

SeriesDocument parse_document(std::string_view json_text, Precision p) {
  detail::json j;
  try {
    j = detail::json::parse(json_text);
  } catch (const detail::json::parse_error& e) {
    throw InvalidArgument(std::string("spec is not valid JSON: ") + e.what());
  }
  return detail::document_from_json(j, p);
}

std::string serialize_document(const SeriesDocument& doc) { return detail::document_json(doc).dump(2) + "\n"; }

}  // namespace qradial::cli
