#include "qradial/polynomial.hpp"

#include <cctype>

#include "qradial/errors.hpp"
#include "qradial/special.hpp"

namespace qradial {

RationalPolynomial::RationalPolynomial(std::vector<Rational> coefficients) : coeffs_(std::move(coefficients)) {
  normalize();
}

RationalPolynomial::RationalPolynomial(std::initializer_list<long> coefficients) {
  for (long c : coefficients) coeffs_.emplace_back(c);
  normalize();
}

void RationalPolynomial::normalize() {
  for (auto& c : coeffs_) c.canonicalize();
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

RationalPolynomial RationalPolynomial::monomial(const Rational& c, int exponent) {
  std::vector<Rational> coeffs(static_cast<std::size_t>(exponent) + 1, Rational(0));
  coeffs.back() = c;
  return RationalPolynomial(std::move(coeffs));
}

Rational RationalPolynomial::coefficient(int i) const {
  if (i < 0 || i > degree()) return 0;
  return coeffs_[static_cast<std::size_t>(i)];
}

bool RationalPolynomial::has_integer_coefficients() const {
  for (const auto& c : coeffs_) {
    if (c.get_den() != 1) return false;
  }
  return true;
}

Rational RationalPolynomial::operator()(const Rational& t) const {
  Rational acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * t + *it;
  return acc;
}

HPReal RationalPolynomial::operator()(const HPReal& t) const {
  HPReal acc(t.precision());
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc *= t;
    acc += HPReal(*it, t.precision());
  }
  return acc;
}

RationalPolynomial RationalPolynomial::derivative() const {
  if (degree() < 1) return {};
  std::vector<Rational> out;
  out.reserve(coeffs_.size() - 1);
  for (std::size_t i = 1; i < coeffs_.size(); ++i) out.emplace_back(coeffs_[i] * static_cast<long>(i));
  return RationalPolynomial(std::move(out));
}

RationalPolynomial RationalPolynomial::compose_affine(const Rational& scale, const Rational& shift) const {
  // Horner in the polynomial ring: acc = acc * (scale t + shift) + a_i.
  RationalPolynomial acc;
  const RationalPolynomial linear(std::vector<Rational>{shift, scale});
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc = acc * linear;
    acc += RationalPolynomial(std::vector<Rational>{*it});
  }
  return acc;
}

RationalPolynomial RationalPolynomial::forward_difference() const {
  return compose_affine(1, 1) - *this;
}

Rational RationalPolynomial::root_bound() const {
  if (is_zero()) throw InvalidArgument("root_bound of the zero polynomial");
  Rational worst = 0;
  for (int i = 0; i < degree(); ++i) {
    Rational ratio = abs(coeffs_[static_cast<std::size_t>(i)] / leading());
    if (ratio > worst) worst = ratio;
  }
  return worst + 1;
}

RationalPolynomial& RationalPolynomial::operator+=(const RationalPolynomial& rhs) {
  if (rhs.coeffs_.size() > coeffs_.size()) coeffs_.resize(rhs.coeffs_.size(), Rational(0));
  for (std::size_t i = 0; i < rhs.coeffs_.size(); ++i) coeffs_[i] += rhs.coeffs_[i];
  normalize();
  return *this;
}

RationalPolynomial& RationalPolynomial::operator-=(const RationalPolynomial& rhs) {
  if (rhs.coeffs_.size() > coeffs_.size()) coeffs_.resize(rhs.coeffs_.size(), Rational(0));
  for (std::size_t i = 0; i < rhs.coeffs_.size(); ++i) coeffs_[i] -= rhs.coeffs_[i];
  normalize();
  return *this;
}

RationalPolynomial& RationalPolynomial::operator*=(const Rational& rhs) {
  for (auto& c : coeffs_) c *= rhs;
  normalize();
  return *this;
}

RationalPolynomial operator*(const RationalPolynomial& a, const RationalPolynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Rational> out(a.coeffs_.size() + b.coeffs_.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) out[i + j] += a.coeffs_[i] * b.coeffs_[j];
  }
  return RationalPolynomial(std::move(out));
}

RationalPolynomial RationalPolynomial::interpolate(const std::vector<Rational>& values) {
  // Newton form on the nodes 0, 1, 2, ...: p(t) = sum_i (Delta^i p)(0) * binom(t, i).
  std::vector<Rational> diffs = values;
  RationalPolynomial result;
  RationalPolynomial falling({1});  // t (t-1) ... (t-i+1)
  for (std::size_t i = 0; i < values.size(); ++i) {
    Rational c = diffs[0] / Rational(factorial(static_cast<int>(i)));
    result += falling * c;
    falling = falling * RationalPolynomial(std::vector<Rational>{Rational(-static_cast<long>(i)), Rational(1)});
    for (std::size_t j = 0; j + 1 < diffs.size(); ++j) diffs[j] = diffs[j + 1] - diffs[j];
    if (!diffs.empty()) diffs.pop_back();
  }
  return result;
}

std::string RationalPolynomial::to_string(char variable) const {
  if (is_zero()) return "0";
  std::string out;
  for (int i = degree(); i >= 0; --i) {
    const Rational& c = coeffs_[static_cast<std::size_t>(i)];
    if (c == 0) continue;
    Rational mag = abs(c);
    if (out.empty()) {
      if (c < 0) out += "-";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    bool unit = mag == 1 && i > 0;
    if (!unit) {
      out += mag.get_str();
      if (i > 0 && mag.get_den() != 1) out += "*";
    }
    if (i > 0) out += variable;
    if (i > 1) out += "^" + std::to_string(i);
  }
  return out;
}

namespace {

class PolynomialParser {
 public:
  explicit PolynomialParser(std::string_view text) {
    for (char c : text) {
      if (!std::isspace(static_cast<unsigned char>(c))) text_.push_back(c);
    }
  }

  RationalPolynomial run() {
    if (text_.empty()) fail("empty polynomial");
    RationalPolynomial acc;
    bool first = true;
    while (pos_ < text_.size()) {
      Rational sign = 1;
      if (peek() == '+' || peek() == '-') {
        sign = peek() == '-' ? -1 : 1;
        ++pos_;
      } else if (!first) {
        fail("expected '+' or '-'");
      }
      acc += term() * sign;
      first = false;
    }
    return acc;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw InvalidArgument("cannot parse polynomial '" + text_ + "': " + why);
  }
  [[nodiscard]] char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  static bool is_variable(char c) { return c == 't' || c == 'n' || c == 'x'; }

  RationalPolynomial term() {
    Rational coeff = 1;
    bool have_coeff = false;
    if (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.') {
      std::size_t start = pos_;
      while (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.' || peek() == '/') ++pos_;
      coeff = parse_rational(std::string_view(text_).substr(start, pos_ - start));
      have_coeff = true;
      if (peek() == '*') ++pos_;
    }
    int exponent = 0;
    if (is_variable(peek())) {
      ++pos_;
      exponent = 1;
      if (peek() == '^') {
        ++pos_;
        std::size_t start = pos_;
        while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
        if (start == pos_) fail("missing exponent after '^'");
        exponent = std::stoi(text_.substr(start, pos_ - start));
      }
    } else if (!have_coeff) {
      fail("unexpected character '" + std::string(1, peek()) + "'");
    }
    return RationalPolynomial::monomial(coeff, exponent);
  }

  std::string text_;
  std::size_t pos_ = 0;
};

}  // namespace

RationalPolynomial RationalPolynomial::parse(std::string_view text) { return PolynomialParser(text).run(); }

}  // namespace qradial
