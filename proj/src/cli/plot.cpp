#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>

#include "common.hpp"
#include "qradial/lacunary.hpp"
#include "qradial/qintegral.hpp"

namespace qradial::cli::detail {

namespace {

// Static SVG on a fixed 640x480 canvas; data coordinates map linearly into
// the plot box.
class Svg {
 public:
  Svg(double x0, double x1, double y0, double y1) : x0_(x0), x1_(x1), y0_(y0), y1_(y1) {
    body_ << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << kWidth - kLeft - kRight
          << "\" height=\"" << kHeight - kTop - kBottom << "\" fill=\"none\" stroke=\"#444\"/>\n";
  }

  void rect(double xa, double xb, double ya, double yb, const char* fill) {
    const double left = px(std::min(xa, xb));
    const double right = px(std::max(xa, xb));
    const double top = py(std::max(ya, yb));
    const double bottom = py(std::min(ya, yb));
    body_ << "<rect x=\"" << fmt(left) << "\" y=\"" << fmt(top) << "\" width=\"" << fmt(right - left)
          << "\" height=\"" << fmt(bottom - top) << "\" fill=\"" << fill << "\" stroke=\"#225\" stroke-width=\"0.5\"/>\n";
  }

  void polyline(const std::vector<std::pair<double, double>>& pts, const char* colour) {
    if (pts.size() < 2) return;
    body_ << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& [x, y] : pts) body_ << fmt(px(x)) << ',' << fmt(py(y)) << ' ';
    body_ << "\"/>\n";
  }

  void label(double x, double y, const std::string& text) {
    body_ << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(y) << "\" font-family=\"sans-serif\" font-size=\"12\">"
          << text << "</text>\n";
  }

  void axis_labels(const std::string& x, const std::string& y) {
    label(kWidth / 2.0 - 40, kHeight - 12, x);
    label(8, kTop - 10, y);
    label(kLeft - 4, kHeight - kBottom + 16, fmt(x0_));
    label(kWidth - kRight - 30, kHeight - kBottom + 16, fmt(x1_));
    label(4, kHeight - kBottom, fmt(y0_));
    label(4, kTop + 10, fmt(y1_));
  }

  [[nodiscard]] std::string str() const {
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << body_.str() << "</svg>\n";
    return out.str();
  }

 private:
  static constexpr int kWidth = 640, kHeight = 480, kLeft = 60, kRight = 20, kTop = 30, kBottom = 40;

  [[nodiscard]] double px(double x) const { return kLeft + (x - x0_) / (x1_ - x0_) * (kWidth - kLeft - kRight); }
  [[nodiscard]] double py(double y) const {
    return kHeight - kBottom - (y - y0_) / (y1_ - y0_) * (kHeight - kTop - kBottom);
  }
  static std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
  }

  double x0_, x1_, y0_, y1_;
  std::ostringstream body_;
};

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  [[nodiscard]] std::string csv() const {
    std::ostringstream out;
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
      out << '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
    return out.str();
  }
};

struct Rectangle {
  HPReal x_left, x_right, height;
};

std::vector<std::pair<double, double>> sample_curve(int count, const std::function<std::pair<double, double>(double)>& f,
                                                    double t0, double t1) {
  std::vector<std::pair<double, double>> out;
  for (int i = 0; i <= count; ++i) {
    const auto pt = f(t0 + (t1 - t0) * i / count);
    if (pt.first >= 0 && pt.first <= 1 && pt.second >= 0 && pt.second <= 1) out.push_back(pt);
  }
  return out;
}

void draw_rectangles(Svg& svg, const std::vector<Rectangle>& rects) {
  for (const auto& r : rects)
    svg.rect(r.x_left.to_double(), r.x_right.to_double(), 0.0, r.height.to_double(), "#9ecae1");
}

json rectangle_csv(Table& t, const std::vector<Rectangle>& rects, int digits) {
  t.header = {"n", "x_left", "x_right", "height"};
  for (std::size_t n = 0; n < rects.size(); ++n) {
    t.rows.push_back({std::to_string(n), rects[n].x_left.to_string(digits), rects[n].x_right.to_string(digits),
                      rects[n].height.to_string(digits)});
  }
  return static_cast<int>(rects.size());
}

}  // namespace

Outcome cmd_plot(const Globals& g, const PlotArgs& a) {
  if (a.what != "rectangles" && a.what != "convergence")
    throw InvalidArgument("--what must be rectangles or convergence");
  if (g.out.empty()) throw InvalidArgument("plot needs --out STEM");
  const SeriesDocument doc = load_document(a.spec, g.precision);
  const Precision p = g.precision;
  const int digits = g.digits();

  Outcome o;
  o.inputs = {{"spec_file", a.spec}, {"document", document_json(doc)}, {"what", a.what}};
  Table table;
  std::string svg_text;
  json& r = o.results;

  if (a.what == "rectangles") {
    if (a.rows < 1) throw InvalidArgument("--rows must be at least 1");
    const HPReal q = HPReal::parse(a.q, p);
    if (!(q > 0.0) || !(q < 1.0)) throw InvalidArgument("--q must lie in (0, 1)");
    const HPReal xi = -log(q);
    o.inputs["q"] = a.q;
    o.inputs["residue"] = a.residue;
    o.inputs["rows"] = a.rows;
    std::vector<Rectangle> rects;
    Svg svg(0, 1, 0, 1);

    if (!doc.spec.has_polynomial_exponent()) {
      // Lacunary: Q = q^{X_j}, corners (Q^{a^{nk+k}}, Q^{a^{nk}}), height Q^{a^{nk} M}.
      if (doc.root && !doc.root->is_one()) throw InvalidArgument("exponential exponents only support xi = 1");
      const HPReal& base = doc.spec.exponential().base();
      const int k = static_cast<int>(doc.spec.coefficients.period());
      const Slopes sl = slopes(base, k, a.residue);
      const HPReal xq = xi * sl.x_scale;
      for (int n = 0; n < a.rows; ++n) {
        const HPReal right_exp = pow(base, HPReal(static_cast<long>(n) * k, p));
        const HPReal left_exp = right_exp * pow(base, HPReal(k, p));
        rects.push_back({exp(-xq * left_exp), exp(-xq * right_exp), exp(-xq * right_exp * sl.M)});
      }
      r["case"] = "lacunary";
      r["M"] = number(sl.M, digits);
      r["m"] = number(sl.m, digits);
      r["x_scale"] = number(sl.x_scale, digits);
      const double M = sl.M.to_double(), m = sl.m.to_double();
      draw_rectangles(svg, rects);
      svg.polyline(sample_curve(400, [M](double x) { return std::pair{x, std::pow(x, M)}; }, 0, 1), "#d62728");
      svg.polyline(sample_curve(400, [m](double x) { return std::pair{x, std::pow(x, m)}; }, 0, 1), "#2ca02c");
      svg.axis_labels("x", "y;  red y = x^M, green y = x^m");
    } else {
      // Polynomial: the residue-j pair of the mean-zero decomposition.
      const SeriesSpec spec = effective_spec(doc);
      const int k = static_cast<int>(spec.coefficients.period());
      const LemmaPair pair = decomposition_pair(spec.polynomial(), k, a.residue);
      auto qpow = [&](const Rational& e) { return exp(-xi * HPReal(e, p)); };
      for (int n = 0; n < a.rows; ++n) {
        const auto un = static_cast<std::uint64_t>(n);
        rects.push_back({qpow(pair.x(un + 1)), qpow(pair.x(un)), qpow(pair.y(un))});
      }
      r["case"] = "polynomial";
      r["x"] = pair.x.polynomial().to_string();
      r["y"] = pair.y.polynomial().to_string();
      r["limit"] = to_string(lemma_limit(pair));
      const RationalPolynomial& X = pair.x.polynomial();
      const RationalPolynomial& Y = pair.y.polynomial();
      const double xd = xi.to_double();
      auto at = [](const RationalPolynomial& poly, double t) {
        double v = 0;
        for (auto it = poly.coefficients().rbegin(); it != poly.coefficients().rend(); ++it) v = v * t + it->get_d();
        return v;
      };
      // Run t until q^{x(t)} is negligible.
      double t_end = 1;
      while (xd * at(X, t_end) < 40 && t_end < 1e9) t_end *= 2;
      const double t_start = static_cast<double>(pair.increasing_from());
      svg.polyline(sample_curve(800, [&](double t) { return std::pair{std::exp(-xd * at(X, t)), std::exp(-xd * at(Y, t))}; },
                                t_start, t_end),
                   "#d62728");
      svg.polyline(sample_curve(800, [&](double t) {
                     return std::pair{std::exp(-xd * at(X, t)), std::exp(-xd * at(Y, t - 1))};
                   }, t_start, t_end),
                   "#2ca02c");
      draw_rectangles(svg, rects);
      svg.axis_labels("q^x(t)", "q^y;  red phi: y(t), green psi: y(t-1)");
    }
    r["rows"] = rectangle_csv(table, rects, digits);
    svg_text = svg.str();
  } else {
    const SeriesSpec spec = effective_spec(doc);
    const ExtrapolationGrid grid = parse_grid(a.grid, p);
    std::vector<HPReal> xs = grid.points();
    std::reverse(xs.begin(), xs.end());
    const HPReal eps = power_of_two(-(p.bits / 2), p);
    o.inputs["grid"] = grid_json(grid);
    table.header = {"x", "re", "im"};
    std::vector<std::pair<double, double>> re_pts, im_pts;
    double lo = 0, hi = 0;
    for (const HPReal& x : xs) {
      const Evaluation e = evaluate_at(spec, x, eps);
      table.rows.push_back({x.to_string(digits), e.value.re().to_string(digits), e.value.im().to_string(digits)});
      const double lx = std::log10(x.to_double());
      re_pts.emplace_back(lx, e.value.re().to_double());
      im_pts.emplace_back(lx, e.value.im().to_double());
      for (double v : {re_pts.back().second, im_pts.back().second}) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
    if (hi - lo < 1e-12) hi = lo + 1;
    const double pad = 0.05 * (hi - lo);
    Svg svg(re_pts.back().first, re_pts.front().first, lo - pad, hi + pad);
    svg.polyline(re_pts, "#1f77b4");
    svg.polyline(im_pts, "#ff7f0e");
    svg.axis_labels("log10 x", "blue Re, orange Im");
    svg_text = svg.str();
    r["rows"] = static_cast<int>(table.rows.size());
    r["final"] = {{"x", table.rows.back()[0]}, {"re", table.rows.back()[1]}, {"im", table.rows.back()[2]}};
  }

  const std::string csv_path = g.out + ".csv";
  const std::string svg_path = g.out + ".svg";
  write_file(csv_path, table.csv());
  write_file(svg_path, svg_text);
  r["files"] = {{"csv", csv_path}, {"svg", svg_path}};
  return o;
}

}  // namespace qradial::cli::detail
