#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "qradial/cli.hpp"
#include "qradial/errors.hpp"
#include "qradial/qintegral.hpp"
#include "qradial/radial.hpp"
#include "qradial/special.hpp"

namespace py = pybind11;
using namespace qradial;

namespace {

// Numbers cross the boundary as decimal strings so nothing is rounded to a double.
py::tuple complex_strings(const HPComplex& z) { return py::make_tuple(z.re().to_string(), z.im().to_string()); }

cli::SeriesDocument load(const std::string& document, long bits) { return cli::parse_document(document, Precision(bits)); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "High-precision radial limits of periodic q-series";

  // Translators run newest first, so the base class goes in before the subclass.
  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);

  m.def(
      "run",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code;
        {
          py::gil_scoped_release release;
          code = cli::run(args, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the command line in-process; returns (exit_code, stdout, stderr).");

  m.def(
      "normalize_document",
      [](const std::string& document, long bits) { return cli::serialize_document(load(document, bits)); },
      py::arg("document"), py::arg("precision") = Precision::kDefaultBits);

  m.def(
      "closed_form_limit",
      [](const std::string& document, long bits) {
        const auto doc = load(document, bits);
        const RadialLimitResult r = classify_radial_limit(doc.spec, doc.root.value_or(RootOfUnity()));
        if (!r.value) throw InvalidArgument(std::string("limit does not exist: ") + to_string(r.tag));
        return complex_strings(*r.value);
      },
      py::arg("document"), py::arg("precision") = Precision::kDefaultBits);

  m.def(
      "classification",
      [](const std::string& document, long bits) {
        const auto doc = load(document, bits);
        return std::string(to_string(classify_radial_limit(doc.spec, doc.root.value_or(RootOfUnity())).tag));
      },
      py::arg("document"), py::arg("precision") = Precision::kDefaultBits);

  m.def(
      "evaluate_at",
      [](const std::string& document, const std::string& x, const std::string& eps, long bits) {
        const Precision p(bits);
        const auto doc = load(document, bits);
        const Evaluation e = evaluate_at(doc.spec, HPReal::parse(x, p), HPReal::parse(eps, p));
        return py::make_tuple(complex_strings(e.value), e.tail_bound.to_string(6), e.terms_used);
      },
      py::arg("document"), py::arg("x"), py::arg("eps"), py::arg("precision") = Precision::kDefaultBits,
      "Series value at q = exp(-x); returns ((re, im), tail_bound, terms_used).");

  m.def(
      "q_integral_power",
      [](const std::string& c, const std::string& q, long bits) {
        const Precision p(bits);
        return q_integral_power(HPReal::parse(c, p), HPReal::parse(q, p)).to_string();
      },
      py::arg("c"), py::arg("q"), py::arg("precision") = Precision::kDefaultBits);

  m.def(
      "lemma_limit",
      [](const std::string& x, const std::string& y) {
        return to_string(lemma_limit(LemmaPair(PolynomialExponent::parse(x), PolynomialExponent::parse(y))));
      },
      py::arg("x"), py::arg("y"));

  m.def(
      "bernoulli",
      [](int n_max) {
        std::vector<std::string> out;
        for (const Rational& b : bernoulli_numbers(n_max)) out.push_back(to_string(b));
        return out;
      },
      py::arg("n_max"));
}
