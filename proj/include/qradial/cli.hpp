#pragma once

// Command-line front end. Everything the `qradial` executable does goes
// through run(), so tests drive it in-process.
//
//   qradial [--precision BITS] [--json | --csv] [--out PATH] [--timing] <command> ...
//
//   limit    SPEC [--mode closed|numeric|both] [--grid XMIN,XMAX,COUNT] [--fit-order W]
//   asympt   SPEC [--order W] [--em-depth M] [--verify] [--verify-grid XMIN,XMAX,COUNT]
//   lacunary SPEC [--base A] [--rmax R]
//   qint     (--c C --q Q) | (--pair X,Y --q Q [--eps E])
//   plot     SPEC --what rectangles|convergence [--q Q] [--residue J] [--grid ...] --out STEM

#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "qradial/hp.hpp"
#include "qradial/radial.hpp"
#include "qradial/series.hpp"

namespace qradial::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,  ///< computation failed (budget, singular fit, evaluation)
  kInvalidSpec = 2,
  kNotConvergent = 3,
  kIoFailure = 4,
};

/// A series specification file:
///   {"coefficients": {"period": 2, "values": [["1", "0"], ["-1", "0"]]},
///    "exponent": {"type": "polynomial", "coefficients": ["0", "0", "1"]},
///    "root_of_unity": {"p": 1, "N": 6}}
/// Polynomial coefficients run a_0..a_d as exact rational strings. An
/// exponential exponent is {"type": "exponential", "base": "10"}.
struct SeriesDocument {
  SeriesSpec spec;
  std::optional<RootOfUnity> root;

  friend bool operator==(const SeriesDocument&, const SeriesDocument&) = default;
};

/// Throws InvalidArgument on any schema violation.
SeriesDocument parse_document(std::string_view json_text, Precision p);
/// Canonical JSON text; parse_document(serialize_document(d), p) == d at the
/// precision d was parsed with.
std::string serialize_document(const SeriesDocument& doc);

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qradial::cli
