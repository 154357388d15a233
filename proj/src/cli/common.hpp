#pragma once

#include <json.hpp>

#include <string>
#include <string_view>

#include "qradial/cli.hpp"
#include "qradial/errors.hpp"
#include "qradial/radial.hpp"

namespace qradial::cli::detail {

using json = nlohmann::json;

/// Reading the SPEC file or writing an output file failed.
class IoFailure : public Error {
 public:
  using Error::Error;
};

json document_json(const SeriesDocument& doc);
SeriesDocument document_from_json(const json& j, Precision p);

/// Numbers travel as decimal strings with an explicit digit count.
inline json number(const HPReal& x, int digits) { return (x == 0.0 ? abs(x) : x).to_string(digits); }
inline json complex_number(const HPComplex& z, int digits) {
  return json{{"re", number(z.re(), digits)}, {"im", number(z.im(), digits)}};
}

/// "XMIN,XMAX,COUNT".
ExtrapolationGrid parse_grid(std::string_view text, Precision p);
json grid_json(const ExtrapolationGrid& g);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

/// The series actually summed: C twisted by the root of unity when one is given.
SeriesSpec effective_spec(const SeriesDocument& doc);

struct Globals {
  Precision precision;
  bool csv = false;
  bool timing = false;
  std::string out;

  [[nodiscard]] int digits() const { return precision.decimal_digits(); }
};

/// What a command hands back to run(): the report body and the exit code.
struct Outcome {
  json inputs = json::object();
  json results = json::object();
  int code = kOk;
};

struct LimitArgs {
  std::string spec;
  std::string mode = "both";
  std::string grid;
  int fit_order = -1;
};
Outcome cmd_limit(const Globals& g, const LimitArgs& a);

struct AsymptArgs {
  std::string spec;
  int order = -1;
  int em_depth = -1;
  bool verify = false;
  std::string verify_grid = "1e-3,1e-2,6";
};
Outcome cmd_asympt(const Globals& g, const AsymptArgs& a);

struct LacunaryArgs {
  std::string spec;
  std::string base;
  int r_max = 8;
};
Outcome cmd_lacunary(const Globals& g, const LacunaryArgs& a);

struct QintArgs {
  std::string c;
  std::string pair;
  std::string q;
  std::string eps;
};
Outcome cmd_qint(const Globals& g, const QintArgs& a);

struct PlotArgs {
  std::string spec;
  std::string what;
  std::string q = "0.9";
  int residue = 0;
  int rows = 12;
  std::string grid = "1e-4,1e-1,16";
};
/// Writes <out>.csv and <out>.svg; the report lists them.
Outcome cmd_plot(const Globals& g, const PlotArgs& a);

/// Loads and parses a spec file: IoFailure when unreadable, InvalidArgument when malformed.
SeriesDocument load_document(const std::string& path, Precision p);

}  // namespace qradial::cli::detail
