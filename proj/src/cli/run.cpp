#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <functional>

#include "common.hpp"

namespace qradial::cli {

namespace {

using detail::json;

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

// One "path,value" row per leaf; object keys come out sorted, array entries by index.
void flatten(const json& j, const std::string& path, std::string& out) {
  if (j.is_object() || j.is_array()) {
    std::size_t i = 0;
    for (auto it = j.begin(); it != j.end(); ++it, ++i) {
      const std::string key = j.is_object() ? it.key() : std::to_string(i);
      flatten(*it, path.empty() ? key : path + "." + key, out);
    }
    return;
  }
  out += csv_cell(path) + "," + csv_cell(j.is_string() ? j.get<std::string>() : j.dump()) + "\n";
}

std::string render(const json& report, bool csv) {
  if (!csv) return report.dump(2) + "\n";
  std::string out = "path,value\n";
  flatten(report, "", out);
  return out;
}

json base_report(const std::string& command, const detail::Globals& g) {
  return {{"schema", "1"},
          {"command", command},
          {"precision", {{"bits", g.precision.bits}, {"digits", g.digits()}}}};
}

const char* error_kind(int code) {
  switch (code) {
    case kInvalidSpec: return "invalid_spec";
    case kIoFailure: return "io_failure";
    default: return "computation_failed";
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"High-precision radial limits of periodic q-series", "qradial"};
  app.fallthrough();
  app.require_subcommand(1, 1);

  detail::Globals g;
  long bits = Precision::kDefaultBits;
  app.add_option("--precision", bits, "working precision in bits")->check(CLI::Range(32L, 1L << 20));
  auto* json_flag = app.add_flag("--json", "JSON report (default)");
  app.add_flag("--csv", g.csv, "flatten the report into path,value rows")->excludes(json_flag);
  app.add_option("--out", g.out, "report file; for plot, the stem of the .csv/.svg pair");
  app.add_flag("--timing", g.timing, "include wall time in the report");

  detail::LimitArgs limit;
  auto* limit_cmd = app.add_subcommand("limit", "radial limit at 1 or a root of unity");
  limit_cmd->add_option("spec", limit.spec, "series document")->required();
  limit_cmd->add_option("--mode", limit.mode, "closed, numeric or both")->check(CLI::IsMember({"closed", "numeric", "both"}));
  limit_cmd->add_option("--grid", limit.grid, "XMIN,XMAX,COUNT");
  limit_cmd->add_option("--fit-order", limit.fit_order, "highest power x^{w/d} in the fit");

  detail::AsymptArgs asympt;
  auto* asympt_cmd = app.add_subcommand("asympt", "asymptotic expansion in x = -log q");
  asympt_cmd->add_option("spec", asympt.spec, "series document")->required();
  asympt_cmd->add_option("--order", asympt.order, "highest lattice index W");
  asympt_cmd->add_option("--em-depth", asympt.em_depth, "Euler summation depth m");
  asympt_cmd->add_flag("--verify", asympt.verify, "compare against the series on a grid");
  asympt_cmd->add_option("--verify-grid", asympt.verify_grid, "XMIN,XMAX,COUNT");

  detail::LacunaryArgs lacunary;
  auto* lacunary_cmd = app.add_subcommand("lacunary", "oscillation of sum C(n) q^{a^n}");
  lacunary_cmd->add_option("spec", lacunary.spec, "series document")->required();
  lacunary_cmd->add_option("--base", lacunary.base, "exponent base a, overriding the document");
  lacunary_cmd->add_option("--rmax", lacunary.r_max, "length of the oscillation sequences");

  detail::QintArgs qint;
  auto* qint_cmd = app.add_subcommand("qint", "q-integrals and rectangle sums");
  qint_cmd->add_option("--c", qint.c, "exponent c of x^c");
  qint_cmd->add_option("--pair", qint.pair, "X,Y polynomials in t");
  qint_cmd->add_option("--q", qint.q, "0 < q < 1");
  qint_cmd->add_option("--eps", qint.eps, "tolerance for --pair");

  detail::PlotArgs plot;
  auto* plot_cmd = app.add_subcommand("plot", "rectangle and convergence data with SVG");
  plot_cmd->add_option("spec", plot.spec, "series document")->required();
  plot_cmd->add_option("--what", plot.what, "rectangles or convergence")
      ->required()
      ->check(CLI::IsMember({"rectangles", "convergence"}));
  plot_cmd->add_option("--q", plot.q, "q for rectangles");
  plot_cmd->add_option("--residue", plot.residue, "residue j");
  plot_cmd->add_option("--rows", plot.rows, "number of rectangles");
  plot_cmd->add_option("--grid", plot.grid, "XMIN,XMAX,COUNT for convergence");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInvalidSpec;
  }
  g.precision = Precision(bits);

  std::string command;
  std::function<detail::Outcome()> body;
  if (limit_cmd->parsed()) {
    command = "limit";
    body = [&] { return detail::cmd_limit(g, limit); };
  } else if (asympt_cmd->parsed()) {
    command = "asympt";
    body = [&] { return detail::cmd_asympt(g, asympt); };
  } else if (lacunary_cmd->parsed()) {
    command = "lacunary";
    body = [&] { return detail::cmd_lacunary(g, lacunary); };
  } else if (qint_cmd->parsed()) {
    command = "qint";
    body = [&] { return detail::cmd_qint(g, qint); };
  } else {
    command = "plot";
    body = [&] { return detail::cmd_plot(g, plot); };
  }
  // plot uses --out as its file stem; the report itself goes to the stream.
  const bool report_to_file = !g.out.empty() && command != "plot";

  json report = base_report(command, g);
  int code = kOk;
  std::string message;
  try {
    const auto start = std::chrono::steady_clock::now();
    detail::Outcome o = body();
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    report["inputs"] = std::move(o.inputs);
    report["results"] = std::move(o.results);
    if (g.timing) report["wall_time_seconds"] = elapsed.count();
    code = o.code;
    if (code == kNotConvergent)
      message = "limit does not converge: " + report["results"]["classification"].get<std::string>();
  } catch (const detail::IoFailure& e) {
    code = kIoFailure;
    message = e.what();
  } catch (const InvalidArgument& e) {
    code = kInvalidSpec;
    message = e.what();
  } catch (const std::exception& e) {
    code = kFailure;
    message = e.what();
  }
  report["exit_code"] = code;
  if (code != kOk && code != kNotConvergent) report["error"] = {{"kind", error_kind(code)}, {"message", message}};
  if (!message.empty()) err << "qradial " << command << ": " << message << "\n";

  const std::string text = render(report, g.csv);
  if (report_to_file && code != kIoFailure) {
    try {
      detail::write_file(g.out, text);
      return code;
    } catch (const detail::IoFailure& e) {
      err << "qradial " << command << ": " << e.what() << "\n";
      report["exit_code"] = kIoFailure;
      report["error"] = {{"kind", error_kind(kIoFailure)}, {"message", e.what()}};
      out << render(report, g.csv);
      return kIoFailure;
    }
  }
  out << text;
  return code;
}

}  // namespace qradial::cli
