#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "qradial/cli.hpp"
#include "qradial/errors.hpp"

using namespace qradial;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const Precision P(256);

struct Result {
  int code;
  std::string out;
  std::string err;
  json report() const { return json::parse(out); }
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string spec(const char* name) { return std::string(QRADIAL_SPEC_DIR) + "/" + name; }

fs::path scratch() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("qradial_cli_test_" + std::to_string(std::random_device{}()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string write_temp(const std::string& name, const std::string& content) {
  const fs::path p = scratch() / name;
  std::ofstream(p) << content;
  return p.string();
}

HPReal num(const json& j) { return HPReal::parse(j.get<std::string>(), P); }

std::vector<std::vector<std::string>> read_csv(const std::string& path) {
  std::ifstream in(path);
  std::vector<std::vector<std::string>> rows;
  for (std::string line; std::getline(in, line);) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_CASE("document round trip") {
  SUBCASE("exact rationals are preserved and canonicalized") {
    const auto doc = cli::parse_document(R"({"coefficients": {"period": 3, "values": [["1/3", "0"], ["-2/6", "0.25"], [0, "0"]]},
      "exponent": {"type": "polynomial", "coefficients": ["1/2", "-4/6", 3]},
      "root_of_unity": {"p": 2, "N": 6}})", P);
    CHECK(doc.spec.polynomial().polynomial().coefficients()[1] == ratio(-2, 3));
    CHECK(doc.root->N() == 3);
    const std::string text = cli::serialize_document(doc);
    CHECK(cli::parse_document(text, P) == doc);
    CHECK(cli::serialize_document(cli::parse_document(text, P)) == text);
    CHECK(text.find("\"-2/3\"") != std::string::npos);
  }
  SUBCASE("exponential base") {
    const auto doc = cli::parse_document(R"({"coefficients": {"period": 2, "values": [["1", "0"], ["-1", "0"]]},
      "exponent": {"type": "exponential", "base": "1.1"}})", P);
    CHECK(cli::parse_document(cli::serialize_document(doc), P) == doc);
    CHECK(!doc.root);
  }
  SUBCASE("property: random documents") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> small(-9, 9), period(1, 6), degree(1, 4), digits(1, 30);
    auto decimal = [&] {
      std::string s = std::to_string(small(rng)) + ".";
      for (int i = digits(rng); i > 0; --i) s += static_cast<char>('0' + (rng() % 10));
      return s;
    };
    for (int trial = 0; trial < 60; ++trial) {
      json j;
      const int k = period(rng);
      json values = json::array();
      for (int i = 0; i < k; ++i) values.push_back({decimal(), std::to_string(small(rng)) + "/" + std::to_string(1 + rng() % 7)});
      json cs = json::array();
      const int d = degree(rng);
      for (int i = 0; i < d; ++i) cs.push_back(std::to_string(small(rng)) + "/" + std::to_string(1 + rng() % 12));
      cs.push_back(std::to_string(1 + rng() % 9) + "/" + std::to_string(1 + rng() % 5));
      j["coefficients"] = {{"period", k}, {"values", values}};
      j["exponent"] = {{"type", "polynomial"}, {"coefficients", cs}};
      if (trial % 2) j["root_of_unity"] = {{"p", static_cast<long>(rng() % 12)}, {"N", static_cast<long>(1 + rng() % 12)}};
      const auto doc = cli::parse_document(j.dump(), P);
      const std::string text = cli::serialize_document(doc);
      CAPTURE(text);
      CHECK(cli::parse_document(text, P) == doc);
    }
  }
}

TEST_CASE("document schema errors") {
  const char* bad[] = {
      R"({"coefficients": {"period": 0, "values": []}, "exponent": {"type": "polynomial", "coefficients": ["0", "1"]}})",
      R"({"coefficients": {"period": 2, "values": [["1", "0"]]}, "exponent": {"type": "polynomial", "coefficients": ["0", "1"]}})",
      R"({"coefficients": {"period": 1, "values": [[0.5, "0"]]}, "exponent": {"type": "polynomial", "coefficients": ["0", "1"]}})",
      R"({"coefficients": {"period": 1, "values": [["1"]]}, "exponent": {"type": "polynomial", "coefficients": ["0", "1"]}})",
      R"({"coefficients": {"period": 1, "values": [["1", "0"]]}, "exponent": {"type": "polynomial", "coefficients": ["0", "-1"]}})",
      R"({"coefficients": {"period": 1, "values": [["1", "0"]]}, "exponent": {"type": "polynomial", "coefficients": ["1"]}})",
      R"({"coefficients": {"period": 1, "values": [["1", "0"]]}, "exponent": {"type": "polynomial", "coefficients": ["0", "x"]}})",
      R"({"coefficients": {"period": 1, "values": [["1", "0"]]}, "exponent": {"type": "cubic"}})",
      R"({"coefficients": {"period": 1, "values": [["1", "0"]]}, "exponent": {"type": "exponential", "base": "0.5"}})",
      R"({"coefficients": {"period": 1, "values": [["1", "0"]]}})",
      R"({"coefficients": {"period": 1, "values": [["1", "0"]]}, "exponent": {"type": "polynomial", "coefficients": ["0", "1"]},
          "root_of_unity": {"p": 1, "N": 0}})",
      R"([1, 2])",
      R"({"coefficients": )",
  };
  for (const char* text : bad) {
    const std::string doc = text;
    CAPTURE(doc);
    CHECK_THROWS_AS(cli::parse_document(text, P), InvalidArgument);
  }
}

TEST_CASE("exit code contract") {
  SUBCASE("0 on success") { CHECK(run({"limit", spec("alternating_n2.json")}).code == cli::kOk); }
  SUBCASE("2 for an empty period") {
    const std::string path = write_temp("empty.json", R"({"coefficients": {"period": 0, "values": []},
      "exponent": {"type": "polynomial", "coefficients": ["0", "1"]}})");
    const Result r = run({"limit", path});
    CHECK(r.code == cli::kInvalidSpec);
    CHECK(r.report()["error"]["kind"] == "invalid_spec");
    CHECK(r.report()["schema"] == "1");
  }
  SUBCASE("2 for a nonzero mean in lacunary") {
    CHECK(run({"lacunary", spec("lacunary_nonzero_mean.json")}).code == cli::kInvalidSpec);
  }
  SUBCASE("2 for bad command lines") {
    CHECK(run({}).code == cli::kInvalidSpec);
    CHECK(run({"limit"}).code == cli::kInvalidSpec);
    CHECK(run({"limit", spec("alternating_n2.json"), "--mode", "sideways"}).code == cli::kInvalidSpec);
    CHECK(run({"--json", "--csv", "limit", spec("alternating_n2.json")}).code == cli::kInvalidSpec);
    CHECK(run({"qint", "--q", "0.5"}).code == cli::kInvalidSpec);
    CHECK(run({"qint", "--c", "1", "--q", "1.5"}).code == cli::kInvalidSpec);
    CHECK(run({"asympt", spec("lacunary_10.json")}).code == cli::kInvalidSpec);
  }
  SUBCASE("3 when the limit does not converge, classification in the report") {
    for (const char* mode : {"closed", "numeric", "both"}) {
      const Result r = run({"--precision", "128", "limit", spec("alternating_n2_sixth_root.json"), "--mode", mode});
      CHECK(r.code == cli::kNotConvergent);
      CHECK(r.report()["results"]["classification"] == "Diverges");
      CHECK(r.report()["results"]["leading_term"]["exponent"] == "-1/2");
    }
    CHECK(run({"limit", spec("lacunary_10.json")}).code == cli::kNotConvergent);
  }
  SUBCASE("4 for unreadable input and unwritable output") {
    CHECK(run({"limit", (scratch() / "missing.json").string()}).code == cli::kIoFailure);
    const std::string nowhere = (scratch() / "no" / "such" / "dir" / "report.json").string();
    const Result r = run({"--out", nowhere, "limit", spec("alternating_n2.json")});
    CHECK(r.code == cli::kIoFailure);
    CHECK(r.report()["error"]["kind"] == "io_failure");
    CHECK(run({"plot", spec("alternating_n2.json"), "--what", "convergence", "--out", nowhere}).code ==
          cli::kIoFailure);
  }
  SUBCASE("help exits 0") {
    const Result r = run({"--help"});
    CHECK(r.code == cli::kOk);
    CHECK(r.out.find("limit") != std::string::npos);
  }
}

TEST_CASE("reports are deterministic with sorted keys") {
  for (const std::vector<std::string>& args :
       {std::vector<std::string>{"limit", spec("alternating_n2.json")},
        std::vector<std::string>{"asympt", spec("geometric.json"), "--verify"},
        std::vector<std::string>{"--precision", "128", "lacunary", spec("lacunary_10.json"), "--rmax", "4"},
        std::vector<std::string>{"qint", "--pair", "t,2t", "--q", "0.9"}}) {
    const Result a = run(args);
    const Result b = run(args);
    CHECK(a.code == cli::kOk);
    CHECK(a.out == b.out);
    const json j = a.report();
    CHECK(j["schema"] == "1");
    CHECK(j.dump(2) + "\n" == a.out);
    CHECK(!j.contains("wall_time_seconds"));
  }
  const json timed = run({"--timing", "qint", "--c", "1", "--q", "0.5"}).report();
  CHECK(timed.contains("wall_time_seconds"));
}

TEST_CASE("--out and --csv") {
  const std::string path = (scratch() / "report.json").string();
  const Result to_stdout = run({"limit", spec("alternating_n2.json"), "--mode", "closed"});
  const Result to_file = run({"--out", path, "limit", spec("alternating_n2.json"), "--mode", "closed"});
  CHECK(to_file.code == cli::kOk);
  CHECK(to_file.out.empty());
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(buf.str() == to_stdout.out);

  const Result csv = run({"--csv", "limit", spec("alternating_n2.json"), "--mode", "closed"});
  CHECK(csv.out.rfind("path,value\n", 0) == 0);
  CHECK(csv.out.find("\nschema,1\n") != std::string::npos);
  CHECK(csv.out.find("\nresults.closed_form.re,5.0") != std::string::npos);
}

TEST_CASE("limit examples") {
  const json r = run({"limit", spec("alternating_n2.json"), "--mode", "both"}).report()["results"];
  CHECK(r["classification"] == "Converges");
  CHECK(num(r["closed_form"]["re"]) == 0.5);
  CHECK(abs(num(r["numeric"]["value"]["re"]) - HPReal(ratio(1, 2), P)) <= 1e-6);
  CHECK(num(r["difference"]) <= 1e-6);

  const json g = run({"limit", spec("alternating_n2.json"), "--grid", "1e-3,1e-2,8", "--fit-order", "3", "--mode",
                      "numeric"}).report()["results"];
  CHECK(g["numeric"]["grid"]["count"] == 8);
  CHECK(g["numeric"]["fit_order"] == 3);
  CHECK(!g.contains("closed_form"));
}

TEST_CASE("asympt examples") {
  SUBCASE("geometric, W = 3") {
    const json r = run({"asympt", spec("geometric.json"), "--order", "3"}).report()["results"];
    const json& t = r["terms"];
    REQUIRE(t.size() == 4);
    const char* exact[] = {"1/2", "1/4", "0", "-1/48"};
    const HPReal values[] = {HPReal(ratio(1, 2), P), HPReal(ratio(1, 4), P), HPReal(P), HPReal(ratio(-1, 48), P)};
    for (int i = 0; i < 4; ++i) {
      CHECK(t[i]["exponent"] == std::to_string(i));
      CHECK(t[i]["exact"] == exact[i]);
      CHECK(abs(num(t[i]["coefficient"]["re"]) - values[i]) <= power_of_two(-240, P));
    }
  }
  SUBCASE("constant-coefficient n^2 leads with sqrt(pi)/2 x^{-1/2}") {
    const json t = run({"asympt", spec("theta.json")}).report()["results"]["terms"][0];
    CHECK(t["exponent"] == "-1/2");
    CHECK(abs(num(t["coefficient"]["re"]) - sqrt(pi(P)) / 2L) <= power_of_two(-240, P));
  }
  SUBCASE("--verify on the geometric spec") {
    const json v = run({"asympt", spec("geometric.json"), "--order", "3", "--verify"}).report()["results"]["verification"];
    CHECK(v["consistent"] == true);
    CHECK(num(v["slope"]) >= 4.0);
  }
  SUBCASE("a root of unity expands the twisted series") {
    const json r = run({"asympt", spec("alternating_n2_sixth_root.json")}).report()["results"];
    // mean -i/sqrt(3) times sqrt(pi)/2
    const HPReal expected = -sqrt(pi(P)) / (2L * sqrt(HPReal(3L, P)));
    CHECK(r["terms"][0]["exponent"] == "-1/2");
    CHECK(abs(num(r["terms"][0]["coefficient"]["im"]) - expected) <= power_of_two(-200, P));
  }
}

TEST_CASE("lacunary examples") {
  const json r10 = run({"lacunary", spec("lacunary_10.json")}).report()["results"];
  CHECK(r10["per_residue"][0]["inequality_holds"] == true);
  CHECK(r10["verdict"] == "oscillates");
  const Result r11 = run({"lacunary", spec("lacunary_10.json"), "--base", "1.1"});
  CHECK(r11.code == cli::kOk);
  CHECK(r11.report()["results"]["per_residue"][0]["inequality_holds"] == false);
  CHECK(r11.report()["results"]["verdict"] == "inconclusive");
  CHECK(run({"lacunary", spec("alternating_n2.json")}).code == cli::kInvalidSpec);
  CHECK(run({"lacunary", spec("alternating_n2.json"), "--base", "10"}).code == cli::kOk);
}

// Registered as its own ctest entry; see tests/CMakeLists.txt.
TEST_CASE("lacunary a = 10 cluster separation above 1/2") {
  const json r = run({"lacunary", spec("lacunary_10.json")}).report()["results"];
  CHECK(num(r["separation"]) > 0.5);
}

TEST_CASE("qint") {
  const json c = run({"qint", "--c", "1", "--q", "0.9"}).report()["results"];
  CHECK(abs(num(c["value"]) - HPReal(ratio(10, 19), P)) <= power_of_two(-240, P));
  const json p = run({"qint", "--pair", "t,2t", "--q", "0.99"}).report()["results"];
  CHECK(p["limit"]["exact"] == "1/3");
  CHECK(p["squeeze_holds"] == true);
  CHECK(abs(num(p["sum"]) - (1L - num("0.99")) / (1L - pow(num("0.99"), 3L))) <= power_of_two(-120, P));
  CHECK(run({"qint", "--pair", "t^2,t", "--q", "0.9"}).code == cli::kInvalidSpec);
}

TEST_CASE("plot examples") {
  SUBCASE("lacunary a = 2, q = 0.9: corners on y = x^M and y = x^m") {
    const std::string stem = (scratch() / "lac2").string();
    const Result r = run({"plot", spec("lacunary_2.json"), "--what", "rectangles", "--q", "0.9", "--out", stem});
    REQUIRE(r.code == cli::kOk);
    const json res = r.report()["results"];
    const HPReal M = num(res["M"]), m = num(res["m"]);
    const auto rows = read_csv(stem + ".csv");
    REQUIRE(rows.size() == 13);
    CHECK(rows[0] == std::vector<std::string>{"n", "x_left", "x_right", "height"});
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const HPReal left = HPReal::parse(rows[i][1], P), right = HPReal::parse(rows[i][2], P);
      const HPReal height = HPReal::parse(rows[i][3], P);
      CHECK(abs(pow(right, M) - height) <= 1e-20);
      CHECK(abs(pow(left, m) - height) <= 1e-20);
      CHECK(left < right);
    }
    std::ifstream svg(stem + ".svg");
    std::stringstream text;
    text << svg.rdbuf();
    CHECK(text.str().rfind("<svg", 0) == 0);
    CHECK(text.str().find("<polyline") != std::string::npos);
  }
  SUBCASE("x = y = t at q = 0.5 partitions [q^{n+1}, q^n]") {
    const std::string stem = (scratch() / "plain").string();
    const Result r = run({"plot", spec("geometric.json"), "--what", "rectangles", "--q", "0.5", "--out", stem});
    REQUIRE(r.code == cli::kOk);
    CHECK(r.report()["results"]["x"] == "t");
    CHECK(r.report()["results"]["y"] == "t");
    const auto rows = read_csv(stem + ".csv");
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const HPReal qn = pow(num("0.5"), static_cast<long>(i - 1));
      const HPReal tol = qn * power_of_two(-240, P);
      CHECK(abs(HPReal::parse(rows[i][1], P) - qn / 2L) <= tol);
      CHECK(abs(HPReal::parse(rows[i][2], P) - qn) <= tol);
      CHECK(abs(HPReal::parse(rows[i][3], P) - qn) <= tol);
    }
  }
  SUBCASE("convergence of the alternating n^2 series") {
    const std::string stem = (scratch() / "conv").string();
    REQUIRE(run({"plot", spec("alternating_n2.json"), "--what", "convergence", "--out", stem}).code == cli::kOk);
    const auto rows = read_csv(stem + ".csv");
    CHECK(rows[0] == std::vector<std::string>{"x", "re", "im"});
    CHECK(abs(HPReal::parse(rows.back()[0], P) - num("1e-4")) <= 1e-70);
    CHECK(abs(HPReal::parse(rows.back()[1], P) - HPReal(ratio(1, 2), P)) <= 1e-3);
  }
  CHECK(run({"plot", spec("alternating_n2.json"), "--what", "rectangles"}).code == cli::kInvalidSpec);
}
