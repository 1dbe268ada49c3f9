#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "mcm/catalog.hpp"
#include "mcm/cli.hpp"

using namespace mcm;
using namespace mcm::cli;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path sessions_dir() { return MCM_SESSIONS_DIR; }

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
  const auto p = std::filesystem::temp_directory_path() / ("mcm_cli_" + name);
  std::ofstream(p) << content;
  return p;
}

// Scalars as strings, the form the text rendering preserves.
Json stringify(const Json& j) {
  if (j.is_object()) {
    Json o = Json::object();
    for (const auto& [k, v] : j.items()) o[k] = stringify(v);
    return o;
  }
  if (j.is_array()) {
    Json a = Json::array();
    for (const auto& v : j) a.push_back(stringify(v));
    return a;
  }
  return j.is_string() ? j : Json(j.dump());
}

std::vector<std::string> session_files() {
  std::vector<std::string> out;
  for (const auto& e : std::filesystem::directory_iterator(sessions_dir()))
    if (e.path().extension() == ".mfs") out.push_back(e.path().string());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("verify a catalog member") {
  auto r = call({"verify", "--family", "phi_lambda", "--point", "-1,0"});
  CHECK(r.code == kOk);
  CHECK(r.out.find("ok: true") != std::string::npos);
  CHECK(r.out.find("rank: 1") != std::string::npos);
  auto j = Json::parse(call({"--json", "verify", "catalog:delta_m:2"}).out);
  CHECK(j["ok"] == true);
  CHECK(j["rank"] == 2);
}

TEST_CASE("exit codes") {
  CHECK(call({}).code == kUsageError);
  CHECK(call({"frobnicate"}).code == kUsageError);
  CHECK(call({"verify"}).code == kUsageError);
  CHECK(call({"verify", "/nonexistent/matrix.mat"}).code == kUsageError);
  CHECK(call({"verify", "--family", "no_such"}).code == kUsageError);
  CHECK(call({"verify", "--family", "alpha_lambda", "--point", "inf"}).code == kUsageError);
  CHECK(call({"ideal-eq", "y1, y2", "y2, y1+y2"}).code == kOk);
  CHECK(call({"ideal-eq", "y1", "y1^2"}).code == kAssertionFailed);

  const auto bad = temp_file("bad.mat", "rows: 1 1\ny1, y2*y3;\ny2, y1^2+y2*y3\n");
  auto r = call({"verify", bad.string()});
  CHECK(r.code == kAssertionFailed);
  CHECK(r.out.find("ok: false") != std::string::npos);

  const auto garbage = temp_file("garbage.mat", "y1 +* y2\n");
  CHECK(call({"verify", garbage.string()}).code == kUsageError);
  CHECK(call({"--help"}).code == kOk);
}

TEST_CASE("ideal commands") {
  auto j = Json::parse(call({"--json", "gb", "y1^2-y2, y1*y2-y3"}).out);
  CHECK(j["basis"].size() == 3);
  j = Json::parse(call({"--json", "nf", "y1^3", "--ideal", "y1^2-y2"}).out);
  CHECK(j["normalForm"] == "y1*y2");
  j = Json::parse(call({"--json", "nf", "y1^3+y1^2*y3", "--ring", "nodal", "--ideal", "y2"}).out);
  CHECK(j["normalForm"] == "0");
  j = Json::parse(call({"--json", "gb", "--vars", "x,y,a", "--blocks", "2,1", "--weights", "1,1", "--relations",
                        "a^2-1", "a*x-y"})
                      .out);
  CHECK(j["order"] == "(c,dp(2),dp(1))");
}

TEST_CASE("matrix file formats round-trip") {
  for (const auto& spec : {"catalog:phi_lambda:xi", "catalog:alpha_psi_lambda:3,6", "catalog:phi_lambda:param",
                           "catalog:M2", "catalog:phi_phi2_m:3"}) {
    const auto loaded = load_input(spec);
    const std::string text = format_matrix_text(loaded.matrix);
    CHECK(parse_matrix_text(text).matrix == loaded.matrix);
    CHECK(parse_matrix_json(matrix_json(loaded.matrix)).matrix == loaded.matrix);
    CHECK(parse_matrix_input(matrix_json(loaded.matrix).dump()).matrix == loaded.matrix);
  }
  // Rows on separate lines without semicolons, twists inferred.
  const auto m = parse_matrix_text("# phi at (-1,0)\ny1+y3, y2*y3\ny2, y1^2\n").matrix;
  CHECK(m.entries() == load_input("catalog:phi_lambda:xi").matrix.entries());
  const auto j = parse_matrix_input(R"({"entries": [["y1+y3", "y2*y3"], ["y2", "y1^2"]], "rowTwists": [1, 1]})");
  CHECK(j.matrix.col_deg() == std::vector<int>{2, 3});
  CHECK_THROWS_AS(parse_matrix_text("rows: 0 0\ncols: 1 1\ny1, y2^2; y3, y1\n"), Error);
  CHECK_THROWS_AS(parse_matrix_input("{\"entries\": [[\"y1\"], [\"y2\", \"y3\"]]}"), Error);
  CHECK_THROWS_AS(parse_matrix_text("ring: torus\ny1\n"), Error);
}

TEST_CASE("text and JSON outputs carry the same data") {
  const auto mat = std::filesystem::temp_directory_path() / "mcm_cli_t.mat";
  const std::vector<std::vector<std::string>> commands{
      {"verify", "catalog:phi_lambda:xi"},
      {"gb", "y1^2-y2, y1*y2-y3"},
      {"nf", "y1^3", "--ideal", "y1^2-y2"},
      {"ideal-eq", "y1", "y1+y2"},
      {"adjoint", "catalog:alpha_lambda:s"},
      {"fitting", "catalog:phi_lambda:3,6", "-k", "1"},
      {"fitting", "catalog:M2", "-k", "1"},
      {"locally-free", "catalog:phi_lambda:param"},
      {"ext", "catalog:alpha_lambda:xi", "catalog:psi_lambda:xi", "--build", "0"},
      {"ext", "catalog:alpha_lambda:xi", "catalog:psi_lambda:xi", "--range", "-1:2"},
      {"stability", "catalog:psi_lambda:xi"},
      {"tensor", "catalog:alpha_lambda:xi", "catalog:alpha_lambda:xi"},
      {"reflexive-hull", "catalog:phi_lambda:inf"},
      {"m2", "--resolution"},
      {"catalog", "list"},
      {"catalog", "show", "beta_lambda", "--point", "xi"},
      {"catalog", "verify", "--only", "phi_lambda", "--only", "delta_m"},
      {"session", "run", (sessions_dir() / "tensor.mfs").string()},
  };
  for (const auto& args : commands) {
    INFO(args[0] << (args.size() > 1 ? " " + args[1] : ""));
    auto text = call(args);
    auto with_json = args;
    with_json.insert(with_json.begin(), "--json");
    auto js = call(with_json);
    CHECK(text.code == js.code);
    const Json j = Json::parse(js.out);
    CHECK(parse_text(text.out) == stringify(j));
    CHECK(render_text(j) == text.out);
  }
}

TEST_CASE("output files feed back as inputs") {
  const auto path = (std::filesystem::temp_directory_path() / "mcm_cli_l.mat").string();
  REQUIRE(call({"tensor", "catalog:alpha_lambda:xi", "catalog:psi_lambda:xi", "-o", path}).code == kOk);
  auto r = call({"--json", "verify", path});
  CHECK(r.code == kOk);
  CHECK(Json::parse(r.out)["rank"] == 1);
  auto t = call({"--json", "tensor", path, path});
  CHECK(Json::parse(t.out)["rows"] == 2);
}

TEST_CASE("catalog verify is independent of the job count") {
  auto one = call({"--json", "catalog", "verify", "--m-max", "2"});
  auto four = call({"--json", "catalog", "verify", "--m-max", "2", "-j", "4"});
  CHECK(one.code == kOk);
  CHECK(one.out == four.out);
  CHECK(Json::parse(one.out)["ok"] == true);
  const auto points = temp_file("points.txt", "# extra points\n3,6\n8, 24\nparam\n");
  auto extra = call({"--json", "catalog", "verify", "--points", points.string(), "--m-max", "1"});
  CHECK(extra.code == kOk);
  CHECK(Json::parse(extra.out)["failed"] == 0);
  CHECK(call({"catalog", "verify", "--only", "nope"}).code == kUsageError);
}

TEST_CASE("shipped sessions pass") {
  const auto files = session_files();
  CHECK(files.size() >= 5);
  for (const auto& f : files) {
    INFO(f);
    auto r = call({"--json", "session", "run", f});
    CHECK(r.code == kOk);
    const Json j = Json::parse(r.out);
    CHECK(j["failures"] == 0);
    CHECK(j["assertions"].get<int>() > 0);
  }
}

TEST_CASE("session replay is deterministic and order independent") {
  auto files = session_files();
  std::map<std::string, std::string> first;
  {
    auto r = Json::parse(call([&] {
                           std::vector<std::string> a{"--json", "session", "run"};
                           a.insert(a.end(), files.begin(), files.end());
                           return a;
                         }())
                             .out);
    for (const auto& s : r["sessions"]) first[s["script"]] = s.dump();
  }
  std::mt19937 rng(5);
  for (int trial = 0; trial < 3; ++trial) {
    std::shuffle(files.begin(), files.end(), rng);
    std::vector<std::string> a{"--json", "session", "run"};
    a.insert(a.end(), files.begin(), files.end());
    auto r = Json::parse(call(a).out);
    for (const auto& s : r["sessions"]) CHECK(first[s["script"]] == s.dump());
  }
  // Running the same script twice in one invocation repeats it exactly.
  const auto f = files.front();
  auto r = Json::parse(call({"--json", "session", "run", f, f}).out);
  CHECK(r["sessions"][0].dump() == r["sessions"][1].dump());
}

TEST_CASE("session failures and malformed scripts") {
  auto fail = run_session("family p phi_lambda xi\nexpect-stability p 2\nexpect-verify p rank=1\n", ".");
  CHECK(fail.assertions == 2);
  CHECK(fail.failures == 1);
  CHECK_FALSE(fail.error);

  auto unknown = run_session("family p phi_lambda xi\nfrobnicate p\nexpect-verify p\n", ".");
  REQUIRE(unknown.error);
  CHECK(unknown.error->find("line 2") != std::string::npos);
  CHECK(unknown.assertions == 0);

  CHECK(run_session("expect-verify nothing\n", ".").error);
  CHECK(run_session("matrix m := y1 +* y2\n", ".").error);
  CHECK(run_session("ideal I y1\n", ".").error);
  CHECK(run_session("matrix m := y1, \\\n", ".").error);

  auto ok = run_session("# comment only\n\nring S vars=x,y weights=1,1 := x^2\nideal I := x*y, \\\n  y^2\n"
                        "ideal J := y*(x+y)\nexpect-ideal I := x*y, y^2\nexpect-zero I\n",
                        ".");
  CHECK_FALSE(ok.error);
  CHECK(ok.assertions == 2);
  CHECK(ok.failures == 1);

  const auto script = temp_file("bad.mfs", "family p phi_lambda xi\nexpect-rows p 3\n");
  CHECK(call({"session", "run", script.string()}).code == kAssertionFailed);
  const auto broken = temp_file("broken.mfs", "load m missing.mat\n");
  CHECK(call({"session", "run", broken.string()}).code == kUsageError);
}

TEST_CASE("session loads matrix files relative to the script") {
  const auto dir = std::filesystem::temp_directory_path() / "mcm_cli_dir";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "phi.mat") << "rows: 1 1\ncols: 2 3\ny1+y3, y2*y3;\ny2, y1^2\n";
  std::ofstream(dir / "s.mfs") << "load p phi.mat\nexpect-verify p rank=1\nfamily q phi_lambda xi\n"
                                  "expect-matrix p rows=1,1 cols=2,3 := y1+y3, y2*y3; y2, y1^2\n"
                                  "expect-equivalent p q\n";
  auto r = call({"session", "run", (dir / "s.mfs").string()});
  CHECK(r.code == kOk);
}
