#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "app.hpp"
#include "carleson/errors.hpp"
#include "ops.hpp"
#include "spec.hpp"
#include "verify.hpp"

using namespace carleson;
using namespace carleson::cli;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run app(std::vector<std::string> args) {
  args.insert(args.begin(), "carleson-lab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Run r;
  r.code = run_app(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("carleson_cli_test_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("every public operation is registered") {
  const std::vector<std::string> expected{
      "pseudo_distance",        "ball_automorphism",         "kobayashi_ball",
      "ball_volume",            "sample_ball_uniform",       "check_lemma_ball_inequality",
      "boundary_distance",      "kobayashi_bounds",          "estimate_boundary_constants",
      "check_distance_comparison", "check_defining_fn_inequality", "kernel",
      "normalized_kernel",      "berezin_transform",         "check_kernel_upper",
      "check_kernel_lower",     "check_submean",             "measure_of_ball",
      "carleson_ratio_test",    "carleson_berezin_test",     "carleson_functional_test",
      "cross_check_equivalence", "separation_constant",      "count_in_ball",
      "greedy_decompose",       "greedy_cover",              "dirac_carleson_measure",
      "escape_sum",             "shell_counts",              "ek_density",
      "ek_ball_measure",        "sample_unit_ball",          "integrate_density",
      "run",                    "verify"};
  std::set<std::string> names;
  for (const auto& op : op_registry()) names.insert(op.name);
  for (const auto& e : expected) CHECK_MESSAGE(names.count(e) == 1, e);
  const auto listing = app({"ops"});
  CHECK(listing.code == kPass);
  for (const auto& e : expected) CHECK(listing.out.find(e) != std::string::npos);
  CHECK(find_op("no_such_op") == nullptr);
}

TEST_CASE("spec validation names the offending line") {
  const std::string text = "{\n  \"op\": \"ball_volume\",\n  \"n\": 1,\n  \"bogus\": 3\n}\n";
  try {
    parse_spec(text, "exp.json");
    FAIL("expected a ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("exp.json:4:") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_spec("{\"op\": \"nope\"}", "x.json"), ValidationError);
  CHECK_THROWS_AS(parse_spec("{\"op\": \"ball_volume\", \"n\": \"two\"}", "x.json"), ValidationError);

  const fs::path dir = scratch("invalid");
  fs::create_directories(dir);
  std::ofstream(dir / "bad.json") << text;
  const auto r = app({"run", (dir / "bad.json").string()});
  CHECK(r.code == kUsage);
  CHECK(r.err.find("bad.json:4:") != std::string::npos);
  CHECK(app({"frobnicate"}).code == kUsage);
  CHECK(app({"ball", "--op", "greedy_cover"}).code == kUsage);
}

TEST_CASE("round trip of a spec through JSON") {
  const auto s = parse_spec(
      "{\"op\": \"ek_ball_measure\", \"n\": 2, \"params\": {\"r\": 0.5}, \"mc\": {\"seed\": 9}}", "s");
  const auto again = spec_from_json(s.to_json(), "again");
  CHECK(again.to_json() == s.to_json());
  CHECK(again.mc.seed == 9);
  CHECK(again.n == 2);
}

TEST_CASE("shipped example specs load") {
  std::size_t seen = 0;
  for (const auto& entry : fs::directory_iterator(CARLESON_SPEC_DIR)) {
    if (entry.path().extension() != ".json") continue;
    const auto spec = load_spec_file(entry.path().string());
    CHECK(find_op(spec.op) != nullptr);
    ++seen;
  }
  CHECK(seen >= 2);
  const auto r = app({"run", std::string(CARLESON_SPEC_DIR) + "/ladder_escape.json", "--format", "json"});
  REQUIRE(r.code == kPass);
  const double total = nlohmann::json::parse(r.out).at("summary").at("result").at("total").get<double>();
  CHECK(std::abs(total - 0.40875) < 1e-4);
}

TEST_CASE("Berezin transform of the volume measure is one") {
  const auto r = app({"berezin", "--measure", "{\"density\": {\"s\": 0}}", "--samples", "20000", "-p",
                      "probes=[[0],[0.3],[0.6],[0.9],[0.99]]", "--format", "json"});
  REQUIRE(r.code == kPass);
  const auto j = nlohmann::json::parse(r.out);
  REQUIRE(j.at("rows").size() == 5);
  for (const auto& row : j.at("rows")) {
    CHECK(std::stod(row.at("value").get<std::string>()) == doctest::Approx(1.0).epsilon(1e-2));
  }
}

TEST_CASE("a non-Carleson power measure exits with a failing verdict") {
  const auto r = app({"carleson-test", "--measure", "{\"density\": {\"s\": -0.5}}", "--samples", "20000",
                      "--format", "json"});
  CHECK(r.code == kFail);
  const auto j = nlohmann::json::parse(r.out);
  const auto& res = j.at("summary").at("result");
  CHECK(res.at("agreement").get<bool>());
  CHECK(std::abs(res.at("berezin").at("fit").at("slope").get<double>() + 0.5) < 0.15);
}

TEST_CASE("decomposition of a Euclidean set") {
  const fs::path dir = scratch("decompose");
  const auto r = app({"seq", "decompose", "--sequence",
                      "{\"generator\": \"points\", \"points\": [[0],[0.1],[1.0],[1.1]], \"metric\": "
                      "\"euclidean\"}",
                      "-p", "r=0.2", "--out", dir.string()});
  REQUIRE(r.code == kPass);
  const auto summary = nlohmann::json::parse(slurp(dir / "summary.json"));
  CHECK(summary.at("result").at("n_colors") == 2);
  CHECK(slurp(dir / "results.csv") == "index,re1,im1,class\n0,0,0,0\n1,0.1,0,1\n2,1,0,0\n3,1.1,0,1\n");
  const auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
  CHECK(manifest.at("manifest_version") == 1);
  CHECK(manifest.contains("versions"));
  CHECK(manifest.at("spec").at("op") == "greedy_decompose");
}

TEST_CASE("replaying a manifest reproduces the results byte for byte") {
  const fs::path first = scratch("replay_a");
  const fs::path second = scratch("replay_b");
  const auto a = app({"ek", "--n", "2", "--r", "0.5", "--z0", "[0.3, 0, 0, 0]", "--samples", "20000",
                      "--seed", "17", "--out", first.string()});
  REQUIRE(a.code == kPass);
  const auto b = app({"run", (first / "manifest.json").string(), "--out", second.string()});
  REQUIRE(b.code == kPass);
  CHECK(slurp(first / "results.csv") == slurp(second / "results.csv"));
  CHECK(!slurp(first / "results.csv").empty());
}

TEST_CASE("seeds change Monte-Carlo output") {
  const auto a = app({"ek", "--r", "0.5", "--samples", "2000", "--seed", "1"});
  const auto b = app({"ek", "--r", "0.5", "--samples", "2000", "--seed", "2"});
  const auto c = app({"ek", "--r", "0.5", "--samples", "2000", "--seed", "1"});
  CHECK(a.out != b.out);
  CHECK(a.out == c.out);
}

TEST_CASE("a faulty kernel is caught by the release gate") {
  VerifyOptions opts;
  opts.kernel = [](const Point& z, const Point& w) {
    const double n1 = static_cast<double>(z.dim() + 1);
    return std::pow(1.0 + inner(z, w), -n1);
  };
  const auto res = run_verify(opts);
  bool saw = false;
  for (const auto& row : res.rows) {
    if (row.report.check.find("reproducing") != std::string::npos) {
      saw = true;
      CHECK(row.report.verdict == Verdict::fail);
    }
  }
  CHECK(saw);
  CHECK(res.overall() == Verdict::fail);
  CHECK_THROWS_AS(run_verify(VerifyOptions{"medium"}), ParameterError);
}

}
