#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "regulab/report.hpp"
#include "support/fixtures.hpp"

using namespace regulab;
using namespace regulab::testing;
using nlohmann::json;

namespace {

std::string error_of(const std::string& toml) {
  try {
    parse_toml(toml);
  } catch (const Error& e) {
    CHECK(e.kind() == "config-error");
    return e.what();
  }
  return "";
}

// Structural equality with a relative tolerance on numbers.
bool near(const json& a, const json& b, const std::string& where, double tol = 1e-12) {
  if (a.is_number() && b.is_number()) {
    double x = a.get<double>(), y = b.get<double>();
    if (std::abs(x - y) <= tol * (1 + std::abs(x) + std::abs(y))) return true;
    MESSAGE(where << ": " << x << " vs " << y);
    return false;
  }
  if (a.type() != b.type()) {
    MESSAGE(where << ": type differs");
    return false;
  }
  if (a.is_object()) {
    if (a.size() != b.size()) {
      MESSAGE(where << ": key sets differ");
      return false;
    }
    for (auto it = a.begin(); it != a.end(); ++it)
      if (!b.contains(it.key()) || !near(it.value(), b[it.key()], where + "." + it.key(), tol))
        return false;
    return true;
  }
  if (a.is_array()) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
      if (!near(a[i], b[i], where + "[" + std::to_string(i) + "]", tol)) return false;
    return true;
  }
  return a == b;
}

std::filesystem::path scratch_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("regulab_test_" + name);
  std::filesystem::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("TOML subset") {
  auto j = parse_toml(R"(# comment
title = "x"   # trailing
[curve]
kind = "fermat"
n = 3
[run]
stages = ["verify", "periods"]
seed = 42
strict = true
[tolerances]
disc = 1e-5
)");
  CHECK(j["title"] == "x");
  CHECK(j["curve"]["n"] == 3);
  CHECK(j["run"]["stages"].size() == 2);
  CHECK(j["run"]["strict"] == true);
  CHECK(j["tolerances"]["disc"].get<double>() == doctest::Approx(1e-5));
  CHECK(parse_toml("a = \"has # inside\"")["a"] == "has # inside");
}

TEST_CASE("config errors name the line") {
  CHECK(error_of("a = 1\nb = \n").find("line 2") != std::string::npos);
  CHECK(error_of("[curve\nkind = 1").find("line 1") != std::string::npos);
  CHECK(error_of("x = 1\ny = 2\nx = 3").find("line 3") != std::string::npos);
  CHECK(error_of("a = [1, 2").find("line 1") != std::string::npos);
  CHECK(error_of("a = \"open").find("line 1") != std::string::npos);
  CHECK_THROWS_AS(load_config("/nonexistent/regulab.toml"), Error);
}

TEST_CASE("run configuration") {
  auto cfg = config_from_json(parse_toml("[run]\nprecision_bits = 128\nseed = 9\n"));
  CHECK(cfg.precision_bits == 64);
  CHECK(cfg.precision_capped);
  CHECK(cfg.seed == 9);
  auto full = load_config(config_path("genus2.toml"));
  CHECK(full.tol.main_theorem == doctest::Approx(1e-3));
  CHECK(full.stages.size() == 7);
  CHECK_THROWS_AS(config_from_json(parse_toml("[tolerances]\ndisc = -1\n")), Error);
  CHECK_THROWS_AS(model_from_config(parse_toml("[curve]\nkind = \"quartic\"\n")), Error);
  // Q and R that are not zero and pole of f
  auto bad = load_config(config_path("genus2.toml")).raw;
  bad["points"]["Q"] = json::array({"0", "0"});
  CHECK_THROWS_AS(model_from_config(bad), Error);
}

TEST_CASE("stage resolution") {
  using V = std::vector<std::string>;
  CHECK(resolve_stages({"verify"}) == V{"verify"});
  CHECK(resolve_stages({"periods"}) == V{"verify", "homology", "periods"});
  CHECK(resolve_stages({"compare"}) ==
        V{"verify", "homology", "periods", "gamma", "regulator", "carlson", "compare"});
  CHECK(resolve_stages({"carlson", "verify"}) == V{"verify", "homology", "periods", "carlson"});
  CHECK(resolve_stages({"all"}).size() == 7);
  CHECK(resolve_stages({"mhs-selftest"}) == V{"mhs-selftest"});
  CHECK_THROWS_AS(resolve_stages({"bogus"}), Error);
}

TEST_CASE("pipeline runs, verdicts and golden report") {
  auto cfg = load_config(config_path("genus2.toml"));
  auto run = run_pipeline(cfg, {"verify"});
  CHECK(run.exit_code == 0);
  REQUIRE(run.stages.size() == 1);
  CHECK(run.stages[0].status == "pass");

  std::ifstream in(std::string(REGULAB_SOURCE_DIR) + "/tests/golden/verify_genus2.json");
  REQUIRE(in.good());
  json golden = json::parse(in);
  json got = run.report;
  got["config"].erase("source");
  CHECK(near(got, golden, "report"));

  // periods twice: identical reports
  auto a = run_pipeline(cfg, {"periods"}), b = run_pipeline(cfg, {"periods"});
  CHECK(a.report == b.report);
  CHECK(a.exit_code == 0);
  for (auto& s : a.stages) CHECK(s.status == "pass");

  // unsupported curves are operational errors
  RunConfig broken = cfg;
  broken.raw["curve"]["kind"] = "quartic";
  auto e = run_pipeline(broken, {"verify"});
  CHECK(e.exit_code == 1);
  CHECK(e.stages[0].status == "error");
}

TEST_CASE("self-test without a curve") {
  RunConfig cfg;
  cfg.seed = 3;
  auto run = run_pipeline(cfg, {"mhs-selftest"});
  CHECK(run.exit_code == 0);
  CHECK(run.report["stages"]["mhs-selftest"]["status"] == "pass");
}

TEST_CASE("outputs") {
  auto cfg = load_config(config_path("genus2.toml"));
  auto run = run_pipeline(cfg, {"homology"});
  auto dir = scratch_dir("outputs");
  auto warnings = write_outputs(run, dir.string());
  CHECK(warnings.empty());
  std::ifstream rep(dir / "report.json");
  json j = json::parse(rep);
  CHECK(j["schema_version"] == kReportSchemaVersion);
  CHECK(j.contains("timing"));
  CHECK(std::filesystem::exists(dir / "plots" / "paths.svg"));

  std::string empty = render_paths_svg(nullptr, nullptr, nullptr);
  CHECK(empty.rfind("<svg", 0) == 0);
  CHECK(empty.find("</svg>") != std::string::npos);
  std::string model_only = render_paths_svg(&genus2(), nullptr, nullptr);
  CHECK(model_only.find("</svg>") != std::string::npos);
  // no NaN coordinates leak into the drawing
  CHECK(model_only.find("nan") == std::string::npos);
  CHECK(to_json(cplx(1.5L, -2)) == json::array({1.5, -2.0}));
}

TEST_CASE("as-given convention adds the decomposable term") {
  auto cfg = load_config(config_path("genus2.toml"));
  cfg.normalize_f = false;
  auto run = run_pipeline(cfg, {"regulator"});
  REQUIRE(run.exit_code == 0);
  const auto& data = run.report["stages"]["regulator"]["data"];
  REQUIRE(data.contains("decomposable_correction"));
  const auto& fr = *run.state->frame;
  cplx fP = run.state->model->f_at_P;
  // the given f is (x - 1)/(x - zeta5); its value at P by hand
  cplx P = genus2().P.x;
  CHECK(std::abs(fP - (P - cplx(1)) / (P - root_of_unity(1, 5))) < 1e-15L);
  for (int i = 0; i < fr.g; ++i)
    for (int j = 0; j < 2 * fr.g; ++j) {
      auto c = data["decomposable_correction"][i][j];
      cplx got(c[0].get<double>(), c[1].get<double>());
      cplx expect = std::log(fP) * fr.wedge(fr.dx_coords(j), fr.dz_coords(i));
      CHECK(std::abs(got - expect) < 1e-12L * (1 + std::abs(expect)));
      auto a = data["pairs_as_given"][i][j], p = data["pairs"][i][j];
      CHECK(a[0].get<double>() - p[0].get<double>() == doctest::Approx(static_cast<double>(got.real())));
    }
  CHECK(run.report["config"]["normalize_f"] == false);
}
