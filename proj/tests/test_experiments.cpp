#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "test_main.hpp"

#include "rank1/experiments.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace rank1;

namespace {

ExperimentConfig cfg(const char* text) { return ExperimentConfig::from_json(json::parse(text)); }

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("construction round trip") {
  for (const char* name : {"toy", "utv1", "thm2(2)", "thm2(3)", "scaled(3/2)"}) {
    auto p = family::by_name(name);
    auto back = construction_from_json(construction_to_json(p));
    auto c1 = make_construction(p), c2 = make_construction(back);
    for (int j = 1; j <= 5; ++j) {
      CHECK(c1->height(j) == c2->height(j));
      CHECK(c1->stage(j).spacers == c2->stage(j).spacers);
      CHECK(c1->width(j) == c2->width(j));
    }
  }
}

TEST_CASE("config validation") {
  CHECK_NOTHROW(cfg(R"({"experiment": "geometry", "construction": {"family": "utv1"}})"));
  CHECK_THROWS_AS(cfg(R"({"experiment": "geometry"})"), ConfigError);
  CHECK_THROWS_AS(cfg(R"({"experiment": "nope", "construction": {"family": "utv1"}})"), ConfigError);
  CHECK_THROWS_AS(cfg(R"({"experiment": "geometry", "construction": {"family": "utv1"}, "extra": 1})"), ConfigError);
  CHECK_THROWS_AS(cfg(R"({"experiment": "geometry", "construction": {"family": "utv1"}, "params": {"tol": "0"}})"),
                  ConfigError);
  CHECK_THROWS_AS(cfg(R"({"experiment": "geometry", "construction": {"family": "utv1", "h1": 2}})"), ConfigError);
  CHECK_THROWS_AS(cfg(R"({"experiment": "geometry", "construction": {"h1": 1, "stages": {"r": 2, "spacers": ["nope"]}}})"),
                  ConfigError);
  CHECK_THROWS_AS(cfg(R"({"experiment": "geometry", "construction": {"h1": 1, "stages": {"r": 2, "spacers": [{"rule": "constant"}]}}})"),
                  ConfigError);
  CHECK_THROWS_AS(cfg(R"({"experiment": "geometry", "construction": {"family": "utv1"}, "output": {"format": "xml"}})"),
                  ConfigError);
  CHECK_NOTHROW(cfg(R"({"experiment": "acceptance", "params": {"only": [2]}})"));
  auto c = cfg(R"({"experiment": "limits", "construction": {"family": "utv1"}, "params": {"max_stage": 12}})");
  CHECK(ExperimentConfig::from_json(c.to_json()).to_json() == c.to_json());
}

TEST_CASE("geometry experiment") {
  auto c = cfg(R"({"experiment": "geometry", "construction": {"family": "utv1"}, "params": {"j": 5}})");
  auto r = run_experiment(c);
  REQUIRE(r.rows.size() == 1);
  CHECK(r.rows[0][2] == "720");
  CHECK(r.verdict == Verdict::pass);
}

TEST_CASE("limits experiment verdicts") {
  auto pass = run_experiment(cfg(R"({"experiment": "limits", "construction": {"family": "utv1"},
      "params": {"seq": "h_j", "poly": "1/2*T^0", "j_range": "3..8"}})"));
  CHECK(pass.verdict == Verdict::pass);
  CHECK(pass.rows.size() == 6);
  CHECK(pass.resolved["a"] == "stage=2; levels=0");
  auto fail = run_experiment(cfg(R"({"experiment": "limits", "construction": {"family": "utv1"},
      "params": {"poly": "1/3*T^0", "j_range": "3..4"}})"));
  CHECK(fail.verdict == Verdict::fail);
  CHECK(exit_code(fail.verdict) == 1);
}

TEST_CASE("range endpoints use heights") {
  auto r = run_experiment(cfg(R"({"experiment": "spectral", "construction": {"family": "utv1"},
      "params": {"mode": "corr", "n_range": "h_4-1..h_4+1"}})"));
  REQUIRE(r.rows.size() == 3);
  CHECK(r.rows[1][0] == "120");
  CHECK(r.rows[1][1] == "1/2");
  CHECK_THROWS_AS(run_experiment(cfg(R"({"experiment": "spectral", "construction": {"family": "utv1"},
      "params": {"n_range": "5..1"}})")),
                  ConfigError);
  CHECK_THROWS_AS(run_experiment(cfg(R"({"experiment": "spectral", "construction": {"family": "utv1"},
      "params": {"n_range": "h_x..4"}})")),
                  ConfigError);
}

TEST_CASE("products experiment") {
  auto wide = run_experiment(cfg(R"j({"experiment": "products",
      "constructions": [{"family": "thm2(2)"}, {"family": "thm2(2)"}],
      "params": {"m": 1, "n": 3, "k_range": "h_4+1..h_4+2000", "samples": 2000}})j"));
  CHECK(wide.verdict == Verdict::fail);
  CHECK(wide.summary["nonzero"] == 44);
  CHECK(wide.rows.size() == 2000);
}

TEST_CASE("render is deterministic and self-describing") {
  auto c = cfg(R"({"experiment": "oracle", "construction": {"family": "toy"}, "params": {"k_range": "-3..3"},
      "output": {"format": "csv"}})");
  auto t1 = render(run_experiment(c), c);
  auto t2 = render(run_experiment(c), c);
  CHECK(t1 == t2);
  CHECK(t1.rfind("# tool: rank1 ", 0) == 0);
  CHECK(t1.find("# verdict: PASS") != std::string::npos);
  CHECK(t1.find("\"k_range\":\"-3..3\"") != std::string::npos);

  c.format = "json";
  auto doc = json::parse(render(run_experiment(c), c));
  CHECK(doc["version"] == kToolVersion);
  CHECK(doc["rows"].size() == 7);
  CHECK(doc["config"]["params"]["J"].is_number());
}

TEST_CASE("atomic write") {
  namespace fs = std::filesystem;
  auto dir = fs::temp_directory_path() / "rank1_atomic_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  auto path = (dir / "out.csv").string();
  write_atomically(path, "a\n");
  write_atomically(path, "b\n");
  CHECK(slurp(path) == "b\n");
  std::size_t files = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++files;
  CHECK(files == 1);
  CHECK_THROWS(write_atomically((dir / "missing" / "x").string(), "c"));
  fs::remove_all(dir);
}
