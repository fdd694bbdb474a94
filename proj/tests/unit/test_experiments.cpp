#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "sievebands/experiments.hpp"

using namespace sievebands;
using nlohmann::json;

namespace {

ScenarioConfig config(const char* text) { return parse_config(json::parse(text), std::nullopt); }

std::size_t column(const CsvTable& t, const std::string& name) {
  for (std::size_t i = 0; i < t.header().size(); ++i)
    if (t.header()[i] == name) return i;
  FAIL("missing column " << name);
  return 0;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("scenario names round trip") {
  for (const auto s : {Scenario::ramanujan_check, Scenario::band_theorem1, Scenario::corollary1, Scenario::corollary2,
                       Scenario::lemma1, Scenario::lemma2, Scenario::theorem2, Scenario::lambda_r,
                       Scenario::good_weights})
    CHECK(parse_scenario(to_string(s)) == s);
  CHECK_THROWS_AS(parse_scenario("lemma3"), ConfigError);
}

TEST_CASE("size rules") {
  const auto cube = SizeRule::from_json(json::parse(R"({"theta": 0.3333333333333333})"), "Q");
  CHECK(cube.resolve(4096) == 16);
  CHECK(cube.resolve(4095) == 15);
  const auto fixed = SizeRule::from_json(json(25), "Q");
  CHECK(fixed.resolve(1 << 20) == 25);
  CHECK(SizeRule::from_json(json::parse(R"({"theta": 0.5})"), "H").resolve(1000) == 31);
  CHECK_THROWS_AS(SizeRule::from_json(json::parse(R"({"theta": 1.0})"), "Q"), ConfigError);
  CHECK_THROWS_AS(SizeRule::from_json(json::parse(R"({"theta": 0})"), "Q"), ConfigError);
  CHECK_THROWS_AS(SizeRule::from_json(json("big"), "Q"), ConfigError);
}

TEST_CASE("config parsing") {
  const auto cfg = config(R"({"scenario": "lemma1", "N_list": [4096, 1024, 1024], "Q": {"theta": 0.25},
                              "l_list": [2, 3], "transform": "moebius", "backend": "float", "threads": 3})");
  CHECK(cfg.scenario == Scenario::lemma1);
  CHECK(cfg.n_list == std::vector<std::int64_t>{1024, 4096});
  CHECK(cfg.builder == "moebius");
  CHECK(cfg.backend == Backend::real);
  CHECK(cfg.threads == 3);
  CHECK_THROWS_AS(parse_config(json::parse(R"({"scenario": "lemma1", "N_list": [64]})"), Scenario::lemma2), ConfigError);
}

TEST_CASE("config errors") {
  const char* bad[] = {
      R"({"scenario": "lemma1", "N_list": [3], "Q": 2})",
      R"({"scenario": "lemma1", "N_list": [], "Q": 2})",
      R"({"scenario": "lemma1", "N_list": [100], "Q": 2, "typo": 1})",
      R"({"scenario": "band-theorem1", "N_list": [100], "Q": 5, "H": 100})",
      R"({"scenario": "band-theorem1", "N_list": [100], "Q": 5, "H": 4, "weights": ["triangle"]})",
      R"({"scenario": "ramanujan-check", "N_list": [100], "Q": 5, "transform": "moebius_log", "backend": "exact"})",
      R"({"scenario": "ramanujan-check", "N_list": [100], "Q": 5, "backend": "quad"})",
      R"({"scenario": "ramanujan-check", "N_list": [100], "Q": 5, "threads": 0})",
      R"({"scenario": "nope", "N_list": [100]})",
      R"([1, 2, 3])",
  };
  for (const char* text : bad) {
    CAPTURE(text);
    CHECK_THROWS_AS(config(text), ConfigError);
  }
  CHECK_THROWS_AS(load_config("/nonexistent/config.json", std::nullopt), ConfigError);
}

TEST_CASE("real-only builders switch to the float backend") {
  const auto cfg = config(R"({"scenario": "ramanujan-check", "N_list": [100], "Q": 5, "transform": "moebius_log"})");
  CHECK(cfg.backend == Backend::real);
}

TEST_CASE("ramanujan check rows all match exactly") {
  const auto out =
      run_scenario(config(R"({"scenario": "ramanujan-check", "N_list": [300], "Q": 12, "count": 2, "seed": 1})"));
  REQUIRE(out.passed());
  const auto col = column(out.table, "exact_match");
  CHECK_FALSE(out.table.rows().empty());
  for (const auto& row : out.table.rows()) CHECK(row[col] == "true");
}

TEST_CASE("lambda-r with R = 1 vanishes") {
  const auto out =
      run_scenario(config(R"({"scenario": "lambda-r", "N_list": [200], "R_list": [1], "H": 5, "q_max": 5})"));
  CHECK(out.passed());
  const auto qc = column(out.table, "quantity");
  const auto vc = column(out.table, "value");
  bool saw_r1 = false;
  for (const auto& row : out.table.rows()) {
    CAPTURE(row[qc]);
    CHECK(std::stod(row[vc]) == 0.0);
    saw_r1 = saw_r1 || row[qc] == "R1";
  }
  CHECK(saw_r1);
}

TEST_CASE("band-theorem1 scenario with f == 1 has zero ratios") {
  // Every q <= 6 divides both N, so each residue class is hit exactly N/q times.
  const auto out = run_scenario(config(R"({"scenario": "band-theorem1", "N_list": [60, 120], "Q": 1, "H": 4,
                                          "q_max": 6, "transform": "unit", "backend": "float"})"));
  CHECK(out.passed());
  const auto rc = column(out.table, "ratio");
  CHECK_FALSE(out.table.rows().empty());
  for (const auto& row : out.table.rows()) CHECK(std::stod(row[rc]) == 0.0);
}

TEST_CASE("small runs of every scenario pass") {
  const char* docs[] = {
      R"({"scenario": "corollary1", "N_list": [512, 1024], "Q": {"theta": 0.3333}, "H_list": [4], "q_max": 12,
          "transform": "moebius", "backend": "float"})",
      R"({"scenario": "corollary2", "N_list": [300], "Q": 10, "H_list": [5], "count": 2, "seed": 3})",
      R"({"scenario": "lemma1", "N_list": [4096, 16384, 65536], "Q": {"theta": 0.3333333333333333}, "l_list": [5, 12],
          "transform": "moebius", "backend": "float"})",
      R"({"scenario": "lemma2", "N_list": [256], "Q": 6, "H_list": [4], "weights": ["sign"], "transform": "moebius"})",
      R"({"scenario": "theorem2", "N_list": [1024, 2048], "Q": {"theta": 0.25}, "H": {"theta": 0.5},
          "weight": "cesaro", "transform": "moebius", "backend": "float"})",
      R"({"scenario": "good-weights", "H_list": [2, 8], "l_max": 32})",
  };
  for (const char* text : docs) {
    CAPTURE(text);
    const auto out = run_scenario(config(text));
    for (const auto& c : out.checks) {
      CAPTURE(c.quantity);
      CAPTURE(c.detail);
      CAPTURE(c.got);
      CHECK(c.pass);
    }
    CHECK_FALSE(out.table.rows().empty());
  }
}

TEST_CASE("outputs are thread-count independent") {
  const char* text = R"({"scenario": "band-theorem1", "N_list": [1024, 2048], "Q": {"theta": 0.3333333333333333},
                         "H": 16, "weights": ["sign", "cesaro"], "transform": "moebius", "backend": "float"})";
  auto cfg = config(text);
  cfg.threads = 1;
  const auto one = run_scenario(cfg);
  cfg.threads = 6;
  const auto six = run_scenario(cfg);
  CHECK(one.table.str() == six.table.str());
  CHECK(one.fits.str() == six.fits.str());
  CHECK(one.to_json().dump() == six.to_json().dump());
}

TEST_CASE("writing outputs") {
  const auto out =
      run_scenario(config(R"({"scenario": "ramanujan-check", "N_list": [100], "Q": 6, "count": 1, "seed": 2})"));
  const auto dir = std::filesystem::temp_directory_path() / "sievebands_unit_outputs";
  std::filesystem::remove_all(dir);
  write_outputs(out, dir, OutputFormat::both);
  const std::string base = out.name;
  CHECK(slurp(dir / (base + ".csv")) == out.table.str());
  CHECK(slurp(dir / (base + "_fits.csv")) == out.fits.str());
  CHECK(slurp(dir / (base + "_checks.csv")) == out.checks_table().str());
  const auto doc = json::parse(slurp(dir / (base + ".json")));
  CHECK(doc == out.to_json());
  CHECK(parse_output_format("json") == OutputFormat::json);
  CHECK_THROWS(parse_output_format("xml"));
  std::filesystem::remove_all(dir);
}
