#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

using namespace cmvlab;

namespace {

Json solve_config() {
  return Json{{"kind", "solve"},
              {"backend", "exact"},
              {"verblunsky", Json{{"kind", "zero"}}},
              {"window", 64},
              {"order", 2},
              {"pattern", Json{{"kind", "diagonal"}, {"length", 24}}}};
}

}  // namespace

TEST_CASE("config validation produces field-level diagnostics") {
  CHECK_THROWS_WITH_AS(ScenarioConfig::parse(Json{{"kind", "nonsense"}}),
                       doctest::Contains("kind"), ConfigInvalid);
  Json bad = solve_config();
  bad.erase("pattern");
  CHECK_THROWS_WITH_AS(ScenarioConfig::parse(bad), doctest::Contains("pattern"),
                       ConfigInvalid);
  bad = solve_config();
  bad["backend"] = "quantum";
  CHECK_THROWS_WITH_AS(ScenarioConfig::parse(bad), doctest::Contains("backend"),
                       ConfigInvalid);
  bad = solve_config();
  bad["pattern"]["head"] = 30;
  CHECK_THROWS_AS(ScenarioConfig::parse(bad), ConfigInvalid);
  bad = solve_config();
  bad["verblunsky"] = Json{{"kind", "geometric"}, {"c", 0.5}, {"r", 0.5}};
  CHECK_THROWS_WITH_AS(ScenarioConfig::parse(bad),
                       doctest::Contains("float backend only"), ConfigInvalid);
}

TEST_CASE("non-pythagorean values are rejected when parsing exact scenarios") {
  Json cfg = solve_config();
  cfg["verblunsky"] =
      Json{{"kind", "constant"}, {"value", Json::array({"1/2", "0"})}};
  auto parsed = ScenarioConfig::parse(cfg);
  Report r = run_scenario(parsed);
  CHECK(!r.ok());
  CHECK(r.doc["result"]["error"]["type"] == "ConfigInvalid");
}

TEST_CASE("solve scenario reproduces the classification results") {
  Report r = run_scenario(ScenarioConfig::parse(solve_config()));
  REQUIRE(r.ok());
  CHECK(r.doc["result"]["dimension"] == 2);
  CHECK(r.doc["result"]["classification"] == "lebesgue-type");

  Json c35 = solve_config();
  c35["verblunsky"] =
      Json{{"kind", "constant"}, {"value", Json::array({"3/5", "0"})}};
  c35["order"] = 3;
  Report r35 = run_scenario(ScenarioConfig::parse(c35));
  REQUIRE(r35.ok());
  CHECK(r35.doc["result"]["dimension"] == 1);
  CHECK(r35.doc["result"]["classification"] == "trivial");
}

TEST_CASE("identity verification scenario") {
  Json cfg{{"kind", "verify-identities"},
           {"backend", "exact"},
           {"verblunsky",
            Json{{"kind", "constant"}, {"value", Json::array({"3/5", "0"})}}},
           {"window", 48},
           {"order", 2},
           {"instances", 2},
           {"seed", 7}};
  Report r = run_scenario(ScenarioConfig::parse(cfg));
  REQUIRE(r.ok());
  CHECK(r.doc["result"]["all_pass"] == true);
  CHECK(r.doc["result"]["identities"]["adjoint-symmetry"] == true);
  CHECK(r.doc["result"]["identities"]["ad-factorization"] == true);
}

TEST_CASE("kernel and reconstruct and olp scenarios") {
  Json k{{"kind", "verify-kernel"},
         {"backend", "exact"},
         {"verblunsky", Json{{"kind", "zero"}}},
         {"window", 48},
         {"order", 2},
         {"z", Json::array({"2", "0"})}};
  Report kr = run_scenario(ScenarioConfig::parse(k));
  REQUIRE(kr.ok());
  CHECK(kr.doc["result"]["gamma"][0] == Json::array({"1", "0"}));
  CHECK(kr.doc["result"]["gamma"][1] == Json::array({"4", "0"}));

  Json rec{{"kind", "reconstruct"},
           {"backend", "exact"},
           {"verblunsky", Json{{"kind", "zero"}}},
           {"window", 48},
           {"order_bound", 1},
           {"omega", Json{{"kind", "lebesgue"}}}};
  Report rr = run_scenario(ScenarioConfig::parse(rec));
  REQUIRE(rr.ok());
  CHECK(rr.doc["result"]["order"] == 1);
  // single coefficient z on the first derivative
  CHECK(rr.doc["result"]["coefficients"][1]["poly"] ==
        Json::array({Json::array({1, "1", "0"})}));

  Json olp{{"kind", "olp-dump"},
           {"backend", "exact"},
           {"verblunsky",
            Json{{"kind", "list"},
                 {"values", Json::array({Json::array({"3/5", "0"})})}}},
           {"window", 32},
           {"count", 3}};
  Report olpr = run_scenario(ScenarioConfig::parse(olp));
  REQUIRE(olpr.ok());
  CHECK(olpr.doc["result"]["x"][1] ==
        Json::array({Json::array({-1, "5/4", "0"}), Json::array({0, "-3/4", "0"})}));
}

TEST_CASE("reports round-trip and are byte-identical on the exact backend") {
  auto cfg = ScenarioConfig::parse(solve_config());
  Report a = run_scenario(cfg);
  Report b = run_scenario(cfg);
  CHECK(a.serialize() == b.serialize());
  Report back = Report::parse_text(a.serialize());
  CHECK(back.doc == a.doc);
}

TEST_CASE("tolerance defaults are applied and echoed") {
  auto cfg = ScenarioConfig::parse(solve_config());
  CHECK(cfg.zero_tol() == kDefaultZeroTol);
  CHECK(cfg.rank_tol() == kDefaultRankTol);
  Report r = run_scenario(cfg);
  CHECK(r.doc["scenario"]["tolerance"]["zero"] == kDefaultZeroTol);
  CHECK(r.doc["scenario"]["tolerance"]["rank"] == kDefaultRankTol);
}

TEST_CASE("sweep preserves order, captures errors, and is deterministic") {
  std::vector<ScenarioConfig> configs;
  Json ok = solve_config();
  ok["pattern"]["length"] = 12;
  ok["window"] = 48;
  configs.push_back(ScenarioConfig::parse(ok));

  Json failing = solve_config();
  failing["window"] = 24;  // too small for length 24 unknowns
  configs.push_back(ScenarioConfig::parse(failing));

  Json c35 = solve_config();
  c35["pattern"]["length"] = 12;
  c35["window"] = 48;
  c35["verblunsky"] =
      Json{{"kind", "constant"}, {"value", Json::array({"3/5", "0"})}};
  configs.push_back(ScenarioConfig::parse(c35));

  auto serial = sweep(configs, 1);
  auto parallel = sweep(configs, 3);
  REQUIRE(serial.size() == 3);
  CHECK(serial[0].ok());
  CHECK(!serial[1].ok());
  CHECK(serial[1].doc["result"]["error"]["type"] == "WindowTooSmall");
  CHECK(serial[2].ok());
  CHECK(serial[2].doc["result"]["dimension"] == 1);
  for (int i = 0; i < 3; ++i)
    CHECK(serial[i].serialize() == parallel[i].serialize());

  CHECK_THROWS_AS(sweep({}, 2), ConfigInvalid);
}

TEST_CASE("float backend scenario with tolerance override") {
  Json cfg = solve_config();
  cfg["backend"] = "float";
  cfg["verblunsky"] = Json{{"kind", "geometric"}, {"c", 0.4}, {"r", 0.8}};
  cfg["tolerance"] = Json{{"zero", 1e-9}};
  Report r = run_scenario(ScenarioConfig::parse(cfg));
  REQUIRE(r.ok());
  CHECK(r.doc["result"]["dimension"] == 1);
  CHECK(r.doc["scenario"]["tolerance"]["zero"] == 1e-9);
  CHECK(r.doc["scenario"]["tolerance"]["rank"] == kDefaultRankTol);
}

TEST_CASE("timing field appears only on request") {
  auto cfg = ScenarioConfig::parse(solve_config());
  CHECK(!run_scenario(cfg).doc.contains("wall_ms"));
  CHECK(run_scenario(cfg, true).doc.contains("wall_ms"));
}
