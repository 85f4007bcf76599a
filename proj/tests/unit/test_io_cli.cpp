#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "sofic/construct.hpp"
#include "sofic/error.hpp"
#include "sofic/scenario.hpp"

using namespace sofic;

namespace {

const std::filesystem::path kScenarios = SOFIC_SCENARIO_DIR;

Json base_scenario() {
  return Json::parse(R"({
    "version": 1,
    "name": "unit",
    "group": {"type": "free_abelian", "rank": 1},
    "action": {"type": "integer_translation", "rank": 1},
    "constructor": {"type": "amenable", "folner": {"interval": [0, 19]}},
    "F": {"ball": {"generators": "standard", "radius": 1}},
    "E": {"interval": [0, 1]},
    "eps": "1/5",
    "seed": 1
  })");
}

std::filesystem::path temp_dir() {
  auto dir = std::filesystem::temp_directory_path() / "sofic_unit_io";
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("rational and permutation json") {
  CHECK(rational_from_json(Json("3/10")) == ratio(3, 10));
  CHECK(rational_from_json(Json::parse(R"({"num": 1, "den": 4})")) == ratio(1, 4));
  CHECK(rational_from_json(Json(2)) == Rational(2));
  CHECK_THROWS_AS(rational_from_json(Json(0.5)), Error);
  CHECK(rational_json(ratio(47, 50)).dump() == R"({"num":47,"den":50,"decimal":"0.940000"})");
  CHECK(permutation_from_json(permutation_json(Permutation({2, 0, 1}))) == Permutation({2, 0, 1}));
  CHECK_THROWS_AS(permutation_from_json(Json::parse("[0, 0]")), Error);
}

TEST_CASE("map and witness documents round-trip") {
  auto g = std::make_shared<FreeAbelianGroup>(1);
  IntegerTranslation a(1);
  std::vector<GroupElement> folner;
  for (int i = 0; i < 8; ++i) folner.push_back(g->element({i}));
  const Window F(g, {g->element({-1}), g->identity(), g->element({1})});
  const auto c = amenable_construct(a, folner, F, int_window(-1, 1));
  const Json mj = map_json(c.map);
  const SoficMap back = map_from_json(mj, g);
  CHECK(back.permutations() == c.map.permutations());
  CHECK(back.domain_window().elements() == c.map.domain_window().elements());
  const Json wj = witness_json(c.witness, c.map.carrier_size());
  CHECK(witness_from_json(wj) == c.witness);
  CHECK(wj.dump() == witness_json(witness_from_json(wj), 8).dump());
  CHECK_THROWS_AS(map_from_json(mj, std::make_shared<FreeAbelianGroup>(2)), Error);

  Json broken = wj;
  broken["pi"].erase("3");
  CHECK_THROWS_AS(witness_from_json(broken), Error);
}

TEST_CASE("atomic writes replace the target") {
  const auto path = temp_dir() / "atomic.json";
  write_atomic(path, "one");
  write_atomic(path, "two");
  std::ifstream in(path);
  std::string text;
  std::getline(in, text);
  CHECK(text == "two");
  CHECK_FALSE(std::filesystem::exists(path.string() + ".tmp"));
}

TEST_CASE("scenario exit codes") {
  SUBCASE("pass") {
    const auto r = run_scenario(base_scenario(), ".", Command::Construct);
    CHECK(r.exit_code == kExitPass);
    CHECK(r.document["pass"] == true);
    CHECK(r.document["report"]["witness_fraction"]["num"] == 9);
  }
  SUBCASE("eps outside (0, 1)") {
    for (const char* eps : {"0", "1", "-1/2", "3/2"}) {
      Json s = base_scenario();
      s["eps"] = eps;
      CHECK(run_scenario(s, ".", Command::Construct).exit_code == kExitParse);
    }
  }
  SUBCASE("unknown fields are rejected") {
    Json s = base_scenario();
    s["colour"] = "blue";
    const auto r = run_scenario(s, ".", Command::Construct);
    CHECK(r.exit_code == kExitParse);
    CHECK(r.document["error"]["message"].get<std::string>().find("colour") != std::string::npos);
    Json t = base_scenario();
    t["constructor"]["folner"]["interval"] = Json::array({0, 19, 3});
    CHECK(run_scenario(t, ".", Command::Construct).exit_code == kExitParse);
    Json v = base_scenario();
    v["version"] = 2;
    CHECK(run_scenario(v, ".", Command::Construct).exit_code == kExitParse);
  }
  SUBCASE("mismatched group and action") {
    Json s = base_scenario();
    s["group"] = Json::parse(R"({"type": "free", "rank": 2})");
    CHECK(run_scenario(s, ".", Command::Construct).exit_code == kExitParse);
  }
  SUBCASE("verification failure") {
    Json s = base_scenario();
    s["eps"] = "1/20";
    const auto r = run_scenario(s, ".", Command::Construct);
    CHECK(r.exit_code == kExitFail);
    CHECK(r.document["pass"] == false);
    CHECK_FALSE(r.document["diagnostics"].empty());
  }
  SUBCASE("cap overflow") {
    Json s = base_scenario();
    s["caps"] = Json::parse(R"({"carrier": 10})");
    s["constructor"] = Json::parse(R"({"type": "free"})");
    s["group"] = Json::parse(R"({"type": "free", "rank": 2})");
    s["action"] = Json::parse(R"({"type": "left_translation"})");
    s["E"] = Json::parse(R"({"points": ["e"]})");
    CHECK(run_scenario(s, ".", Command::Construct).exit_code == kExitCap);
  }
  SUBCASE("explain does not execute") {
    Json s = base_scenario();
    s["caps"] = Json::parse(R"({"carrier": 1})");
    const auto r = run_scenario(s, ".", Command::Explain);
    CHECK(r.exit_code == kExitPass);
    CHECK(r.document["plan"]["type"] == "amenable");
  }
}

TEST_CASE("reports are byte-identical for the same scenario and seed") {
  Json s = base_scenario();
  s["constructor"]["policy"] = "seeded_shuffle";
  s["dump"] = Json::parse(R"({"map": true, "witness": true})");
  const auto a = run_scenario(s, ".", Command::Construct);
  const auto b = run_scenario(s, ".", Command::Construct);
  CHECK(a.document.dump(2) == b.document.dump(2));
  CHECK(a.summary == b.summary);
  RunOptions other;
  other.seed = 99;
  const auto c = run_scenario(s, ".", Command::Construct, other);
  CHECK(c.document["seed"] == 99);
  CHECK(c.document["map"].dump() != a.document["map"].dump());
}

TEST_CASE("verify against stored documents") {
  Json s = base_scenario();
  s["dump"] = Json::parse(R"({"map": true, "witness": true})");
  const auto built = run_scenario(s, ".", Command::Construct);
  const auto dir = temp_dir();
  write_atomic(dir / "report.json", built.document.dump(2));
  RunOptions opt;
  opt.map_path = dir / "report.json";
  opt.witness_path = dir / "report.json";
  CHECK(run_scenario(s, ".", Command::Verify, opt).exit_code == kExitPass);

  Json tampered = built.document;
  auto& perm = tampered["map"]["entries"][1]["perm"];
  std::swap(perm[0], perm[1]);
  write_atomic(dir / "tampered.json", tampered.dump(2));
  opt.map_path = dir / "tampered.json";
  CHECK(run_scenario(s, ".", Command::Verify, opt).exit_code == kExitFail);

  write_atomic(dir / "garbage.json", "{not json");
  opt.map_path = dir / "garbage.json";
  CHECK(run_scenario(s, ".", Command::Verify, opt).exit_code == kExitParse);
}

TEST_CASE("shipped scenarios") {
  CHECK(run_scenario_file(kScenarios / "z_translation.json", Command::Construct).exit_code == kExitPass);
  CHECK(run_scenario_file(kScenarios / "eps_zero.json", Command::Construct).exit_code == kExitParse);
  CHECK(run_scenario_file(kScenarios / "constant_identity.json", Command::Construct).exit_code == kExitFail);
  CHECK(run_scenario_file(kScenarios / "free_cap_overflow.json", Command::Construct).exit_code == kExitCap);
  CHECK(run_scenario_file(kScenarios / "missing.json", Command::Construct).exit_code == kExitParse);
  for (const auto& entry : std::filesystem::directory_iterator(kScenarios)) {
    if (entry.path().extension() != ".json") continue;
    CAPTURE(entry.path().string());
    const auto r = run_scenario_file(entry.path(), Command::Explain);
    CHECK((r.exit_code == kExitPass || entry.path().filename() == "eps_zero.json"));
  }
}
