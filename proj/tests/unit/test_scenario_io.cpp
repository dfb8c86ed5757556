#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "trinc/scenario_io.hpp"

using namespace trinc;
using trinc::testing::data_dir;
using trinc::testing::naples;
using trinc::testing::TempDir;

namespace {

bool contains(const std::string& text, const std::string& needle) { return text.find(needle) != std::string::npos; }

std::string error_of(auto&& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("bundled scenario loads with the expected shape") {
  const auto& s = naples();
  CHECK(s.actions.size() == 20);
  CHECK(s.criteria.size() == 8);
  CHECK(s.category_count() == 4);
  std::size_t profiles = 0;
  for (const auto& r : s.reference_sets) profiles += r.profiles.size();
  CHECK(profiles == 6);
  CHECK(s.weight_vectors.size() == 6);
  CHECK(s.budgets.size() == 7);
  CHECK(s.constraint_profiles.contains("full"));
  CHECK(s.constraint_profiles.contains("relaxed"));
  CHECK(s.lambda == doctest::Approx(0.7));
}

TEST_CASE("overlay adds the second parameter set") {
  const auto& s = trinc::testing::naples_second();
  std::size_t profiles = 0;
  for (const auto& r : s.reference_sets) profiles += r.profiles.size();
  CHECK(profiles == 7);
  CHECK(s.actions == naples().actions);
  CHECK(s.criteria[1].indifference != naples().criteria[1].indifference);
}

TEST_CASE("a weight vector naming an unknown criterion is rejected with the id") {
  json doc = scenario_to_json(naples());
  doc["weights"]["w1"]["values"]["g9"] = 5;
  const auto message = error_of([&] { (void)scenario_from_json(doc); });
  CHECK(contains(message, "'g9'"));
}

TEST_CASE("save then load gives back the same scenario") {
  TempDir dir;
  const auto path = dir.path() / "copy.json";
  save_scenario(naples(), path);
  CHECK(load_scenario(path) == naples());
  CHECK(parse_scenario(dump_scenario(naples())) == naples());

  const auto& second = trinc::testing::naples_second();
  CHECK(parse_scenario(dump_scenario(second)) == second);
}

TEST_CASE("round trip survives random edits") {
  std::mt19937 rng(21);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    Scenario s = naples();
    for (auto& a : s.actions) {
      a.cost = std::round(unit(rng) * 1e6) / 100.0;
      a.on_decumano = unit(rng) < 0.5;
      const std::size_t j = 5;  // cardinal cost-like criterion
      a.performances[j] = std::round(unit(rng) * 50000.0);
    }
    s.lambda = 0.5 + 0.5 * unit(rng);
    s.budgets["extra"] = std::round(unit(rng) * 1e5);
    CHECK(parse_scenario(dump_scenario(s)) == s);
  }
}

TEST_CASE("performance csv round trip") {
  const auto& s = naples();
  const auto text = read_text_file(data_dir() / "naples_performance.csv");
  CHECK(parse_performance_csv(text, s) == s);
  CHECK(parse_performance_csv(performance_csv(s), s) == s);
  CHECK(load_performance_csv(data_dir() / "naples_performance.csv", s) == s);
}

TEST_CASE("csv labels and codes") {
  const auto& s = naples();
  const std::size_t g7 = s.criterion_index("g7");
  CHECK(s.actions[0].performances[g7] == 10.0);  // H-M

  std::string text = performance_csv(s);
  // Integer codes are accepted in place of labels.
  const auto pos = text.find("a1,VH");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, 5, "a1,4");
  CHECK(parse_performance_csv(text, s) == s);
}

TEST_CASE("csv errors name the line, action and criterion") {
  const auto& s = naples();
  std::string text = performance_csv(s);
  const auto pos = text.find("a2,VH,25");
  REQUIRE(pos != std::string::npos);
  auto empty = text;
  empty.replace(pos, 8, "a2,VH,");
  const auto m1 = error_of([&] { (void)parse_performance_csv(empty, s); });
  CHECK(contains(m1, "line 3"));
  CHECK(contains(m1, "a2"));
  CHECK(contains(m1, "g2"));

  auto bad_label = text;
  bad_label.replace(pos, 5, "a2,XX");
  const auto m2 = error_of([&] { (void)parse_performance_csv(bad_label, s); });
  CHECK(contains(m2, "a2"));
  CHECK(contains(m2, "g1"));

  CHECK_THROWS_AS(parse_performance_csv("id,g1\n", s), FormatError);
  CHECK_THROWS_AS(parse_performance_csv("action,g1,g2,g3,g4,g5,g6,g7,g9\n", s), FormatError);
  auto missing_row = text.substr(0, text.rfind("a20,"));
  CHECK(contains(error_of([&] { (void)parse_performance_csv(missing_row, s); }), "a20"));
}

TEST_CASE("parse errors carry the byte position") {
  const auto message = error_of([] { (void)parse_scenario("{\"format\": \"trinc-scenario\",,}", "bad.json"); });
  CHECK(contains(message, "bad.json"));
  CHECK(contains(message, "byte 29"));
}

TEST_CASE("format and version are checked") {
  json doc = scenario_to_json(naples());
  doc["format"] = "something-else";
  CHECK_THROWS_AS(scenario_from_json(doc), FormatError);
  doc = scenario_to_json(naples());
  doc["version"] = 99;
  CHECK_THROWS_AS(scenario_from_json(doc), FormatError);
}

TEST_CASE("schema errors carry a pointer to the field") {
  json doc = scenario_to_json(naples());
  doc["actions"][3]["cost"] = "a lot";
  const auto message = error_of([&] { (void)scenario_from_json(doc); });
  CHECK(contains(message, "/actions/3/cost"));
}

TEST_CASE("threshold encodings") {
  CHECK(threshold_from_json(nullptr) == ThresholdSpec::none());
  CHECK(threshold_from_json("none") == ThresholdSpec::none());
  CHECK(threshold_from_json(3.5) == ThresholdSpec::constant(3.5));
  CHECK(threshold_from_json(json{{"alpha", 0.1}, {"beta", 2}}) == ThresholdSpec::affine(0.1, 2));
  for (const auto& t : {ThresholdSpec::none(), ThresholdSpec::constant(7), ThresholdSpec::affine(0.2, 1)}) {
    CHECK(threshold_from_json(threshold_to_json(t)) == t);
  }
  CHECK_THROWS_AS(threshold_from_json("big"), FormatError);
  CHECK_THROWS_AS(threshold_from_json(json{{"alpha", 1}}), FormatError);
}

TEST_CASE("deck encodings") {
  const auto deck = deck_from_json(json::parse(read_text_file(data_dir() / "decks" / "focus_group_w1.json")));
  CHECK(deck_from_json(deck_to_json(deck)) == deck);
  const auto expert = deck_from_json(json::parse(read_text_file(data_dir() / "decks" / "expert_w3.json")));
  CHECK(deck_from_json(deck_to_json(expert)) == expert);
  CHECK_THROWS_AS(deck_from_json(json{{"order", "sideways"}, {"levels", json::array()}, {"ratio", 2}}), FormatError);
}

TEST_CASE("assignment documents round trip") {
  AssignmentResult r;
  r.weight_set = "w1";
  r.lambda = 0.7;
  r.categories = 4;
  r.actions.push_back({"a1", 3, 3, {3, 3}});
  r.actions.push_back({"a2", 4, 3, {3, 4}});
  const auto back = assignment_from_json(assignment_to_json(r));
  CHECK(back.intervals() == r.intervals());
  CHECK(back.weight_set == "w1");
  CHECK(back.lambda == 0.7);
}
