#include <algorithm>

#include "doctest.h"
#include "fixtures.hpp"
#include "trinc/robustness.hpp"

using namespace trinc;
using trinc::testing::naples;

namespace {

const std::vector<std::string> kAllWeights{"w1", "w2", "w3", "w4", "w5", "w6"};

std::vector<BudgetPoint> all_budgets(const Scenario& s) {
  std::vector<BudgetPoint> out;
  for (const auto& name : {"B1", "B2", "B3", "B4", "B5", "B6", "B7"}) out.push_back(resolve_budget(s, name));
  return out;
}

}  // namespace

TEST_CASE("jaccard similarity") {
  CHECK(jaccard_similarity({1, 2, 3}, {2, 3, 4}) == doctest::Approx(0.5));
  CHECK(jaccard_similarity({}, {}) == 1.0);
  CHECK(jaccard_similarity({1}, {}) == 0.0);
  CHECK(jaccard_similarity({3, 1}, {1, 3}) == 1.0);
}

TEST_CASE("budgets by name or amount") {
  const auto& s = naples();
  CHECK(resolve_budget(s, "B2").amount == 45710);
  const auto literal = resolve_budget(s, "45710");
  CHECK(literal.name == "B2");
  CHECK(resolve_budget(s, "12345").name == "12345");
  CHECK_THROWS_AS(resolve_budget(s, "B9"), ScenarioError);
  CHECK_THROWS_AS(resolve_budget(s, "-5"), ScenarioError);
}

TEST_CASE("two projects are never funded at the second budget") {
  const auto& s = naples();
  const std::vector<BudgetPoint> b2{resolve_budget(s, "B2")};
  for (auto source : {AssignmentSource::reference, AssignmentSource::engine}) {
    RobustnessOptions options;
    options.source = source;
    const auto r = robustness_matrix(s, kAllWeights, b2, {"full"}, options);
    REQUIRE(r.cells.size() == 6);
    CHECK(r.selection_frequency[s.action_index("a14")] == 0.0);
    CHECK(r.selection_frequency[s.action_index("a18")] == 0.0);
    for (const auto& cell : r.cells) CHECK_FALSE(cell.portfolio.infeasible);
  }
}

TEST_CASE("a single cell equals a direct run") {
  const auto& s = naples();
  const auto b3 = resolve_budget(s, "B3");
  RobustnessOptions options;
  options.source = AssignmentSource::reference;
  const auto r = robustness_matrix(s, {"w1"}, {b3}, {"full"}, options);
  REQUIRE(r.cells.size() == 1);
  CHECK(r.jaccard == std::vector<std::vector<double>>{{1.0}});
  const auto direct =
      solve_exact(build_ladder(s.reference_assignments.at("w1")), resolve_constraints(s, "full", b3.amount));
  CHECK(r.cells[0].portfolio.selected == direct.selected);
  CHECK(r.cells[0].portfolio.objective == direct.objective);
  for (std::size_t i = 0; i < s.actions.size(); ++i) {
    const bool in = std::find(direct.selected.begin(), direct.selected.end(), i) != direct.selected.end();
    CHECK(r.selection_frequency[i] == (in ? 1.0 : 0.0));
  }
}

TEST_CASE("optimum never decreases with budget") {
  const auto& s = naples();
  for (auto source : {AssignmentSource::reference, AssignmentSource::engine}) {
    RobustnessOptions options;
    options.source = source;
    const auto r = robustness_matrix(s, kAllWeights, all_budgets(s), {"relaxed"}, options);
    REQUIRE(r.cells.size() == 42);
    for (std::size_t w = 0; w < 6; ++w) {
      // Budgets are listed from largest to smallest.
      for (std::size_t b = 1; b < 7; ++b) {
        const auto& larger = r.cells[w * 7 + b - 1].portfolio;
        const auto& smaller = r.cells[w * 7 + b].portfolio;
        REQUIRE_FALSE(smaller.infeasible);
        CHECK(larger.objective >= smaller.objective);
      }
    }
  }
}

TEST_CASE("portfolio cost shrinks with the budget along the published scenario path") {
  const auto& s = naples();
  RobustnessOptions options;
  options.source = AssignmentSource::reference;
  const auto budgets = all_budgets(s);
  const std::vector<BudgetPoint> high(budgets.begin(), budgets.begin() + 5);
  const std::vector<BudgetPoint> low(budgets.begin() + 5, budgets.end());
  const auto full = robustness_matrix(s, {"w1"}, high, {"full"}, options);
  const auto relaxed = robustness_matrix(s, {"w1"}, low, {"relaxed"}, options);
  std::vector<double> cost;
  for (const auto& c : full.cells) cost.push_back(c.portfolio.total_cost);
  for (const auto& c : relaxed.cells) cost.push_back(c.portfolio.total_cost);
  for (std::size_t k = 1; k < cost.size(); ++k) CHECK(cost[k] <= cost[k - 1]);
}

TEST_CASE("frequencies average over feasible cells and jaccard is symmetric") {
  const auto& s = naples();
  RobustnessOptions options;
  options.source = AssignmentSource::reference;
  const auto r = robustness_matrix(s, {"w1", "w4"}, all_budgets(s), {"full"}, options);
  std::size_t feasible = 0, selected = 0;
  for (const auto& c : r.cells) {
    if (c.portfolio.infeasible) continue;
    ++feasible;
    selected += c.portfolio.selected.size();
  }
  double sum = 0.0;
  for (double f : r.selection_frequency) sum += f;
  CHECK(sum * static_cast<double>(feasible) == doctest::Approx(static_cast<double>(selected)));
  for (std::size_t a = 0; a < r.cells.size(); ++a) {
    CHECK(r.jaccard[a][a] == 1.0);
    for (std::size_t b = 0; b < r.cells.size(); ++b) CHECK(r.jaccard[a][b] == r.jaccard[b][a]);
  }
}

TEST_CASE("parallel and sequential runs agree") {
  const auto& s = naples();
  RobustnessOptions par, seq;
  seq.parallel = false;
  const auto a = robustness_matrix(s, kAllWeights, all_budgets(s), {"full", "relaxed"}, par);
  const auto b = robustness_matrix(s, kAllWeights, all_budgets(s), {"full", "relaxed"}, seq);
  REQUIRE(a.cells.size() == b.cells.size());
  for (std::size_t k = 0; k < a.cells.size(); ++k) {
    CHECK(a.cells[k].portfolio.selected == b.cells[k].portfolio.selected);
    CHECK(a.cells[k].portfolio.infeasible == b.cells[k].portfolio.infeasible);
  }
  CHECK(a.selection_frequency == b.selection_frequency);
}

TEST_CASE("unknown names are errors") {
  const auto& s = naples();
  const std::vector<BudgetPoint> b{{"B2", 45710}};
  RobustnessOptions ref;
  ref.source = AssignmentSource::reference;
  CHECK_THROWS_AS(robustness_matrix(s, {"w9"}, b, {"full"}, ref), ScenarioError);
  CHECK_THROWS_AS(robustness_matrix(s, {"w1"}, b, {"loose"}), ScenarioError);
}
