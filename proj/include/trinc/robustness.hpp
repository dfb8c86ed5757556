#ifndef TRINC_ROBUSTNESS_HPP
#define TRINC_ROBUSTNESS_HPP

#include <string>
#include <utility>
#include <vector>

#include "trinc/domain.hpp"
#include "trinc/portfolio.hpp"

namespace trinc {

enum class AssignmentSource {
  engine,     ///< sort with the outranking engine at the scenario's lambda
  reference,  ///< use the scenario's published assignments for the weight set
};

struct BudgetPoint {
  std::string name;
  double amount = 0.0;
};

struct RobustnessCell {
  std::string weight_set;
  BudgetPoint budget;
  std::string profile;
  std::vector<CategoryInterval> assignment;
  PriorityLadder ladder;
  PortfolioSolution portfolio;
};

struct RobustnessOptions {
  AssignmentSource source = AssignmentSource::engine;
  double lambda = -1.0;  ///< < 0: scenario lambda
  bool parallel = true;
};

struct RobustnessResult {
  std::vector<RobustnessCell> cells;  ///< weight-set major, then budget, then profile
  /// Fraction of feasible cells selecting each action.
  std::vector<double> selection_frequency;
  /// Jaccard similarity between the portfolios of every pair of cells.
  std::vector<std::vector<double>> jaccard;
};

/// Runs assignment and selection for every (weight set, budget, profile) cell.
RobustnessResult robustness_matrix(const Scenario& scenario, const std::vector<std::string>& weight_sets,
                                   const std::vector<BudgetPoint>& budgets, const std::vector<std::string>& profiles,
                                   const RobustnessOptions& options = {});

/// Budget by name ("B2") or literal amount ("45710").
BudgetPoint resolve_budget(const Scenario& scenario, const std::string& text);

double jaccard_similarity(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b);

}  // namespace trinc

#endif  // TRINC_ROBUSTNESS_HPP
