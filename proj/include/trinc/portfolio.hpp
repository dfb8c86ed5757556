/**
 * @file portfolio.hpp
 * @brief Priority-ordered portfolio selection as a 0-1 program.
 *
 * The objective gives every action the coefficient of its priority level.
 * Each level's coefficient is one more than the total weight of all lower
 * levels, so maximizing the sum is the same as lexicographically maximizing
 * the number of selected actions per level, from the top down.
 */

#ifndef TRINC_PORTFOLIO_HPP
#define TRINC_PORTFOLIO_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "trinc/domain.hpp"

namespace trinc {

struct LadderLevel {
  CategoryInterval category;
  std::vector<std::size_t> members;
  std::int64_t coefficient = 0;

  bool operator==(const LadderLevel&) const = default;
};

/// Effective priority levels in ascending order. Interval assignments
/// form their own level between the categories they span.
struct PriorityLadder {
  std::vector<LadderLevel> levels;
  std::size_t action_count = 0;

  /// Coefficient c_i of every action, indexed by action.
  [[nodiscard]] std::vector<std::int64_t> action_coefficients() const;
  /// Index into `levels` for every action.
  [[nodiscard]] std::vector<std::size_t> action_levels() const;
  [[nodiscard]] std::int64_t objective(std::span<const std::size_t> selected) const;
  /// Selected count per level, in level order.
  [[nodiscard]] std::vector<int> level_counts(std::span<const std::size_t> selected) const;

  bool operator==(const PriorityLadder&) const = default;
};

/// Orders the distinct intervals (by midpoint; on equal midpoints the wider
/// interval ranks lower) and applies c_1 = 1, c_h = 1 + sum_{k<h} c_k |level_k|.
PriorityLadder build_ladder(std::span<const CategoryInterval> assignments);

struct MinCountRule {
  std::string name;
  std::vector<std::size_t> actions;
  int minimum = 0;
};

/// At least `minimum` of all listed pairs must be selected together
/// (x_ij = x_i AND x_j), counted across every group.
struct SynergyRule {
  std::string name;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> groups;
  int minimum = 0;
};

struct FunctionMinimumRule {
  std::string name;
  int function = 1;
  std::vector<std::size_t> actions;
  int minimum = 0;
};

struct CoverageCell {
  int quadrant = 1;
  int function = 1;
  std::vector<std::size_t> actions;
};

/// A quadrant is covered when every one of its cells has a selected action;
/// at least 4 - q quadrants must be covered.
struct CoverageRule {
  std::string name;
  std::vector<int> functions;
  std::vector<CoverageCell> cells;
  int q = 0;

  [[nodiscard]] int required_quadrants() const { return kQuadrantCount - q; }
};

struct ConstraintSet {
  std::vector<double> costs;
  double budget = 0.0;
  std::vector<MinCountRule> min_counts;
  std::vector<SynergyRule> synergies;
  std::vector<FunctionMinimumRule> function_minima;
  std::vector<CoverageRule> coverage;

  [[nodiscard]] std::size_t action_count() const { return costs.size(); }
  /// Number of non-budget rows.
  [[nodiscard]] std::size_t rule_count() const;
  /// Names of the non-budget rows, in row order.
  [[nodiscard]] std::vector<std::string> rule_names() const;
  /// Copy without the listed non-budget rows (indices into rule order).
  [[nodiscard]] ConstraintSet without_rules(std::span<const std::size_t> rules) const;
};

/// Resolves a symbolic profile against the scenario's actions.
/// Throws ScenarioError on unknown action ids or profile names.
ConstraintSet resolve_constraints(const Scenario& scenario, const ConstraintProfile& profile, double budget);
ConstraintSet resolve_constraints(const Scenario& scenario, const std::string& profile, double budget);

struct ConstraintRow {
  std::string name;
  std::string kind;  ///< budget | min_count | synergy | function_minimum | coverage
  double lhs = 0.0;
  double rhs = 0.0;
  bool at_most = false;  ///< lhs <= rhs (budget) rather than lhs >= rhs
  bool satisfied = true;
};

struct SatisfactionReport {
  std::vector<ConstraintRow> rows;

  [[nodiscard]] bool all_satisfied() const;
  [[nodiscard]] std::vector<std::string> violated() const;
};

/// Evaluates every row for a selection given as sorted action indices.
SatisfactionReport check_feasible(std::span<const std::size_t> selected, const ConstraintSet& constraints);

struct PortfolioSolution {
  std::vector<std::size_t> selected;
  std::int64_t objective = 0;
  double total_cost = 0.0;
  std::vector<int> level_counts;
  SatisfactionReport report;
  bool infeasible = false;
  /// When infeasible: a smallest set of non-budget rows whose removal makes the
  /// budget satisfiable together with all remaining rows.
  std::vector<std::string> unsatisfiable_rows;
  bool oracle_verified = false;
  std::size_t nodes = 0;
};

/// Depth-first branch and bound. Among equal-objective optima returns the
/// lexicographically smallest list of selected action indices.
PortfolioSolution solve_exact(const PriorityLadder& ladder, const ConstraintSet& constraints);

/// Exhaustive enumeration, same tie-break. At most 24 actions.
PortfolioSolution brute_force_oracle(const PriorityLadder& ladder, const ConstraintSet& constraints);

/// Maximizes the selected count of each level from the top down, fixing each
/// optimal count as an equality before moving to the next level.
PortfolioSolution sequential_lexicographic(const PriorityLadder& ladder, const ConstraintSet& constraints);

/// solve_exact, cross-checked against brute_force_oracle when the instance is
/// small enough; sets oracle_verified on agreement, throws std::logic_error otherwise.
PortfolioSolution solve_certified(const PriorityLadder& ladder, const ConstraintSet& constraints,
                                  std::size_t oracle_limit = 20);

/// Smallest set of rule indices (non-budget rows) to drop for feasibility.
std::vector<std::size_t> minimal_relaxation(const ConstraintSet& constraints);

}  // namespace trinc

#endif  // TRINC_PORTFOLIO_HPP
