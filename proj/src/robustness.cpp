#include "trinc/robustness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <exception>
#include <iterator>
#include <mutex>
#include <thread>

#include "trinc/outranking.hpp"

namespace trinc {

double jaccard_similarity(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  std::vector<std::size_t> sa(a), sb(b);
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  std::vector<std::size_t> both;
  std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(both));
  const std::size_t either = sa.size() + sb.size() - both.size();
  if (either == 0) return 1.0;
  return static_cast<double>(both.size()) / static_cast<double>(either);
}

BudgetPoint resolve_budget(const Scenario& scenario, const std::string& text) {
  if (auto it = scenario.budgets.find(text); it != scenario.budgets.end()) return {it->first, it->second};
  double amount = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), amount);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ScenarioError("unknown budget '" + text + "'");
  }
  if (!(amount >= 0.0)) throw ScenarioError("budget must be non-negative");
  // Name a literal amount after the configured budget it equals, if any.
  for (const auto& [name, value] : scenario.budgets) {
    if (value == amount) return {name, amount};
  }
  return {text, amount};
}

RobustnessResult robustness_matrix(const Scenario& scenario, const std::vector<std::string>& weight_sets,
                                   const std::vector<BudgetPoint>& budgets, const std::vector<std::string>& profiles,
                                   const RobustnessOptions& options) {
  const double lambda = options.lambda < 0.0 ? scenario.lambda : options.lambda;

  // Assignments and ladders depend only on the weight set.
  std::vector<std::vector<CategoryInterval>> assignments;
  for (const auto& w : weight_sets) {
    if (options.source == AssignmentSource::reference) {
      auto it = scenario.reference_assignments.find(w);
      if (it == scenario.reference_assignments.end()) {
        throw ScenarioError("no reference assignment for weight set '" + w + "'");
      }
      assignments.push_back(it->second);
    } else {
      assignments.push_back(assign(scenario, w, lambda).intervals());
    }
  }
  for (const auto& p : profiles) {
    if (!scenario.constraint_profiles.contains(p)) throw ScenarioError("unknown constraint profile '" + p + "'");
  }

  RobustnessResult result;
  for (std::size_t w = 0; w < weight_sets.size(); ++w) {
    const auto ladder = build_ladder(assignments[w]);
    for (const auto& b : budgets) {
      for (const auto& p : profiles) {
        RobustnessCell cell;
        cell.weight_set = weight_sets[w];
        cell.budget = b;
        cell.profile = p;
        cell.assignment = assignments[w];
        cell.ladder = ladder;
        result.cells.push_back(std::move(cell));
      }
    }
  }

  auto solve_cell = [&](RobustnessCell& cell) {
    const auto cs = resolve_constraints(scenario, cell.profile, cell.budget.amount);
    cell.portfolio = solve_exact(cell.ladder, cs);
  };

  const unsigned workers =
      options.parallel ? std::min<unsigned>(std::max(1u, std::thread::hardware_concurrency()),
                                            static_cast<unsigned>(result.cells.size()))
                       : 1u;
  if (workers <= 1) {
    for (auto& cell : result.cells) solve_cell(cell);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < workers; ++t) {
      pool.emplace_back([&] {
        for (std::size_t k = next++; k < result.cells.size(); k = next++) {
          try {
            solve_cell(result.cells[k]);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  }

  result.selection_frequency.assign(scenario.actions.size(), 0.0);
  std::size_t feasible = 0;
  for (const auto& cell : result.cells) {
    if (cell.portfolio.infeasible) continue;
    ++feasible;
    for (auto i : cell.portfolio.selected) result.selection_frequency[i] += 1.0;
  }
  if (feasible > 0) {
    for (auto& f : result.selection_frequency) f /= static_cast<double>(feasible);
  }

  const std::size_t n = result.cells.size();
  result.jaccard.assign(n, std::vector<double>(n, 1.0));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      const double j = jaccard_similarity(result.cells[a].portfolio.selected, result.cells[b].portfolio.selected);
      result.jaccard[a][b] = result.jaccard[b][a] = j;
    }
  }
  return result;
}

}  // namespace trinc
