#include <algorithm>
#include <map>
#include <set>

#include "trinc/portfolio.hpp"

namespace trinc {

std::size_t ConstraintSet::rule_count() const {
  return min_counts.size() + synergies.size() + function_minima.size() + coverage.size();
}

std::vector<std::string> ConstraintSet::rule_names() const {
  std::vector<std::string> names;
  for (const auto& r : min_counts) names.push_back(r.name);
  for (const auto& r : synergies) names.push_back(r.name);
  for (const auto& r : function_minima) names.push_back(r.name);
  for (const auto& r : coverage) names.push_back(r.name);
  return names;
}

ConstraintSet ConstraintSet::without_rules(std::span<const std::size_t> rules) const {
  const std::set<std::size_t> drop(rules.begin(), rules.end());
  ConstraintSet out;
  out.costs = costs;
  out.budget = budget;
  std::size_t row = 0;
  auto keep = [&](const auto& from, auto& to) {
    for (const auto& r : from) {
      if (!drop.contains(row)) to.push_back(r);
      ++row;
    }
  };
  keep(min_counts, out.min_counts);
  keep(synergies, out.synergies);
  keep(function_minima, out.function_minima);
  keep(coverage, out.coverage);
  return out;
}

namespace {

std::vector<std::size_t> resolve_ids(const Scenario& scenario, const std::vector<std::string>& ids) {
  std::vector<std::size_t> out;
  out.reserve(ids.size());
  for (const auto& id : ids) out.push_back(scenario.action_index(id));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

ConstraintSet resolve_constraints(const Scenario& scenario, const ConstraintProfile& profile, double budget) {
  if (!(budget >= 0.0)) throw ScenarioError("budget must be non-negative");
  ConstraintSet cs;
  cs.budget = budget;
  for (const auto& a : scenario.actions) cs.costs.push_back(a.cost);

  for (const auto& spec : profile.min_counts) {
    MinCountRule rule{spec.name, {}, spec.minimum};
    if (spec.selector == "on_decumano") {
      for (std::size_t i = 0; i < scenario.actions.size(); ++i) {
        if (scenario.actions[i].on_decumano) rule.actions.push_back(i);
      }
    } else if (spec.selector == "explicit") {
      rule.actions = resolve_ids(scenario, spec.actions);
    } else {
      throw ScenarioError("unknown selector '" + spec.selector + "' in rule " + spec.name);
    }
    cs.min_counts.push_back(std::move(rule));
  }

  for (const auto& spec : profile.synergies) {
    SynergyRule rule{spec.name, {}, spec.minimum};
    if (spec.source == "insulae") {
      std::map<std::string, std::vector<std::size_t>> insulae;
      for (std::size_t i = 0; i < scenario.actions.size(); ++i) {
        if (scenario.actions[i].insula) insulae[*scenario.actions[i].insula].push_back(i);
      }
      for (const auto& [name, members] : insulae) {
        std::vector<std::pair<std::size_t, std::size_t>> group;
        for (std::size_t x = 0; x < members.size(); ++x) {
          for (std::size_t y = x + 1; y < members.size(); ++y) group.emplace_back(members[x], members[y]);
        }
        if (!group.empty()) rule.groups.push_back(std::move(group));
      }
    } else if (spec.source == "explicit") {
      std::vector<std::pair<std::size_t, std::size_t>> group;
      for (const auto& [i, j] : spec.pairs) group.emplace_back(scenario.action_index(i), scenario.action_index(j));
      rule.groups.push_back(std::move(group));
    } else {
      throw ScenarioError("unknown synergy source '" + spec.source + "' in rule " + spec.name);
    }
    cs.synergies.push_back(std::move(rule));
  }

  for (const auto& spec : profile.function_minima) {
    FunctionMinimumRule rule{spec.name, spec.function, {}, spec.minimum};
    if (spec.actions.empty()) {
      for (std::size_t i = 0; i < scenario.actions.size(); ++i) {
        if (scenario.actions[i].functions.contains(spec.function)) rule.actions.push_back(i);
      }
    } else {
      rule.actions = resolve_ids(scenario, spec.actions);
    }
    cs.function_minima.push_back(std::move(rule));
  }

  for (const auto& spec : profile.coverage) {
    if (spec.q < 0 || spec.q > 3) throw ScenarioError("coverage rule " + spec.name + ": q must be in 0..3");
    CoverageRule rule{spec.name, spec.functions, {}, spec.q};
    if (spec.cells.empty()) {
      for (int u = 1; u <= kQuadrantCount; ++u) {
        for (int f : spec.functions) {
          CoverageCell cell{u, f, {}};
          for (std::size_t i = 0; i < scenario.actions.size(); ++i) {
            const auto& a = scenario.actions[i];
            if (a.quadrant == u && a.functions.contains(f)) cell.actions.push_back(i);
          }
          rule.cells.push_back(std::move(cell));
        }
      }
    } else {
      for (const auto& c : spec.cells) rule.cells.push_back({c.quadrant, c.function, resolve_ids(scenario, c.actions)});
    }
    cs.coverage.push_back(std::move(rule));
  }
  return cs;
}

ConstraintSet resolve_constraints(const Scenario& scenario, const std::string& profile, double budget) {
  auto it = scenario.constraint_profiles.find(profile);
  if (it == scenario.constraint_profiles.end()) throw ScenarioError("unknown constraint profile '" + profile + "'");
  return resolve_constraints(scenario, it->second, budget);
}

bool SatisfactionReport::all_satisfied() const {
  return std::all_of(rows.begin(), rows.end(), [](const ConstraintRow& r) { return r.satisfied; });
}

std::vector<std::string> SatisfactionReport::violated() const {
  std::vector<std::string> out;
  for (const auto& r : rows) {
    if (!r.satisfied) out.push_back(r.name);
  }
  return out;
}

SatisfactionReport check_feasible(std::span<const std::size_t> selected, const ConstraintSet& cs) {
  std::vector<char> x(cs.action_count(), 0);
  for (auto i : selected) x.at(i) = 1;

  SatisfactionReport report;
  double cost = 0.0;
  for (auto i : selected) cost += cs.costs[i];
  report.rows.push_back({"budget", "budget", cost, cs.budget, true, cost <= cs.budget + 1e-9});

  for (const auto& r : cs.min_counts) {
    int n = 0;
    for (auto i : r.actions) n += x[i];
    report.rows.push_back({r.name, "min_count", double(n), double(r.minimum), false, n >= r.minimum});
  }
  for (const auto& r : cs.synergies) {
    int n = 0;
    for (const auto& group : r.groups) {
      for (const auto& [i, j] : group) n += x[i] && x[j];
    }
    report.rows.push_back({r.name, "synergy", double(n), double(r.minimum), false, n >= r.minimum});
  }
  for (const auto& r : cs.function_minima) {
    int n = 0;
    for (auto i : r.actions) n += x[i];
    report.rows.push_back({r.name, "function_minimum", double(n), double(r.minimum), false, n >= r.minimum});
  }
  for (const auto& r : cs.coverage) {
    int covered = 0;
    for (int u = 1; u <= kQuadrantCount; ++u) {
      bool any_cell = false;
      bool all_cells = true;
      for (const auto& cell : r.cells) {
        if (cell.quadrant != u) continue;
        any_cell = true;
        all_cells = all_cells && std::any_of(cell.actions.begin(), cell.actions.end(), [&](auto i) { return x[i]; });
      }
      covered += any_cell && all_cells;
    }
    const int need = r.required_quadrants();
    report.rows.push_back({r.name, "coverage", double(covered), double(need), false, covered >= need});
  }
  return report;
}

}  // namespace trinc
