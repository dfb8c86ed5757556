#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "trinc/portfolio.hpp"

namespace trinc {

namespace {

/// Linear ">= minimum" rows flattened into member lists. Every non-budget row
/// is monotone: selecting more actions never breaks it.
struct CompiledRows {
  struct Count {
    std::vector<std::size_t> members;
    int minimum = 0;
  };
  struct Pairs {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    int minimum = 0;
  };
  struct Cover {
    std::vector<std::vector<std::vector<std::size_t>>> quadrants;  ///< quadrant -> cells -> members
    int minimum = 0;
  };

  std::vector<Count> counts;
  std::vector<Pairs> pairs;
  std::vector<Cover> covers;

  explicit CompiledRows(const ConstraintSet& cs) {
    for (const auto& r : cs.min_counts) counts.push_back({r.actions, r.minimum});
    for (const auto& r : cs.function_minima) counts.push_back({r.actions, r.minimum});
    for (const auto& r : cs.synergies) {
      Pairs p{{}, r.minimum};
      for (const auto& g : r.groups) p.pairs.insert(p.pairs.end(), g.begin(), g.end());
      pairs.push_back(std::move(p));
    }
    for (const auto& r : cs.coverage) {
      Cover c{std::vector<std::vector<std::vector<std::size_t>>>(kQuadrantCount), r.required_quadrants()};
      for (const auto& cell : r.cells) {
        if (cell.quadrant >= 1 && cell.quadrant <= kQuadrantCount) {
          c.quadrants[static_cast<std::size_t>(cell.quadrant - 1)].push_back(cell.actions);
        }
      }
      covers.push_back(std::move(c));
    }
  }

  /// True if every row holds for the 0/1 vector x.
  [[nodiscard]] bool holds(const std::vector<char>& x) const {
    for (const auto& r : counts) {
      int n = 0;
      for (auto i : r.members) n += x[i];
      if (n < r.minimum) return false;
    }
    for (const auto& r : pairs) {
      int n = 0;
      for (const auto& [i, j] : r.pairs) n += x[i] && x[j];
      if (n < r.minimum) return false;
    }
    for (const auto& r : covers) {
      int covered = 0;
      for (const auto& cells : r.quadrants) {
        if (cells.empty()) continue;
        bool all = true;
        for (const auto& cell : cells) {
          all = all && std::any_of(cell.begin(), cell.end(), [&](auto i) { return x[i] != 0; });
        }
        covered += all;
      }
      if (covered < r.minimum) return false;
    }
    return true;
  }
};

struct Equality {
  std::vector<char> member;
  int count = 0;
};

/// Depth-first branch and bound over actions in index order, x = 1 first.
/// Only strict improvements replace the incumbent, so the first optimum found
/// is the lexicographically smallest sorted index list.
class Search {
 public:
  Search(std::vector<std::int64_t> coefficients, const ConstraintSet& cs, std::vector<Equality> equalities)
      : c_(std::move(coefficients)), cs_(cs), rows_(cs), eq_(std::move(equalities)), n_(cs.action_count()) {
    suffix_.assign(n_ + 1, 0);
    for (std::size_t i = n_; i-- > 0;) suffix_[i] = suffix_[i + 1] + c_[i];
    x_.assign(n_, 1);  // undecided positions are optimistic ones
    eq_now_.assign(eq_.size(), 0);
    eq_left_.assign(eq_.size(), 0);
    for (std::size_t e = 0; e < eq_.size(); ++e) {
      eq_left_[e] = static_cast<int>(std::count(eq_[e].member.begin(), eq_[e].member.end(), 1));
    }
  }

  bool run() {
    if (!rows_.holds(x_)) return false;
    visit(0, 0, 0.0);
    return found_;
  }

  [[nodiscard]] const std::vector<std::size_t>& best() const { return best_; }
  [[nodiscard]] std::int64_t best_value() const { return best_value_; }
  [[nodiscard]] std::size_t nodes() const { return nodes_; }

 private:
  void visit(std::size_t i, std::int64_t value, double cost) {
    ++nodes_;
    if (found_ && value + suffix_[i] <= best_value_) return;
    if (i == n_) {
      for (std::size_t e = 0; e < eq_.size(); ++e) {
        if (eq_now_[e] != eq_[e].count) return;
      }
      found_ = true;
      best_value_ = value;
      best_.clear();
      for (std::size_t k = 0; k < n_; ++k) {
        if (x_[k]) best_.push_back(k);
      }
      return;
    }

    // Branch x_i = 1 (x_[i] is already 1 while undecided).
    if (cost + cs_.costs[i] <= cs_.budget + 1e-9 && equalities_allow(i, true)) {
      shift(i, true, +1);
      visit(i + 1, value + c_[i], cost + cs_.costs[i]);
      shift(i, true, -1);
    }
    // Branch x_i = 0.
    x_[i] = 0;
    if (equalities_allow(i, false) && rows_.holds(x_)) {
      shift(i, false, +1);
      visit(i + 1, value, cost);
      shift(i, false, -1);
    }
    x_[i] = 1;
  }

  bool equalities_allow(std::size_t i, bool take) const {
    for (std::size_t e = 0; e < eq_.size(); ++e) {
      if (!eq_[e].member[i]) continue;
      const int now = eq_now_[e] + (take ? 1 : 0);
      const int left = eq_left_[e] - 1;
      if (now > eq_[e].count || now + left < eq_[e].count) return false;
    }
    return true;
  }

  void shift(std::size_t i, bool take, int sign) {
    for (std::size_t e = 0; e < eq_.size(); ++e) {
      if (!eq_[e].member[i]) continue;
      if (take) eq_now_[e] += sign;
      eq_left_[e] -= sign;
    }
  }

  std::vector<std::int64_t> c_;
  const ConstraintSet& cs_;
  CompiledRows rows_;
  std::vector<Equality> eq_;
  std::size_t n_;
  std::vector<std::int64_t> suffix_;
  std::vector<char> x_;
  std::vector<int> eq_now_;
  std::vector<int> eq_left_;
  bool found_ = false;
  std::int64_t best_value_ = 0;
  std::vector<std::size_t> best_;
  std::size_t nodes_ = 0;
};

void check_shapes(const PriorityLadder& ladder, const ConstraintSet& cs) {
  if (ladder.action_count != cs.action_count()) {
    throw std::invalid_argument("ladder covers " + std::to_string(ladder.action_count) + " actions, constraints " +
                                std::to_string(cs.action_count()));
  }
}

bool feasible(const ConstraintSet& cs) {
  Search s(std::vector<std::int64_t>(cs.action_count(), 0), cs, {});
  return s.run();
}

PortfolioSolution finish(const PriorityLadder& ladder, const ConstraintSet& cs, bool found,
                         std::vector<std::size_t> selected, std::size_t nodes) {
  PortfolioSolution out;
  out.nodes = nodes;
  if (!found) {
    out.infeasible = true;
    const auto names = cs.rule_names();
    for (auto r : minimal_relaxation(cs)) out.unsatisfiable_rows.push_back(names[r]);
    return out;
  }
  out.selected = std::move(selected);
  out.objective = ladder.objective(out.selected);
  for (auto i : out.selected) out.total_cost += cs.costs[i];
  out.level_counts = ladder.level_counts(out.selected);
  out.report = check_feasible(out.selected, cs);
  return out;
}

}  // namespace

PortfolioSolution solve_exact(const PriorityLadder& ladder, const ConstraintSet& cs) {
  check_shapes(ladder, cs);
  Search s(ladder.action_coefficients(), cs, {});
  const bool found = s.run();
  return finish(ladder, cs, found, s.best(), s.nodes());
}

PortfolioSolution brute_force_oracle(const PriorityLadder& ladder, const ConstraintSet& cs) {
  check_shapes(ladder, cs);
  const std::size_t n = cs.action_count();
  if (n > 24) throw std::invalid_argument("brute-force oracle limited to 24 actions");
  const auto c = ladder.action_coefficients();
  const CompiledRows rows(cs);

  bool found = false;
  std::int64_t best_value = 0;
  std::vector<std::size_t> best;
  std::vector<char> x(n, 0);
  std::vector<std::size_t> current;
  const std::uint32_t limit = 1u << n;
  for (std::uint32_t mask = 0; mask < limit; ++mask) {
    double cost = 0.0;
    std::int64_t value = 0;
    current.clear();
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = (mask >> i) & 1u;
      if (x[i]) {
        cost += cs.costs[i];
        value += c[i];
        current.push_back(i);
      }
    }
    if (cost > cs.budget + 1e-9 || !rows.holds(x)) continue;
    if (!found || value > best_value || (value == best_value && current < best)) {
      found = true;
      best_value = value;
      best = current;
    }
  }
  return finish(ladder, cs, found, std::move(best), limit);
}

PortfolioSolution sequential_lexicographic(const PriorityLadder& ladder, const ConstraintSet& cs) {
  check_shapes(ladder, cs);
  const std::size_t n = cs.action_count();
  std::vector<Equality> fixed;
  std::vector<std::size_t> selected;
  std::size_t nodes = 0;
  if (!feasible(cs)) return finish(ladder, cs, false, {}, 0);

  for (std::size_t h = ladder.levels.size(); h-- > 0;) {
    Equality level{std::vector<char>(n, 0), 0};
    std::vector<std::int64_t> coefficients(n, 0);
    for (auto i : ladder.levels[h].members) {
      level.member[i] = 1;
      coefficients[i] = 1;
    }
    Search s(coefficients, cs, fixed);
    if (!s.run()) return finish(ladder, cs, false, {}, nodes);
    nodes += s.nodes();
    level.count = static_cast<int>(s.best_value());
    fixed.push_back(std::move(level));
    selected = s.best();
  }
  if (ladder.levels.empty()) {
    Search s(std::vector<std::int64_t>(n, 0), cs, {});
    s.run();
    selected = s.best();
  }
  return finish(ladder, cs, true, std::move(selected), nodes);
}

PortfolioSolution solve_certified(const PriorityLadder& ladder, const ConstraintSet& cs, std::size_t oracle_limit) {
  auto solution = solve_exact(ladder, cs);
  if (cs.action_count() > std::min<std::size_t>(oracle_limit, 24)) return solution;
  const auto oracle = brute_force_oracle(ladder, cs);
  if (oracle.infeasible != solution.infeasible || oracle.objective != solution.objective ||
      oracle.selected != solution.selected) {
    throw std::logic_error("branch and bound disagrees with exhaustive enumeration");
  }
  solution.oracle_verified = true;
  return solution;
}

std::vector<std::size_t> minimal_relaxation(const ConstraintSet& cs) {
  const std::size_t m = cs.rule_count();
  for (std::size_t k = 0; k <= m; ++k) {
    // Combinations of k rows in lexicographic order.
    std::vector<std::size_t> combo(k);
    std::iota(combo.begin(), combo.end(), 0);
    while (true) {
      if (feasible(cs.without_rules(combo))) return combo;
      if (k == 0) break;
      std::size_t pos = k;
      while (pos > 0 && combo[pos - 1] == m - k + pos - 1) --pos;
      if (pos == 0) break;
      ++combo[pos - 1];
      for (std::size_t r = pos; r < k; ++r) combo[r] = combo[r - 1] + 1;
    }
  }
  // Unreachable for a non-negative budget: the empty selection meets it.
  std::vector<std::size_t> all(m);
  std::iota(all.begin(), all.end(), 0);
  return all;
}

}  // namespace trinc
