#include "trinc/portfolio.hpp"

#include <algorithm>
#include <map>

namespace trinc {

PriorityLadder build_ladder(std::span<const CategoryInterval> assignments) {
  // Key (lo + hi, -(hi - lo)): midpoint first, then the wider interval ranks lower.
  std::map<std::pair<int, int>, LadderLevel> by_key;
  for (std::size_t i = 0; i < assignments.size(); ++i) {
    const auto& iv = assignments[i];
    if (iv.lo > iv.hi) throw std::invalid_argument("inverted category interval " + iv.str());
    auto& level = by_key[{iv.lo + iv.hi, iv.lo - iv.hi}];
    level.category = iv;
    level.members.push_back(i);
  }

  PriorityLadder ladder;
  ladder.action_count = assignments.size();
  std::int64_t below = 0;
  for (auto& [key, level] : by_key) {
    level.coefficient = 1 + below;
    below += level.coefficient * static_cast<std::int64_t>(level.members.size());
    ladder.levels.push_back(std::move(level));
  }
  return ladder;
}

std::vector<std::int64_t> PriorityLadder::action_coefficients() const {
  std::vector<std::int64_t> out(action_count, 0);
  for (const auto& level : levels) {
    for (auto i : level.members) out.at(i) = level.coefficient;
  }
  return out;
}

std::vector<std::size_t> PriorityLadder::action_levels() const {
  std::vector<std::size_t> out(action_count, 0);
  for (std::size_t h = 0; h < levels.size(); ++h) {
    for (auto i : levels[h].members) out.at(i) = h;
  }
  return out;
}

std::int64_t PriorityLadder::objective(std::span<const std::size_t> selected) const {
  const auto c = action_coefficients();
  std::int64_t total = 0;
  for (auto i : selected) total += c.at(i);
  return total;
}

std::vector<int> PriorityLadder::level_counts(std::span<const std::size_t> selected) const {
  const auto h = action_levels();
  std::vector<int> counts(levels.size(), 0);
  for (auto i : selected) ++counts[h.at(i)];
  return counts;
}

}  // namespace trinc
