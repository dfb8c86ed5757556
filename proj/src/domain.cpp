#include "trinc/domain.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <numeric>
#include <sstream>
#include <tuple>

#include "trinc/srf.hpp"
#include "trinc/thresholds.hpp"

namespace trinc {

namespace {

constexpr std::array<const char*, 4> kLevelNames = {"L", "M", "H", "VH"};

int parse_single_level(const std::string& text) {
  for (std::size_t i = 0; i < kLevelNames.size(); ++i) {
    if (text == kLevelNames[i]) return static_cast<int>(i) + 1;
  }
  return 0;
}

std::string trim(const std::string& s) {
  auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return {};
  auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::optional<int> parse_int(const std::string& text) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

int scale_max(ScaleKind scale) {
  switch (scale) {
    case ScaleKind::qualitative4:
      return 4;
    case ScaleKind::qualitative16:
      return 16;
    case ScaleKind::cardinal:
      break;
  }
  return 0;
}

}  // namespace

int encode_lexicographic(int first, int second) {
  if (first < 1 || first > 4 || second < 1 || second > 4) {
    throw std::out_of_range("qualitative level outside 1..4: (" + std::to_string(first) + "," +
                            std::to_string(second) + ")");
  }
  return 4 * (first - 1) + second;
}

int encode_lexicographic(LevelPair pair) { return encode_lexicographic(pair.first, pair.second); }

LevelPair decode_lexicographic(int code) {
  if (code < 1 || code > 16) throw std::out_of_range("composite code outside 1..16: " + std::to_string(code));
  return {(code - 1) / 4 + 1, (code - 1) % 4 + 1};
}

bool pair_dominates(LevelPair p, LevelPair q) { return p.first >= q.first && p.second >= q.second; }

int parse_level_label(const std::string& raw, ScaleKind scale) {
  const std::string label = trim(raw);
  if (auto code = parse_int(label)) {
    if (scale != ScaleKind::cardinal && (*code < 1 || *code > scale_max(scale))) {
      throw ScenarioError("level code " + label + " outside 1.." + std::to_string(scale_max(scale)));
    }
    return *code;
  }
  switch (scale) {
    case ScaleKind::qualitative4: {
      if (int level = parse_single_level(label)) return level;
      break;
    }
    case ScaleKind::qualitative16: {
      auto dash = label.find('-');
      if (dash != std::string::npos) {
        int first = parse_single_level(trim(label.substr(0, dash)));
        int second = parse_single_level(trim(label.substr(dash + 1)));
        if (first && second) return encode_lexicographic(first, second);
      }
      break;
    }
    case ScaleKind::cardinal:
      break;
  }
  throw ScenarioError("unknown level label '" + label + "'");
}

std::string level_label(int code, ScaleKind scale) {
  switch (scale) {
    case ScaleKind::qualitative4:
      if (code >= 1 && code <= 4) return kLevelNames[static_cast<std::size_t>(code - 1)];
      break;
    case ScaleKind::qualitative16:
      if (code >= 1 && code <= 16) {
        auto [first, second] = decode_lexicographic(code);
        return std::string(kLevelNames[static_cast<std::size_t>(first - 1)]) + "-" +
               kLevelNames[static_cast<std::size_t>(second - 1)];
      }
      break;
    case ScaleKind::cardinal:
      break;
  }
  return std::to_string(code);
}

std::vector<double> WeightVector::normalized() const {
  const double total = std::accumulate(raw_.begin(), raw_.end(), 0.0);
  if (!(total > 0.0)) throw ScenarioError("weight vector '" + name_ + "' has non-positive total");
  std::vector<double> out(raw_.size());
  std::transform(raw_.begin(), raw_.end(), out.begin(), [total](double w) { return w / total; });
  return out;
}

std::string CategoryInterval::str() const {
  if (lo == hi) return "C" + std::to_string(lo);
  return "[C" + std::to_string(lo) + ",C" + std::to_string(hi) + "]";
}

CategoryInterval CategoryInterval::parse(const std::string& raw) {
  std::string text;
  for (char c : raw) {
    if (c != ' ' && c != '_') text.push_back(c);
  }
  auto parse_category = [&](const std::string& token) {
    if (token.size() < 2 || (token[0] != 'C' && token[0] != 'c')) {
      throw ScenarioError("malformed category '" + raw + "'");
    }
    auto value = parse_int(token.substr(1));
    if (!value || *value < 1) throw ScenarioError("malformed category '" + raw + "'");
    return *value;
  };
  if (!text.empty() && text.front() == '[') {
    if (text.back() != ']') throw ScenarioError("malformed category interval '" + raw + "'");
    auto comma = text.find(',');
    if (comma == std::string::npos) throw ScenarioError("malformed category interval '" + raw + "'");
    CategoryInterval out{parse_category(text.substr(1, comma - 1)),
                         parse_category(text.substr(comma + 1, text.size() - comma - 2))};
    if (out.lo > out.hi) throw ScenarioError("inverted category interval '" + raw + "'");
    return out;
  }
  int c = parse_category(text);
  return {c, c};
}

std::size_t Scenario::criterion_index(const std::string& id) const {
  for (std::size_t j = 0; j < criteria.size(); ++j) {
    if (criteria[j].id == id) return j;
  }
  throw ScenarioError("unknown criterion '" + id + "'");
}

std::size_t Scenario::action_index(const std::string& id) const {
  for (std::size_t i = 0; i < actions.size(); ++i) {
    if (actions[i].id == id) return i;
  }
  throw ScenarioError("unknown action '" + id + "'");
}

const WeightVector& Scenario::weights(const std::string& name) const {
  for (const auto& w : weight_vectors) {
    if (w.name() == name) return w;
  }
  throw ScenarioError("unknown weight set '" + name + "'");
}

int Scenario::category_count() const {
  int q = 0;
  for (const auto& r : reference_sets) q = std::max(q, r.category);
  return q;
}

void ValidationReport::merge(const ValidationReport& other) {
  violations.insert(violations.end(), other.violations.begin(), other.violations.end());
  warnings.insert(warnings.end(), other.warnings.begin(), other.warnings.end());
}

std::string ValidationReport::str() const {
  std::ostringstream out;
  for (const auto& v : violations) out << "error: " << v.where << ": " << v.message << '\n';
  for (const auto& w : warnings) out << "warning: " << w.where << ": " << w.message << '\n';
  return out.str();
}

namespace {

void check_performance_vector(const Scenario& s, const std::vector<double>& perf, const std::string& where,
                              ValidationReport& report) {
  if (perf.size() != s.criteria.size()) {
    report.add(where, "has " + std::to_string(perf.size()) + " performances, expected " +
                          std::to_string(s.criteria.size()));
  }
  for (std::size_t j = 0; j < std::min(perf.size(), s.criteria.size()); ++j) {
    const auto& c = s.criteria[j];
    if (!std::isfinite(perf[j])) {
      report.add(where, "missing performance on " + c.id);
      continue;
    }
    if (c.scale != ScaleKind::cardinal) {
      const int top = scale_max(c.scale);
      if (perf[j] != std::floor(perf[j]) || perf[j] < 1 || perf[j] > top) {
        report.add(where, "level code " + std::to_string(perf[j]) + " on " + c.id + " outside 1.." +
                              std::to_string(top));
      }
    }
  }
}

void check_action_refs(const Scenario& s, const std::vector<std::string>& ids, const std::string& where,
                       ValidationReport& report) {
  for (const auto& id : ids) {
    auto it = std::find_if(s.actions.begin(), s.actions.end(), [&](const Action& a) { return a.id == id; });
    if (it == s.actions.end()) report.add(where, "unknown action '" + id + "'");
  }
}

void check_function(int function, const std::string& where, ValidationReport& report) {
  if (function < 1 || function > kFunctionCount) {
    report.add(where, "function U" + std::to_string(function) + " outside U1..U" + std::to_string(kFunctionCount));
  }
}

}  // namespace

ValidationReport validate_scenario(const Scenario& s) {
  ValidationReport report;

  if (s.criteria.empty()) report.add("criteria", "no criteria");
  std::set<std::string> seen;
  for (const auto& c : s.criteria) {
    if (c.id.empty()) report.add("criteria", "criterion without id");
    if (!seen.insert(c.id).second) report.add("criterion " + c.id, "duplicate id");

    double low = 0.0;
    double high = 0.0;
    if (c.range) {
      std::tie(low, high) = *c.range;
    } else {
      // Observed span over actions and profiles.
      const std::size_t j = static_cast<std::size_t>(&c - s.criteria.data());
      bool any = false;
      auto take = [&](const std::vector<double>& perf) {
        if (j >= perf.size() || !std::isfinite(perf[j])) return;
        low = any ? std::min(low, perf[j]) : perf[j];
        high = any ? std::max(high, perf[j]) : perf[j];
        any = true;
      };
      for (const auto& a : s.actions) take(a.performances);
      for (const auto& r : s.reference_sets) {
        for (const auto& p : r.profiles) take(p.performances);
      }
    }
    if (low > high) {
      report.add("criterion " + c.id, "empty performance range");
    } else {
      report.merge(validate_threshold_order(c, low, high));
    }
  }

  seen.clear();
  for (const auto& a : s.actions) {
    const std::string where = "action " + a.id;
    if (a.id.empty()) report.add("actions", "action without id");
    if (!seen.insert(a.id).second) report.add(where, "duplicate id");
    check_performance_vector(s, a.performances, where, report);
    if (!(a.cost >= 0.0)) report.add(where, "negative cost");
    if (a.quadrant && (*a.quadrant < 1 || *a.quadrant > kQuadrantCount)) {
      report.add(where, "quadrant " + std::to_string(*a.quadrant) + " outside 1..4");
    }
    for (int f : a.functions) check_function(f, where, report);
  }

  // Categories must be numbered 1..q, each with at least one profile.
  std::vector<int> categories;
  for (const auto& r : s.reference_sets) {
    categories.push_back(r.category);
    const std::string where = "category C" + std::to_string(r.category);
    if (r.profiles.empty()) report.add(where, "no reference profile");
    for (const auto& p : r.profiles) check_performance_vector(s, p.performances, "profile " + p.id, report);
  }
  std::sort(categories.begin(), categories.end());
  for (std::size_t k = 0; k < categories.size(); ++k) {
    if (categories[k] != static_cast<int>(k) + 1) {
      report.add("categories", "category indices must be 1..q without gaps or duplicates");
      break;
    }
  }
  if (s.reference_sets.empty()) report.add("categories", "no categories");

  seen.clear();
  for (const auto& w : s.weight_vectors) {
    const std::string where = "weights " + w.name();
    if (!seen.insert(w.name()).second) report.add(where, "duplicate weight set");
    if (w.raw().size() != s.criteria.size()) {
      report.add(where, "has " + std::to_string(w.raw().size()) + " entries, expected " +
                            std::to_string(s.criteria.size()));
    }
    for (std::size_t j = 0; j < w.raw().size(); ++j) {
      if (!(w.raw()[j] > 0.0)) {
        const std::string id = j < s.criteria.size() ? s.criteria[j].id : std::to_string(j);
        report.add(where, "weight of " + id + " must be positive");
      }
    }
  }

  std::vector<std::string> ids;
  ids.reserve(s.criteria.size());
  for (const auto& c : s.criteria) ids.push_back(c.id);
  for (const auto& [name, spec] : s.decks) {
    auto deck_report = validate_deck(deck_from_spec(spec), ids);
    for (auto v : deck_report.violations) {
      v.where = "deck " + name + ": " + v.where;
      report.violations.push_back(std::move(v));
    }
  }

  if (!(s.lambda >= 0.5 && s.lambda <= 1.0)) report.add("lambda", "must lie in [0.5, 1]");

  for (const auto& [name, amount] : s.budgets) {
    if (!(amount >= 0.0)) report.add("budget " + name, "negative budget");
  }

  for (const auto& [name, profile] : s.constraint_profiles) {
    const std::string where = "constraints " + name;
    for (const auto& rule : profile.min_counts) {
      if (rule.selector != "on_decumano" && rule.selector != "explicit") {
        report.add(where + "/" + rule.name, "unknown selector '" + rule.selector + "'");
      }
      check_action_refs(s, rule.actions, where + "/" + rule.name, report);
      if (rule.minimum < 0) report.add(where + "/" + rule.name, "negative minimum");
    }
    for (const auto& rule : profile.synergies) {
      if (rule.source != "insulae" && rule.source != "explicit") {
        report.add(where + "/" + rule.name, "unknown synergy source '" + rule.source + "'");
      }
      for (const auto& [i, j] : rule.pairs) check_action_refs(s, {i, j}, where + "/" + rule.name, report);
      if (rule.minimum < 0) report.add(where + "/" + rule.name, "negative minimum");
    }
    for (const auto& rule : profile.function_minima) {
      check_function(rule.function, where + "/" + rule.name, report);
      check_action_refs(s, rule.actions, where + "/" + rule.name, report);
      if (rule.minimum < 0) report.add(where + "/" + rule.name, "negative minimum");
    }
    for (const auto& rule : profile.coverage) {
      if (rule.q < 0 || rule.q > 3) report.add(where + "/" + rule.name, "q must be in {0,1,2,3}");
      for (int f : rule.functions) check_function(f, where + "/" + rule.name, report);
      for (const auto& cell : rule.cells) {
        if (cell.quadrant < 1 || cell.quadrant > kQuadrantCount) {
          report.add(where + "/" + rule.name, "cell quadrant outside 1..4");
        }
        check_function(cell.function, where + "/" + rule.name, report);
        check_action_refs(s, cell.actions, where + "/" + rule.name, report);
      }
    }
  }

  const int q = s.category_count();
  for (const auto& [name, intervals] : s.reference_assignments) {
    const std::string where = "reference assignments " + name;
    if (intervals.size() != s.actions.size()) {
      report.add(where, "has " + std::to_string(intervals.size()) + " entries, expected " +
                            std::to_string(s.actions.size()));
    }
    for (const auto& iv : intervals) {
      if (iv.lo < 1 || iv.hi > q || iv.lo > iv.hi) report.add(where, "interval " + iv.str() + " out of range");
    }
  }
  for (const auto& [name, by_budget] : s.reference_portfolios) {
    for (const auto& [budget, ids_selected] : by_budget) {
      const std::string where = "reference portfolio " + name + "/" + budget;
      if (!s.budgets.contains(budget)) report.add(where, "unknown budget '" + budget + "'");
      check_action_refs(s, ids_selected, where, report);
    }
  }

  return report;
}

}  // namespace trinc
