#include "trinc/scenario_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace trinc {

namespace {

/// Tracks a JSON pointer for error messages while decoding.
struct Path {
  std::string text;

  [[nodiscard]] Path operator/(const std::string& key) const { return {text + "/" + key}; }
  [[nodiscard]] Path operator/(std::size_t index) const { return {text + "/" + std::to_string(index)}; }
  [[nodiscard]] std::string str() const { return text.empty() ? "/" : text; }
};

[[noreturn]] void fail(const Path& at, const std::string& message) {
  throw FormatError(at.str() + ": " + message);
}

const json& member(const json& object, const std::string& key, const Path& at) {
  if (!object.is_object()) fail(at, "expected an object");
  auto it = object.find(key);
  if (it == object.end()) fail(at / key, "missing field");
  return *it;
}

const json* optional_member(const json& object, const std::string& key) {
  if (!object.is_object()) return nullptr;
  auto it = object.find(key);
  if (it == object.end() || it->is_null()) return nullptr;
  return &*it;
}

std::string as_string(const json& value, const Path& at) {
  if (!value.is_string()) fail(at, "expected a string");
  return value.get<std::string>();
}

double as_number(const json& value, const Path& at) {
  if (!value.is_number()) fail(at, "expected a number");
  return value.get<double>();
}

int as_int(const json& value, const Path& at) {
  if (!value.is_number_integer()) fail(at, "expected an integer");
  return value.get<int>();
}

bool as_bool(const json& value, const Path& at) {
  if (!value.is_boolean()) fail(at, "expected true or false");
  return value.get<bool>();
}

const json& as_array(const json& value, const Path& at) {
  if (!value.is_array()) fail(at, "expected an array");
  return value;
}

const json& as_object(const json& value, const Path& at) {
  if (!value.is_object()) fail(at, "expected an object");
  return value;
}

std::vector<std::string> string_list(const json& value, const Path& at) {
  std::vector<std::string> out;
  const auto& arr = as_array(value, at);
  for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(as_string(arr[i], at / i));
  return out;
}

std::string direction_name(Direction d) { return d == Direction::minimize ? "minimize" : "maximize"; }

Direction parse_direction(const std::string& s, const Path& at) {
  if (s == "maximize") return Direction::maximize;
  if (s == "minimize") return Direction::minimize;
  fail(at, "unknown direction '" + s + "'");
}

std::string scale_name(ScaleKind k) {
  switch (k) {
    case ScaleKind::qualitative4:
      return "qualitative4";
    case ScaleKind::qualitative16:
      return "qualitative16";
    case ScaleKind::cardinal:
      break;
  }
  return "cardinal";
}

ScaleKind parse_scale(const std::string& s, const Path& at) {
  if (s == "cardinal") return ScaleKind::cardinal;
  if (s == "qualitative4") return ScaleKind::qualitative4;
  if (s == "qualitative16") return ScaleKind::qualitative16;
  fail(at, "unknown scale '" + s + "'");
}

int parse_function(const json& value, const Path& at) {
  if (value.is_number_integer()) return value.get<int>();
  const std::string s = as_string(value, at);
  if (s.size() >= 2 && (s[0] == 'U' || s[0] == 'u')) {
    int f = 0;
    auto [ptr, ec] = std::from_chars(s.data() + 1, s.data() + s.size(), f);
    if (ec == std::errc{} && ptr == s.data() + s.size()) return f;
  }
  fail(at, "malformed function '" + s + "'");
}

std::string function_name(int f) { return "U" + std::to_string(f); }

/// Performance object {criterion id: value}; labels allowed on qualitative scales.
std::vector<double> decode_performances(const json& value, const std::vector<Criterion>& criteria, const Path& at) {
  const auto& obj = as_object(value, at);
  for (const auto& [key, cell] : obj.items()) {
    (void)cell;
    if (std::none_of(criteria.begin(), criteria.end(), [&](const Criterion& c) { return c.id == key; })) {
      fail(at / key, "unknown criterion '" + key + "'");
    }
  }
  std::vector<double> out;
  out.reserve(criteria.size());
  for (const auto& c : criteria) {
    auto it = obj.find(c.id);
    if (it == obj.end() || it->is_null()) {
      out.push_back(std::numeric_limits<double>::quiet_NaN());  // reported by the validator
      continue;
    }
    if (it->is_string()) {
      try {
        out.push_back(parse_level_label(it->get<std::string>(), c.scale));
      } catch (const ScenarioError& e) {
        fail(at / c.id, e.what());
      }
    } else {
      out.push_back(as_number(*it, at / c.id));
    }
  }
  return out;
}

json encode_performances(const std::vector<double>& perf, const std::vector<Criterion>& criteria) {
  json out = json::object();
  for (std::size_t j = 0; j < criteria.size() && j < perf.size(); ++j) {
    if (std::isfinite(perf[j])) out[criteria[j].id] = perf[j];
    else out[criteria[j].id] = nullptr;
  }
  return out;
}

std::vector<double> decode_weight_values(const json& value, const std::vector<Criterion>& criteria,
                                         const std::string& name, const Path& at) {
  const auto& obj = as_object(value, at);
  for (const auto& [key, cell] : obj.items()) {
    (void)cell;
    if (std::none_of(criteria.begin(), criteria.end(), [&](const Criterion& c) { return c.id == key; })) {
      throw ScenarioError("weights " + name + ": unknown criterion '" + key + "'");
    }
  }
  std::vector<double> out;
  for (const auto& c : criteria) {
    auto it = obj.find(c.id);
    if (it == obj.end()) throw ScenarioError("weights " + name + ": no weight for criterion '" + c.id + "'");
    out.push_back(as_number(*it, at / c.id));
  }
  return out;
}

DeckSpec decode_deck_spec(const json& value, const Path& at) {
  try {
    return deck_to_spec(deck_from_json(value));
  } catch (const FormatError& e) {
    fail(at, e.what());
  }
}

ConstraintProfile decode_profile(const json& value, const Path& at) {
  ConstraintProfile profile;
  as_object(value, at);
  if (const auto* arr = optional_member(value, "min_counts")) {
    for (std::size_t k = 0; k < as_array(*arr, at / "min_counts").size(); ++k) {
      const auto& r = (*arr)[k];
      const Path p = at / "min_counts" / k;
      MinCountSpec spec;
      spec.name = as_string(member(r, "name", p), p / "name");
      spec.selector = optional_member(r, "selector") ? as_string(r["selector"], p / "selector") : "explicit";
      if (const auto* ids = optional_member(r, "actions")) spec.actions = string_list(*ids, p / "actions");
      spec.minimum = as_int(member(r, "minimum", p), p / "minimum");
      profile.min_counts.push_back(std::move(spec));
    }
  }
  if (const auto* arr = optional_member(value, "synergies")) {
    for (std::size_t k = 0; k < as_array(*arr, at / "synergies").size(); ++k) {
      const auto& r = (*arr)[k];
      const Path p = at / "synergies" / k;
      SynergySpec spec;
      spec.name = as_string(member(r, "name", p), p / "name");
      spec.source = optional_member(r, "source") ? as_string(r["source"], p / "source") : "explicit";
      if (const auto* pairs = optional_member(r, "pairs")) {
        for (std::size_t i = 0; i < as_array(*pairs, p / "pairs").size(); ++i) {
          auto ids = string_list((*pairs)[i], p / "pairs" / i);
          if (ids.size() != 2) fail(p / "pairs" / i, "expected a pair of action ids");
          spec.pairs.emplace_back(ids[0], ids[1]);
        }
      }
      spec.minimum = as_int(member(r, "minimum", p), p / "minimum");
      profile.synergies.push_back(std::move(spec));
    }
  }
  if (const auto* arr = optional_member(value, "function_minima")) {
    for (std::size_t k = 0; k < as_array(*arr, at / "function_minima").size(); ++k) {
      const auto& r = (*arr)[k];
      const Path p = at / "function_minima" / k;
      FunctionMinimumSpec spec;
      spec.name = as_string(member(r, "name", p), p / "name");
      spec.function = parse_function(member(r, "function", p), p / "function");
      if (const auto* ids = optional_member(r, "actions")) spec.actions = string_list(*ids, p / "actions");
      spec.minimum = as_int(member(r, "minimum", p), p / "minimum");
      profile.function_minima.push_back(std::move(spec));
    }
  }
  if (const auto* arr = optional_member(value, "coverage")) {
    for (std::size_t k = 0; k < as_array(*arr, at / "coverage").size(); ++k) {
      const auto& r = (*arr)[k];
      const Path p = at / "coverage" / k;
      CoverageSpec spec;
      spec.name = as_string(member(r, "name", p), p / "name");
      const auto& fs = as_array(member(r, "functions", p), p / "functions");
      for (std::size_t i = 0; i < fs.size(); ++i) spec.functions.push_back(parse_function(fs[i], p / "functions" / i));
      spec.q = as_int(member(r, "q", p), p / "q");
      if (const auto* cells = optional_member(r, "cells")) {
        for (std::size_t i = 0; i < as_array(*cells, p / "cells").size(); ++i) {
          const auto& c = (*cells)[i];
          const Path cp = p / "cells" / i;
          spec.cells.push_back({as_int(member(c, "quadrant", cp), cp / "quadrant"),
                                parse_function(member(c, "function", cp), cp / "function"),
                                string_list(member(c, "actions", cp), cp / "actions")});
        }
      }
      profile.coverage.push_back(std::move(spec));
    }
  }
  return profile;
}

json encode_profile(const ConstraintProfile& profile) {
  json out = json::object();
  json mins = json::array();
  for (const auto& r : profile.min_counts) {
    json e = {{"name", r.name}, {"selector", r.selector}};
    if (!r.actions.empty()) e["actions"] = r.actions;
    e["minimum"] = r.minimum;
    mins.push_back(std::move(e));
  }
  json syn = json::array();
  for (const auto& r : profile.synergies) {
    json e = {{"name", r.name}, {"source", r.source}};
    if (!r.pairs.empty()) {
      json pairs = json::array();
      for (const auto& [i, j] : r.pairs) pairs.push_back({i, j});
      e["pairs"] = std::move(pairs);
    }
    e["minimum"] = r.minimum;
    syn.push_back(std::move(e));
  }
  json fmin = json::array();
  for (const auto& r : profile.function_minima) {
    json e = {{"name", r.name}, {"function", function_name(r.function)}};
    if (!r.actions.empty()) e["actions"] = r.actions;
    e["minimum"] = r.minimum;
    fmin.push_back(std::move(e));
  }
  json cov = json::array();
  for (const auto& r : profile.coverage) {
    json fs = json::array();
    for (int f : r.functions) fs.push_back(function_name(f));
    json e = {{"name", r.name}, {"functions", std::move(fs)}, {"q", r.q}};
    if (!r.cells.empty()) {
      json cells = json::array();
      for (const auto& c : r.cells) {
        cells.push_back({{"quadrant", c.quadrant}, {"function", function_name(c.function)}, {"actions", c.actions}});
      }
      e["cells"] = std::move(cells);
    }
    cov.push_back(std::move(e));
  }
  out["min_counts"] = std::move(mins);
  out["synergies"] = std::move(syn);
  out["function_minima"] = std::move(fmin);
  out["coverage"] = std::move(cov);
  return out;
}

Criterion decode_criterion(const json& value, const Path& at) {
  Criterion c;
  c.id = as_string(member(value, "id", at), at / "id");
  if (const auto* v = optional_member(value, "label")) c.label = as_string(*v, at / "label");
  if (const auto* v = optional_member(value, "unit")) c.unit = as_string(*v, at / "unit");
  if (const auto* v = optional_member(value, "direction")) c.direction = parse_direction(as_string(*v, at / "direction"), at / "direction");
  if (const auto* v = optional_member(value, "scale")) c.scale = parse_scale(as_string(*v, at / "scale"), at / "scale");
  auto threshold = [&](const char* key) {
    auto it = value.find(key);
    if (it == value.end()) return ThresholdSpec::none();
    try {
      return threshold_from_json(*it);
    } catch (const FormatError& e) {
      fail(at / key, e.what());
    }
  };
  c.indifference = threshold("q");
  c.preference = threshold("p");
  c.veto = threshold("v");
  if (const auto* v = optional_member(value, "range")) {
    const auto& arr = as_array(*v, at / "range");
    if (arr.size() != 2) fail(at / "range", "expected [low, high]");
    c.range = std::make_pair(as_number(arr[0], at / "range" / 0), as_number(arr[1], at / "range" / 1));
  }
  return c;
}

json encode_criterion(const Criterion& c) {
  json out = {{"id", c.id}};
  if (!c.label.empty()) out["label"] = c.label;
  if (!c.unit.empty()) out["unit"] = c.unit;
  out["direction"] = direction_name(c.direction);
  out["scale"] = scale_name(c.scale);
  out["q"] = threshold_to_json(c.indifference);
  out["p"] = threshold_to_json(c.preference);
  out["v"] = threshold_to_json(c.veto);
  if (c.range) out["range"] = {c.range->first, c.range->second};
  return out;
}

std::vector<ReferenceSet> decode_categories(const json& value, const std::vector<Criterion>& criteria,
                                            const Path& at) {
  std::vector<ReferenceSet> out;
  const auto& arr = as_array(value, at);
  for (std::size_t k = 0; k < arr.size(); ++k) {
    const Path p = at / k;
    ReferenceSet set;
    set.category = as_int(member(arr[k], "category", p), p / "category");
    if (const auto* v = optional_member(arr[k], "label")) set.label = as_string(*v, p / "label");
    const auto& profiles = as_array(member(arr[k], "profiles", p), p / "profiles");
    for (std::size_t i = 0; i < profiles.size(); ++i) {
      const Path pp = p / "profiles" / i;
      set.profiles.push_back({as_string(member(profiles[i], "id", pp), pp / "id"),
                              decode_performances(member(profiles[i], "performances", pp), criteria,
                                                  pp / "performances")});
    }
    out.push_back(std::move(set));
  }
  return out;
}

json encode_categories(const std::vector<ReferenceSet>& sets, const std::vector<Criterion>& criteria) {
  json out = json::array();
  for (const auto& s : sets) {
    json profiles = json::array();
    for (const auto& p : s.profiles) {
      profiles.push_back({{"id", p.id}, {"performances", encode_performances(p.performances, criteria)}});
    }
    json e = {{"category", s.category}};
    if (!s.label.empty()) e["label"] = s.label;
    e["profiles"] = std::move(profiles);
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<WeightVector> decode_weights(const json& value, const std::vector<Criterion>& criteria,
                                         const std::map<std::string, DeckSpec>& decks, const Path& at) {
  std::vector<WeightVector> out;
  std::vector<std::string> ids;
  for (const auto& c : criteria) ids.push_back(c.id);
  for (const auto& [name, entry] : as_object(value, at).items()) {
    const Path p = at / name;
    as_object(entry, p);
    std::string source = optional_member(entry, "source") ? as_string(entry["source"], p / "source") : "literal";
    if (const auto* values = optional_member(entry, "values")) {
      out.emplace_back(name, decode_weight_values(*values, criteria, name, p / "values"), source);
    } else if (const auto* deck = optional_member(entry, "deck")) {
      const std::string deck_name = as_string(*deck, p / "deck");
      auto it = decks.find(deck_name);
      if (it == decks.end()) throw ScenarioError("weights " + name + ": unknown deck '" + deck_name + "'");
      auto computed = compute_srf_weights(deck_from_spec(it->second), ids, name);
      out.emplace_back(name, computed.raw(), "srf");
    } else {
      fail(p, "expected \"values\" or \"deck\"");
    }
  }
  return out;
}

std::string format_number(double x) {
  if (std::isfinite(x) && x == std::floor(x) && std::abs(x) < 1e15) {
    return std::to_string(static_cast<long long>(x));
  }
  char buffer[64];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, x);
  (void)ec;
  return std::string(buffer, ptr);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cell.push_back('"');
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        cell.push_back(ch);
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      out.push_back(cell);
      cell.clear();
    } else if (ch != '\r') {
      cell.push_back(ch);
    }
  }
  out.push_back(cell);
  for (auto& c : out) {
    auto b = c.find_first_not_of(" \t");
    auto e = c.find_last_not_of(" \t");
    c = b == std::string::npos ? std::string{} : c.substr(b, e - b + 1);
  }
  return out;
}

}  // namespace

ThresholdSpec threshold_from_json(const json& value) {
  if (value.is_null()) return ThresholdSpec::none();
  if (value.is_string()) {
    if (value.get<std::string>() == "none") return ThresholdSpec::none();
    throw FormatError("unknown threshold '" + value.get<std::string>() + "'");
  }
  if (value.is_number()) return ThresholdSpec::constant(value.get<double>());
  if (value.is_object()) {
    if (auto it = value.find("constant"); it != value.end()) {
      if (!it->is_number()) throw FormatError("constant threshold must be a number");
      return ThresholdSpec::constant(it->get<double>());
    }
    auto a = value.find("alpha");
    auto b = value.find("beta");
    if (a == value.end() || b == value.end() || !a->is_number() || !b->is_number()) {
      throw FormatError("affine threshold needs numeric alpha and beta");
    }
    return ThresholdSpec::affine(a->get<double>(), b->get<double>());
  }
  throw FormatError("threshold must be null, a number or {alpha, beta}");
}

json threshold_to_json(const ThresholdSpec& spec) {
  switch (spec.kind) {
    case ThresholdSpec::Kind::none:
      return nullptr;
    case ThresholdSpec::Kind::constant:
      return spec.beta;
    case ThresholdSpec::Kind::affine:
      return json{{"alpha", spec.alpha}, {"beta", spec.beta}};
  }
  return nullptr;
}

CardDeck deck_from_json(const json& document) {
  const Path at{};
  as_object(document, at);
  DeckOrder order = DeckOrder::least_first;
  if (const auto* v = optional_member(document, "order")) {
    const auto s = as_string(*v, at / "order");
    if (s == "most-first") order = DeckOrder::most_first;
    else if (s != "least-first") fail(at / "order", "expected \"least-first\" or \"most-first\"");
  }
  std::vector<std::vector<std::string>> levels;
  const auto& arr = as_array(member(document, "levels", at), at / "levels");
  for (std::size_t r = 0; r < arr.size(); ++r) {
    if (arr[r].is_string()) levels.push_back({arr[r].get<std::string>()});
    else levels.push_back(string_list(arr[r], at / "levels" / r));
  }
  std::vector<int> cards;
  const char* key = document.contains("cards") ? "cards" : "blanks";
  if (const auto* v = optional_member(document, key)) {
    const auto& c = as_array(*v, at / key);
    for (std::size_t r = 0; r < c.size(); ++r) cards.push_back(as_int(c[r], at / key / r));
  } else if (order == DeckOrder::least_first && !levels.empty()) {
    cards.assign(levels.size() - 1, 0);
  }
  const double ratio = as_number(member(document, "ratio", at), at / "ratio");
  return make_deck(std::move(levels), std::move(cards), ratio, order);
}

json deck_to_json(const CardDeck& deck) {
  return json{{"order", "least-first"}, {"levels", deck.levels}, {"blanks", deck.blanks}, {"ratio", deck.ratio}};
}

json weights_to_json(const WeightVector& weights, const std::vector<Criterion>& criteria) {
  json values = json::object();
  for (std::size_t j = 0; j < criteria.size() && j < weights.raw().size(); ++j) {
    values[criteria[j].id] = weights.raw()[j];
  }
  return json{{"source", weights.source()}, {"values", std::move(values)}};
}

Scenario scenario_from_json(const json& doc) {
  const Path at{};
  as_object(doc, at);
  const auto format = as_string(member(doc, "format", at), at / "format");
  if (format != kScenarioFormat) fail(at / "format", "expected \"" + std::string(kScenarioFormat) + "\"");
  const int version = as_int(member(doc, "version", at), at / "version");
  if (version != kScenarioVersion) fail(at / "version", "unsupported version " + std::to_string(version));

  Scenario s;
  s.name = as_string(member(doc, "name", at), at / "name");
  if (const auto* m = optional_member(doc, "metadata")) {
    for (const auto& [k, v] : as_object(*m, at / "metadata").items()) s.metadata[k] = as_string(v, at / "metadata" / k);
  }
  if (const auto* v = optional_member(doc, "lambda")) s.lambda = as_number(*v, at / "lambda");

  const auto& criteria = as_array(member(doc, "criteria", at), at / "criteria");
  for (std::size_t j = 0; j < criteria.size(); ++j) s.criteria.push_back(decode_criterion(criteria[j], at / "criteria" / j));

  s.reference_sets = decode_categories(member(doc, "categories", at), s.criteria, at / "categories");

  const auto& actions = as_array(member(doc, "actions", at), at / "actions");
  for (std::size_t i = 0; i < actions.size(); ++i) {
    const auto& v = actions[i];
    const Path p = at / "actions" / i;
    Action a;
    a.id = as_string(member(v, "id", p), p / "id");
    if (const auto* x = optional_member(v, "label")) a.label = as_string(*x, p / "label");
    if (const auto* x = optional_member(v, "name")) a.name = as_string(*x, p / "name");
    a.performances = decode_performances(member(v, "performances", p), s.criteria, p / "performances");
    a.cost = as_number(member(v, "cost", p), p / "cost");
    if (const auto* x = optional_member(v, "on_decumano")) a.on_decumano = as_bool(*x, p / "on_decumano");
    if (const auto* x = optional_member(v, "insula")) a.insula = as_string(*x, p / "insula");
    if (const auto* x = optional_member(v, "quadrant")) a.quadrant = as_int(*x, p / "quadrant");
    if (const auto* x = optional_member(v, "functions")) {
      const auto& fs = as_array(*x, p / "functions");
      for (std::size_t k = 0; k < fs.size(); ++k) a.functions.insert(parse_function(fs[k], p / "functions" / k));
    }
    if (const auto* x = optional_member(v, "provenance")) {
      for (const auto& [k, val] : as_object(*x, p / "provenance").items()) {
        a.provenance[k] = as_string(val, p / "provenance" / k);
      }
    }
    s.actions.push_back(std::move(a));
  }

  if (const auto* d = optional_member(doc, "decks")) {
    for (const auto& [name, deck] : as_object(*d, at / "decks").items()) {
      s.decks[name] = decode_deck_spec(deck, at / "decks" / name);
    }
  }
  if (const auto* w = optional_member(doc, "weights")) s.weight_vectors = decode_weights(*w, s.criteria, s.decks, at / "weights");

  if (const auto* b = optional_member(doc, "budgets")) {
    for (const auto& [name, amount] : as_object(*b, at / "budgets").items()) {
      s.budgets[name] = as_number(amount, at / "budgets" / name);
    }
  }
  if (const auto* c = optional_member(doc, "constraint_profiles")) {
    for (const auto& [name, profile] : as_object(*c, at / "constraint_profiles").items()) {
      s.constraint_profiles[name] = decode_profile(profile, at / "constraint_profiles" / name);
    }
  }
  if (const auto* r = optional_member(doc, "reference_assignments")) {
    for (const auto& [name, table] : as_object(*r, at / "reference_assignments").items()) {
      const Path p = at / "reference_assignments" / name;
      as_object(table, p);
      std::vector<CategoryInterval> intervals;
      for (const auto& a : s.actions) {
        auto it = table.find(a.id);
        if (it == table.end()) fail(p, "no entry for action '" + a.id + "'");
        try {
          intervals.push_back(CategoryInterval::parse(as_string(*it, p / a.id)));
        } catch (const ScenarioError& e) {
          fail(p / a.id, e.what());
        }
      }
      if (table.size() != s.actions.size()) fail(p, "entries for unknown actions");
      s.reference_assignments[name] = std::move(intervals);
    }
  }
  if (const auto* r = optional_member(doc, "reference_portfolios")) {
    for (const auto& [name, by_budget] : as_object(*r, at / "reference_portfolios").items()) {
      for (const auto& [budget, ids] : as_object(by_budget, at / "reference_portfolios" / name).items()) {
        s.reference_portfolios[name][budget] = string_list(ids, at / "reference_portfolios" / name / budget);
      }
    }
  }
  return s;
}

json scenario_to_json(const Scenario& s) {
  json doc = {{"format", kScenarioFormat}, {"version", kScenarioVersion}, {"name", s.name}};
  doc["metadata"] = s.metadata;
  doc["lambda"] = s.lambda;
  json criteria = json::array();
  for (const auto& c : s.criteria) criteria.push_back(encode_criterion(c));
  doc["criteria"] = std::move(criteria);
  doc["categories"] = encode_categories(s.reference_sets, s.criteria);

  json actions = json::array();
  for (const auto& a : s.actions) {
    json e = {{"id", a.id}};
    if (!a.label.empty()) e["label"] = a.label;
    if (!a.name.empty()) e["name"] = a.name;
    e["performances"] = encode_performances(a.performances, s.criteria);
    e["cost"] = a.cost;
    e["on_decumano"] = a.on_decumano;
    if (a.insula) e["insula"] = *a.insula;
    if (a.quadrant) e["quadrant"] = *a.quadrant;
    json fs = json::array();
    for (int f : a.functions) fs.push_back(function_name(f));
    e["functions"] = std::move(fs);
    if (!a.provenance.empty()) e["provenance"] = a.provenance;
    actions.push_back(std::move(e));
  }
  doc["actions"] = std::move(actions);

  json weights = json::object();
  for (const auto& w : s.weight_vectors) weights[w.name()] = weights_to_json(w, s.criteria);
  doc["weights"] = std::move(weights);

  json decks = json::object();
  for (const auto& [name, spec] : s.decks) decks[name] = deck_to_json(deck_from_spec(spec));
  doc["decks"] = std::move(decks);

  doc["budgets"] = s.budgets;

  json profiles = json::object();
  for (const auto& [name, p] : s.constraint_profiles) profiles[name] = encode_profile(p);
  doc["constraint_profiles"] = std::move(profiles);

  json refs = json::object();
  for (const auto& [name, intervals] : s.reference_assignments) {
    json table = json::object();
    for (std::size_t i = 0; i < intervals.size() && i < s.actions.size(); ++i) table[s.actions[i].id] = intervals[i].str();
    refs[name] = std::move(table);
  }
  doc["reference_assignments"] = std::move(refs);
  doc["reference_portfolios"] = s.reference_portfolios;
  return doc;
}

Scenario apply_overlay(const Scenario& base, const json& overlay) {
  const Path at{};
  as_object(overlay, at);
  Scenario s = base;
  if (const auto* v = optional_member(overlay, "name")) s.name = as_string(*v, at / "name");
  if (const auto* m = optional_member(overlay, "metadata")) {
    for (const auto& [k, v] : as_object(*m, at / "metadata").items()) s.metadata[k] = as_string(v, at / "metadata" / k);
  }
  if (const auto* v = optional_member(overlay, "lambda")) s.lambda = as_number(*v, at / "lambda");
  if (const auto* c = optional_member(overlay, "criteria")) {
    for (const auto& [id, fields] : as_object(*c, at / "criteria").items()) {
      const Path p = at / "criteria" / id;
      auto& crit = s.criteria.at(s.criterion_index(id));
      as_object(fields, p);
      try {
        if (auto it = fields.find("q"); it != fields.end()) crit.indifference = threshold_from_json(*it);
        if (auto it = fields.find("p"); it != fields.end()) crit.preference = threshold_from_json(*it);
        if (auto it = fields.find("v"); it != fields.end()) crit.veto = threshold_from_json(*it);
      } catch (const FormatError& e) {
        fail(p, e.what());
      }
    }
  }
  if (const auto* c = optional_member(overlay, "categories")) {
    s.reference_sets = decode_categories(*c, s.criteria, at / "categories");
  }
  if (const auto* w = optional_member(overlay, "weights")) {
    for (auto& replacement : decode_weights(*w, s.criteria, s.decks, at / "weights")) {
      auto it = std::find_if(s.weight_vectors.begin(), s.weight_vectors.end(),
                             [&](const WeightVector& x) { return x.name() == replacement.name(); });
      if (it != s.weight_vectors.end()) *it = std::move(replacement);
      else s.weight_vectors.push_back(std::move(replacement));
    }
  }
  if (const auto* r = optional_member(overlay, "reference_assignments")) {
    json wrapper = scenario_to_json(s);
    wrapper["reference_assignments"] = *r;
    s.reference_assignments = scenario_from_json(wrapper).reference_assignments;
  }
  return s;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError(path.string() + ": cannot open file");
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError(path.string() + ": cannot write file");
  out << text;
}

namespace {

json parse_json_text(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(origin + ": parse error at byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

Scenario decode_document(const json& doc, const std::string& origin) {
  try {
    // Overlays name a base scenario that lives next to them.
    if (doc.is_object() && doc.value("format", "") == "trinc-overlay") {
      const auto base_name = as_string(member(doc, "base", {}), Path{"/base"});
      auto base_path = std::filesystem::path(origin).parent_path() / (base_name + ".json");
      Scenario base = scenario_from_json(parse_json_text(read_text_file(base_path), base_path.string()));
      return apply_overlay(base, doc);
    }
    return scenario_from_json(doc);
  } catch (const FormatError& e) {
    throw FormatError(origin + ": " + e.what());
  } catch (const json::exception& e) {
    throw FormatError(origin + ": " + e.what());
  }
}

}  // namespace

Scenario parse_scenario(const std::string& text, const std::string& origin) {
  Scenario s = decode_document(parse_json_text(text, origin), origin);
  auto report = validate_scenario(s);
  if (!report.ok()) throw ScenarioError(origin + ": scenario does not validate\n" + report.str());
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) { return parse_scenario(read_text_file(path), path.string()); }

std::string dump_scenario(const Scenario& scenario) { return scenario_to_json(scenario).dump(2) + "\n"; }

void save_scenario(const Scenario& scenario, const std::filesystem::path& path) {
  write_text_file(path, dump_scenario(scenario));
}

Scenario parse_performance_csv(const std::string& text, const Scenario& scenario) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    header = split_csv_line(line);
    break;
  }
  if (header.empty() || header.front() != "action") throw FormatError("csv: header must start with \"action\"");
  std::vector<std::size_t> column_of;
  for (std::size_t k = 1; k < header.size(); ++k) {
    try {
      column_of.push_back(scenario.criterion_index(header[k]));
    } catch (const ScenarioError&) {
      throw FormatError("csv: unknown criterion column '" + header[k] + "'");
    }
  }
  for (std::size_t j = 0; j < scenario.criteria.size(); ++j) {
    if (std::find(column_of.begin(), column_of.end(), j) == column_of.end()) {
      throw FormatError("csv: no column for criterion '" + scenario.criteria[j].id + "'");
    }
  }

  Scenario out = scenario;
  std::vector<char> seen(out.actions.size(), 0);
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split_csv_line(line);
    const std::string where = "csv line " + std::to_string(line_no);
    if (cells.size() != header.size()) {
      throw FormatError(where + ": expected " + std::to_string(header.size()) + " cells, got " +
                        std::to_string(cells.size()));
    }
    std::size_t i = 0;
    try {
      i = out.action_index(cells[0]);
    } catch (const ScenarioError&) {
      throw FormatError(where + ": unknown action '" + cells[0] + "'");
    }
    if (seen[i]) throw FormatError(where + ": action '" + cells[0] + "' listed twice");
    seen[i] = 1;
    auto& perf = out.actions[i].performances;
    perf.assign(out.criteria.size(), 0.0);
    for (std::size_t k = 1; k < cells.size(); ++k) {
      const auto& c = out.criteria[column_of[k - 1]];
      const auto& cell = cells[k];
      if (cell.empty()) throw FormatError(where + ": empty cell for action " + cells[0] + ", criterion " + c.id);
      double value = 0.0;
      auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
      if (ec == std::errc{} && ptr == cell.data() + cell.size()) {
        perf[column_of[k - 1]] = value;
        continue;
      }
      if (c.scale == ScaleKind::cardinal) {
        throw FormatError(where + ": non-numeric cell '" + cell + "' for action " + cells[0] + ", criterion " + c.id);
      }
      try {
        perf[column_of[k - 1]] = parse_level_label(cell, c.scale);
      } catch (const ScenarioError& e) {
        throw FormatError(where + ": action " + cells[0] + ", criterion " + c.id + ": " + e.what());
      }
    }
  }
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (!seen[i]) throw FormatError("csv: no row for action '" + out.actions[i].id + "'");
  }
  return out;
}

Scenario load_performance_csv(const std::filesystem::path& path, const Scenario& scenario) {
  try {
    return parse_performance_csv(read_text_file(path), scenario);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

std::string performance_csv(const Scenario& scenario) {
  std::ostringstream out;
  out << "action";
  for (const auto& c : scenario.criteria) out << ',' << c.id;
  out << '\n';
  for (const auto& a : scenario.actions) {
    out << a.id;
    for (std::size_t j = 0; j < scenario.criteria.size(); ++j) {
      const auto& c = scenario.criteria[j];
      const double v = j < a.performances.size() ? a.performances[j] : std::numeric_limits<double>::quiet_NaN();
      out << ',';
      if (!std::isfinite(v)) continue;
      if (c.scale != ScaleKind::cardinal && v == std::floor(v)) out << level_label(static_cast<int>(v), c.scale);
      else out << format_number(v);
    }
    out << '\n';
  }
  return out.str();
}

json assignment_to_json(const AssignmentResult& result) {
  json actions = json::array();
  for (const auto& a : result.actions) {
    actions.push_back({{"id", a.action_id},
                       {"descending", a.descending},
                       {"ascending", a.ascending},
                       {"interval", a.interval.str()}});
  }
  return json{{"kind", "assignment"},
              {"weight_set", result.weight_set},
              {"lambda", result.lambda},
              {"categories", result.categories},
              {"actions", std::move(actions)}};
}

AssignmentResult assignment_from_json(const json& doc) {
  const Path at{};
  try {
    AssignmentResult r;
    r.weight_set = as_string(member(doc, "weight_set", at), at / "weight_set");
    r.lambda = as_number(member(doc, "lambda", at), at / "lambda");
    r.categories = as_int(member(doc, "categories", at), at / "categories");
    const auto& arr = as_array(member(doc, "actions", at), at / "actions");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const Path p = at / "actions" / i;
      ActionAssignment a;
      a.action_id = as_string(member(arr[i], "id", p), p / "id");
      a.interval = CategoryInterval::parse(as_string(member(arr[i], "interval", p), p / "interval"));
      a.descending = optional_member(arr[i], "descending") ? as_int(arr[i]["descending"], p / "descending") : a.interval.lo;
      a.ascending = optional_member(arr[i], "ascending") ? as_int(arr[i]["ascending"], p / "ascending") : a.interval.hi;
      r.actions.push_back(std::move(a));
    }
    return r;
  } catch (const ScenarioError& e) {
    throw FormatError(e.what());
  }
}

json solution_to_json(const PortfolioSolution& solution, const Scenario& scenario, const PriorityLadder& ladder) {
  json selected = json::array();
  for (auto i : solution.selected) selected.push_back(scenario.actions.at(i).id);
  json levels = json::array();
  for (std::size_t h = 0; h < ladder.levels.size(); ++h) {
    const auto& level = ladder.levels[h];
    levels.push_back({{"category", level.category.str()},
                      {"coefficient", level.coefficient},
                      {"members", level.members.size()},
                      {"selected", h < solution.level_counts.size() ? solution.level_counts[h] : 0}});
  }
  json rows = json::array();
  for (const auto& r : solution.report.rows) {
    rows.push_back({{"name", r.name},
                    {"kind", r.kind},
                    {"lhs", r.lhs},
                    {"relation", r.at_most ? "<=" : ">="},
                    {"rhs", r.rhs},
                    {"satisfied", r.satisfied}});
  }
  return json{{"kind", "portfolio"},
              {"infeasible", solution.infeasible},
              {"selected", std::move(selected)},
              {"objective", solution.objective},
              {"total_cost", solution.total_cost},
              {"ladder", std::move(levels)},
              {"constraints", std::move(rows)},
              {"unsatisfiable_rows", solution.unsatisfiable_rows},
              {"oracle_verified", solution.oracle_verified}};
}

json robustness_to_json(const RobustnessResult& result, const Scenario& scenario) {
  json cells = json::array();
  for (const auto& c : result.cells) {
    json selected = json::array();
    for (auto i : c.portfolio.selected) selected.push_back(scenario.actions.at(i).id);
    cells.push_back({{"weight_set", c.weight_set},
                     {"budget", {{"name", c.budget.name}, {"amount", c.budget.amount}}},
                     {"profile", c.profile},
                     {"infeasible", c.portfolio.infeasible},
                     {"objective", c.portfolio.objective},
                     {"total_cost", c.portfolio.total_cost},
                     {"selected", std::move(selected)},
                     {"unsatisfiable_rows", c.portfolio.unsatisfiable_rows}});
  }
  json frequency = json::object();
  for (std::size_t i = 0; i < result.selection_frequency.size() && i < scenario.actions.size(); ++i) {
    frequency[scenario.actions[i].id] = result.selection_frequency[i];
  }
  return json{{"kind", "robustness"},
              {"cells", std::move(cells)},
              {"selection_frequency", std::move(frequency)},
              {"jaccard", result.jaccard}};
}

}  // namespace trinc
