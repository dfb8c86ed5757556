/**
 * @file domain.hpp
 * @brief Shared domain types: criteria, actions, reference profiles, weights,
 *        constraint profiles and the scenario that ties them together.
 *
 * Qualitative performances are stored as integer codes (1..4, or 1..16 for
 * the two-subcriterion composite scales) and handed to the outranking engine
 * as cardinal values.
 */

#ifndef TRINC_DOMAIN_HPP
#define TRINC_DOMAIN_HPP

#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace trinc {

/// Raised when a scenario (or part of one) is structurally unusable.
class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Direction { maximize, minimize };

enum class ScaleKind { cardinal, qualitative4, qualitative16 };

/// A pair of 4-level qualitative judgements on two subcriteria; the first
/// component dominates in the composite 16-level encoding.
struct LevelPair {
  int first = 1;
  int second = 1;

  bool operator==(const LevelPair&) const = default;
};

/// Maps (first, second) in 1..4 x 1..4 to the composite code 4(first-1)+second.
int encode_lexicographic(int first, int second);
int encode_lexicographic(LevelPair pair);
LevelPair decode_lexicographic(int code);

/// Componentwise (Pareto) dominance of qualitative pairs. Reflexive.
bool pair_dominates(LevelPair p, LevelPair q);

/// Parses "L", "M", "H", "VH" (4-level) or "H-M" (composite) labels; also
/// accepts plain integer codes. Throws ScenarioError on unknown labels.
int parse_level_label(const std::string& label, ScaleKind scale);
std::string level_label(int code, ScaleKind scale);

/// Discriminating or veto threshold as a function of the worse performance.
struct ThresholdSpec {
  enum class Kind { none, constant, affine };

  Kind kind = Kind::none;
  double alpha = 0.0;  ///< slope (affine only)
  double beta = 0.0;   ///< intercept, or the value of a constant threshold

  static ThresholdSpec none() { return {}; }
  static ThresholdSpec constant(double value) { return {Kind::constant, 0.0, value}; }
  static ThresholdSpec affine(double alpha, double beta) { return {Kind::affine, alpha, beta}; }

  bool operator==(const ThresholdSpec&) const = default;
};

struct Criterion {
  std::string id;
  std::string label;
  std::string unit;
  Direction direction = Direction::maximize;
  ScaleKind scale = ScaleKind::cardinal;
  ThresholdSpec indifference;
  ThresholdSpec preference;
  ThresholdSpec veto;
  /// Declared performance range, used to check threshold ordering.
  std::optional<std::pair<double, double>> range;

  bool operator==(const Criterion&) const = default;
};

inline constexpr int kFunctionCount = 6;
inline constexpr int kQuadrantCount = 4;

struct Action {
  std::string id;
  std::string label;
  std::string name;
  std::vector<double> performances;  ///< one per criterion, codes for qualitative scales
  double cost = 0.0;
  bool on_decumano = false;
  std::optional<std::string> insula;
  std::optional<int> quadrant;  ///< 1..4
  std::set<int> functions;      ///< subset of 1..6 (U1..U6)
  std::map<std::string, std::string> provenance;

  bool operator==(const Action&) const = default;
};

struct ReferenceProfile {
  std::string id;
  std::vector<double> performances;

  bool operator==(const ReferenceProfile&) const = default;
};

/// Reference actions characterizing one category; categories are numbered
/// 1..q in ascending priority.
struct ReferenceSet {
  int category = 1;
  std::string label;
  std::vector<ReferenceProfile> profiles;

  bool operator==(const ReferenceSet&) const = default;
};

class WeightVector {
 public:
  WeightVector() = default;
  WeightVector(std::string name, std::vector<double> raw, std::string source = "literal")
      : name_(std::move(name)), raw_(std::move(raw)), source_(std::move(source)) {}

  [[nodiscard]] const std::string& name() const { return name_; }
  [[nodiscard]] const std::string& source() const { return source_; }
  [[nodiscard]] const std::vector<double>& raw() const { return raw_; }
  /// Raw weights scaled to sum 1. Throws ScenarioError if the raw sum is not positive.
  [[nodiscard]] std::vector<double> normalized() const;

  bool operator==(const WeightVector&) const = default;

 private:
  std::string name_;
  std::vector<double> raw_;
  std::string source_;
};

/// Closed interval of categories [lo, hi]; lo == hi for a precise assignment.
struct CategoryInterval {
  int lo = 1;
  int hi = 1;

  [[nodiscard]] bool precise() const { return lo == hi; }
  /// "C3" or "[C3,C4]".
  [[nodiscard]] std::string str() const;
  static CategoryInterval parse(const std::string& text);

  bool operator==(const CategoryInterval&) const = default;
};

/// Symbolic constraint rules, resolved against a scenario's actions before
/// solving (see portfolio.hpp for the resolved ConstraintSet).
struct MinCountSpec {
  std::string name;
  std::string selector;              ///< "on_decumano" or "explicit"
  std::vector<std::string> actions;  ///< explicit members
  int minimum = 0;

  bool operator==(const MinCountSpec&) const = default;
};

struct SynergySpec {
  std::string name;
  std::string source;  ///< "insulae" or "explicit"
  std::vector<std::pair<std::string, std::string>> pairs;
  int minimum = 0;

  bool operator==(const SynergySpec&) const = default;
};

struct FunctionMinimumSpec {
  std::string name;
  int function = 1;
  std::vector<std::string> actions;  ///< empty: every action delivering the function
  int minimum = 0;

  bool operator==(const FunctionMinimumSpec&) const = default;
};

struct CoverageCellSpec {
  int quadrant = 1;
  int function = 1;
  std::vector<std::string> actions;

  bool operator==(const CoverageCellSpec&) const = default;
};

struct CoverageSpec {
  std::string name;
  std::vector<int> functions;
  int q = 0;  ///< at least 4 - q quadrants must be covered
  std::vector<CoverageCellSpec> cells;  ///< empty: derived from quadrant and functions

  bool operator==(const CoverageSpec&) const = default;
};

struct ConstraintProfile {
  std::vector<MinCountSpec> min_counts;
  std::vector<SynergySpec> synergies;
  std::vector<FunctionMinimumSpec> function_minima;
  std::vector<CoverageSpec> coverage;

  bool operator==(const ConstraintProfile&) const = default;
};

/// Card deck as stored in a scenario (canonical least-important-first order).
struct DeckSpec {
  std::vector<std::vector<std::string>> levels;
  std::vector<int> blanks;
  double ratio = 1.0;

  bool operator==(const DeckSpec&) const = default;
};

struct Scenario {
  std::string name;
  std::map<std::string, std::string> metadata;
  std::vector<Criterion> criteria;
  std::vector<Action> actions;
  std::vector<ReferenceSet> reference_sets;
  std::vector<WeightVector> weight_vectors;
  std::map<std::string, DeckSpec> decks;
  double lambda = 0.70;
  std::map<std::string, double> budgets;
  std::map<std::string, ConstraintProfile> constraint_profiles;
  /// Published assignments per weight-set name, used to build priority ladders
  /// independently of the sorting engine.
  std::map<std::string, std::vector<CategoryInterval>> reference_assignments;
  /// Published portfolios: weight set -> budget name -> selected action ids.
  std::map<std::string, std::map<std::string, std::vector<std::string>>> reference_portfolios;

  [[nodiscard]] std::size_t criterion_index(const std::string& id) const;
  [[nodiscard]] std::size_t action_index(const std::string& id) const;
  [[nodiscard]] const WeightVector& weights(const std::string& name) const;
  [[nodiscard]] int category_count() const;

  bool operator==(const Scenario&) const = default;
};

struct Violation {
  std::string where;
  std::string message;

  bool operator==(const Violation&) const = default;
};

struct ValidationReport {
  std::vector<Violation> violations;
  std::vector<Violation> warnings;

  [[nodiscard]] bool ok() const { return violations.empty(); }
  void add(std::string where, std::string message) {
    violations.push_back({std::move(where), std::move(message)});
  }
  void warn(std::string where, std::string message) {
    warnings.push_back({std::move(where), std::move(message)});
  }
  void merge(const ValidationReport& other);
  [[nodiscard]] std::string str() const;
};

/// Lists every invariant violation: dangling ids, missing performances,
/// threshold ordering, weight positivity, category numbering, lambda range.
ValidationReport validate_scenario(const Scenario& scenario);

}  // namespace trinc

#endif  // TRINC_DOMAIN_HPP
