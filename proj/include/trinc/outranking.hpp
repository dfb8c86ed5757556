/**
 * @file outranking.hpp
 * @brief ELECTRE Tri-nC sorting: per-criterion concordance and discordance,
 *        credibility of outranking, category credibility against sets of
 *        reference actions, and the descending / ascending assignment rules.
 *
 * All criteria are handled as "to be maximized": minimize-direction criteria
 * are compared on negated performances while thresholds keep receiving the
 * worse performance on the original scale.
 */

#ifndef TRINC_OUTRANKING_HPP
#define TRINC_OUTRANKING_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "trinc/domain.hpp"

namespace trinc {

/// Fraction of the criterion weight supporting "a outranks b":
/// 1 when gA - gB >= -q, 0 when gA - gB < -p, linear in between.
double partial_concordance(double g_a, double g_b, double q, double p);

/// Opposition of one criterion to "a outranks b": 0 when gA - gB >= -p,
/// 1 when gA - gB < -v, linear in between. Always 0 when v is +infinity.
double discordance(double g_a, double g_b, double p, double v);

/// Credibility from a concordance index and per-criterion discordances:
/// c times the product of (1 - d_j) / (1 - c) over criteria with d_j > c.
double credibility_from(double concordance_index, std::span<const double> discordances);

/// Everything computed for one ordered pair (a, b).
struct PairwiseOutranking {
  std::vector<double> partial_concordance;
  std::vector<double> discordance;
  double concordance = 0.0;
  double credibility = 0.0;
};

/// `weights` must be normalized (sum 1) and aligned with `criteria`.
PairwiseOutranking evaluate_pair(std::span<const Criterion> criteria, std::span<const double> weights,
                                 std::span<const double> a, std::span<const double> b);

double concordance(std::span<const Criterion> criteria, std::span<const double> weights,
                   std::span<const double> a, std::span<const double> b);

double credibility(std::span<const Criterion> criteria, std::span<const double> weights,
                   std::span<const double> a, std::span<const double> b);

/// sigma(a, B_h) and sigma(B_h, a): componentwise max over the profiles of B_h.
struct CategoryCredibility {
  double action_over_category = 0.0;
  double category_over_action = 0.0;
};

CategoryCredibility category_credibility(std::span<const Criterion> criteria, std::span<const double> weights,
                                         std::span<const double> action, const ReferenceSet& reference);

/// sigma(a, B_h) and sigma(B_h, a) for every action and h = 0..q+1, where
/// B_0 and B_{q+1} are the dummy bottom and top profiles.
class CredibilityMatrix {
 public:
  CredibilityMatrix(std::size_t actions, int categories);

  [[nodiscard]] std::size_t action_count() const { return actions_; }
  [[nodiscard]] int category_count() const { return categories_; }

  /// sigma(a, B_h), h in 0..q+1.
  [[nodiscard]] double action_over(std::size_t action, int h) const;
  /// sigma(B_h, a), h in 0..q+1.
  [[nodiscard]] double category_over(std::size_t action, int h) const;

  /// Sets the real categories h in 1..q; the dummy rows are fixed.
  void set(std::size_t action, int h, CategoryCredibility value);

 private:
  [[nodiscard]] std::size_t slot(std::size_t action, int h) const;

  std::size_t actions_;
  int categories_;
  std::vector<double> action_over_;
  std::vector<double> category_over_;
};

/// Builds the matrix for the given performance vectors. Pairs are evaluated
/// in parallel when `parallel` is set; the result does not depend on it.
CredibilityMatrix build_credibility_matrix(std::span<const Criterion> criteria, std::span<const double> weights,
                                           std::span<const std::vector<double>> actions,
                                           std::span<const ReferenceSet> references, bool parallel = false);

/// rho(a, B_h) = min(sigma(a, B_h), sigma(B_h, a)).
double selection_rho(const CredibilityMatrix& matrix, std::size_t action, int h);
double selection_rho(CategoryCredibility value);

int assign_descending(const CredibilityMatrix& matrix, std::size_t action, double lambda);
int assign_ascending(const CredibilityMatrix& matrix, std::size_t action, double lambda);

struct ActionAssignment {
  std::string action_id;
  int descending = 1;
  int ascending = 1;
  CategoryInterval interval;

  bool operator==(const ActionAssignment&) const = default;
};

struct AssignmentResult {
  std::string weight_set;
  double lambda = 0.0;
  int categories = 0;
  std::vector<ActionAssignment> actions;

  [[nodiscard]] std::vector<CategoryInterval> intervals() const;

  bool operator==(const AssignmentResult&) const = default;
};

/// Sorts every action of the scenario with the named weight vector.
/// Throws ScenarioError if the scenario does not validate, and
/// std::invalid_argument if lambda is outside [0.5, 1].
AssignmentResult assign(const Scenario& scenario, const std::string& weight_set, double lambda);

/// Same, with an explicit (raw) weight vector.
AssignmentResult assign_with_weights(const Scenario& scenario, const WeightVector& weights, double lambda);

/// Sorts arbitrary performance vectors (for example the reference profiles themselves).
std::vector<ActionAssignment> assign_vectors(const Scenario& scenario, const WeightVector& weights,
                                             std::span<const std::vector<double>> vectors, double lambda);

}  // namespace trinc

#endif  // TRINC_OUTRANKING_HPP
