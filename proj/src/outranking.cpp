#include "trinc/outranking.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "trinc/thresholds.hpp"

namespace trinc {

double partial_concordance(double g_a, double g_b, double q, double p) {
  const double diff = g_a - g_b;
  if (diff >= -q) return 1.0;
  if (diff < -p || p <= q) return 0.0;
  return (diff + p) / (p - q);
}

double discordance(double g_a, double g_b, double p, double v) {
  if (std::isinf(v)) return 0.0;
  const double diff = g_a - g_b;
  if (diff >= -p) return 0.0;
  if (diff < -v || v <= p) return 1.0;
  return (diff + p) / (p - v);
}

double credibility_from(double concordance_index, std::span<const double> discordances) {
  double sigma = concordance_index;
  for (double d : discordances) {
    if (d > concordance_index) {
      if (d >= 1.0) return 0.0;
      sigma *= (1.0 - d) / (1.0 - concordance_index);
    }
  }
  return sigma;
}

namespace {

double oriented(const Criterion& c, double g) { return c.direction == Direction::minimize ? -g : g; }

double worse_of(const Criterion& c, double g_a, double g_b) {
  return c.direction == Direction::minimize ? std::max(g_a, g_b) : std::min(g_a, g_b);
}

void check_sizes(std::span<const Criterion> criteria, std::span<const double> weights, std::span<const double> a,
                 std::span<const double> b) {
  if (weights.size() != criteria.size() || a.size() != criteria.size() || b.size() != criteria.size()) {
    throw std::invalid_argument("performance, weight and criterion counts differ");
  }
}

}  // namespace

PairwiseOutranking evaluate_pair(std::span<const Criterion> criteria, std::span<const double> weights,
                                 std::span<const double> a, std::span<const double> b) {
  check_sizes(criteria, weights, a, b);
  PairwiseOutranking out;
  out.partial_concordance.resize(criteria.size());
  out.discordance.resize(criteria.size());
  for (std::size_t j = 0; j < criteria.size(); ++j) {
    const auto& c = criteria[j];
    const double worse = worse_of(c, a[j], b[j]);
    const double q = evaluate_threshold(c.indifference, worse);
    const double p = std::max(q, evaluate_threshold(c.preference, worse));
    const double v = evaluate_veto(c.veto, worse);
    const double ga = oriented(c, a[j]);
    const double gb = oriented(c, b[j]);
    out.partial_concordance[j] = partial_concordance(ga, gb, q, p);
    out.discordance[j] = discordance(ga, gb, p, v);
    out.concordance += weights[j] * out.partial_concordance[j];
  }
  out.concordance = std::clamp(out.concordance, 0.0, 1.0);
  out.credibility = credibility_from(out.concordance, out.discordance);
  return out;
}

double concordance(std::span<const Criterion> criteria, std::span<const double> weights, std::span<const double> a,
                   std::span<const double> b) {
  return evaluate_pair(criteria, weights, a, b).concordance;
}

double credibility(std::span<const Criterion> criteria, std::span<const double> weights, std::span<const double> a,
                   std::span<const double> b) {
  return evaluate_pair(criteria, weights, a, b).credibility;
}

CategoryCredibility category_credibility(std::span<const Criterion> criteria, std::span<const double> weights,
                                         std::span<const double> action, const ReferenceSet& reference) {
  if (reference.profiles.empty()) {
    throw ScenarioError("category C" + std::to_string(reference.category) + " has no reference profile");
  }
  CategoryCredibility out;
  for (const auto& profile : reference.profiles) {
    out.action_over_category =
        std::max(out.action_over_category, credibility(criteria, weights, action, profile.performances));
    out.category_over_action =
        std::max(out.category_over_action, credibility(criteria, weights, profile.performances, action));
  }
  return out;
}

CredibilityMatrix::CredibilityMatrix(std::size_t actions, int categories)
    : actions_(actions),
      categories_(categories),
      action_over_(actions * static_cast<std::size_t>(categories + 2), 0.0),
      category_over_(actions * static_cast<std::size_t>(categories + 2), 0.0) {
  for (std::size_t a = 0; a < actions; ++a) {
    action_over_[slot(a, 0)] = 1.0;
    category_over_[slot(a, categories + 1)] = 1.0;
  }
}

std::size_t CredibilityMatrix::slot(std::size_t action, int h) const {
  if (action >= actions_ || h < 0 || h > categories_ + 1) throw std::out_of_range("credibility matrix index");
  return action * static_cast<std::size_t>(categories_ + 2) + static_cast<std::size_t>(h);
}

double CredibilityMatrix::action_over(std::size_t action, int h) const { return action_over_[slot(action, h)]; }

double CredibilityMatrix::category_over(std::size_t action, int h) const { return category_over_[slot(action, h)]; }

void CredibilityMatrix::set(std::size_t action, int h, CategoryCredibility value) {
  if (h < 1 || h > categories_) throw std::out_of_range("only real categories can be set");
  action_over_[slot(action, h)] = value.action_over_category;
  category_over_[slot(action, h)] = value.category_over_action;
}

CredibilityMatrix build_credibility_matrix(std::span<const Criterion> criteria, std::span<const double> weights,
                                           std::span<const std::vector<double>> actions,
                                           std::span<const ReferenceSet> references, bool parallel) {
  int q = 0;
  for (const auto& r : references) q = std::max(q, r.category);
  CredibilityMatrix matrix(actions.size(), q);

  // Each task writes distinct slots, so the outcome is order independent.
  auto fill = [&](std::size_t a) {
    for (const auto& r : references) {
      matrix.set(a, r.category, category_credibility(criteria, weights, actions[a], r));
    }
  };

  const unsigned workers = parallel ? std::min<unsigned>(std::max(1u, std::thread::hardware_concurrency()),
                                                         static_cast<unsigned>(actions.size()))
                                    : 1u;
  if (workers <= 1) {
    for (std::size_t a = 0; a < actions.size(); ++a) fill(a);
    return matrix;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t a = next++; a < actions.size(); a = next++) {
        try {
          fill(a);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return matrix;
}

double selection_rho(const CredibilityMatrix& matrix, std::size_t action, int h) {
  return std::min(matrix.action_over(action, h), matrix.category_over(action, h));
}

double selection_rho(CategoryCredibility value) {
  return std::min(value.action_over_category, value.category_over_action);
}

namespace {

/// Credibilities are sums of normalized weights; rounding must not turn a
/// full outranking into a miss at lambda = 1.
constexpr double kCutTolerance = 1e-12;

bool reaches(double credibility_value, double lambda) { return credibility_value >= lambda - kCutTolerance; }

}  // namespace

int assign_descending(const CredibilityMatrix& matrix, std::size_t action, double lambda) {
  const int q = matrix.category_count();
  int t = q + 1;
  while (t > 0 && !reaches(matrix.action_over(action, t), lambda)) --t;
  if (t == q) return q;
  if (t == 0) return 1;
  return selection_rho(matrix, action, t) > selection_rho(matrix, action, t + 1) ? t : t + 1;
}

int assign_ascending(const CredibilityMatrix& matrix, std::size_t action, double lambda) {
  const int q = matrix.category_count();
  int k = 0;
  while (k < q + 1 && !reaches(matrix.category_over(action, k), lambda)) ++k;
  if (k == 1) return 1;
  if (k == q + 1) return q;
  if (k == 0) return 1;
  return selection_rho(matrix, action, k) > selection_rho(matrix, action, k - 1) ? k : k - 1;
}

std::vector<CategoryInterval> AssignmentResult::intervals() const {
  std::vector<CategoryInterval> out;
  out.reserve(actions.size());
  for (const auto& a : actions) out.push_back(a.interval);
  return out;
}

namespace {

void check_lambda(double lambda) {
  if (!(lambda >= 0.5 && lambda <= 1.0)) {
    throw std::invalid_argument("lambda must lie in [0.5, 1], got " + std::to_string(lambda));
  }
}

std::vector<ActionAssignment> assign_impl(const Scenario& scenario, const WeightVector& weights,
                                          std::span<const std::vector<double>> vectors,
                                          std::span<const std::string> ids, double lambda) {
  check_lambda(lambda);
  const auto w = weights.normalized();
  if (w.size() != scenario.criteria.size()) {
    throw ScenarioError("weight set '" + weights.name() + "' does not match the criteria");
  }
  auto matrix = build_credibility_matrix(scenario.criteria, w, vectors, scenario.reference_sets, true);
  std::vector<ActionAssignment> out;
  out.reserve(vectors.size());
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    ActionAssignment a;
    a.action_id = i < ids.size() ? ids[i] : std::to_string(i);
    a.descending = assign_descending(matrix, i, lambda);
    a.ascending = assign_ascending(matrix, i, lambda);
    a.interval = {std::min(a.descending, a.ascending), std::max(a.descending, a.ascending)};
    out.push_back(std::move(a));
  }
  return out;
}

}  // namespace

AssignmentResult assign_with_weights(const Scenario& scenario, const WeightVector& weights, double lambda) {
  auto report = validate_scenario(scenario);
  if (!report.ok()) throw ScenarioError("scenario does not validate:\n" + report.str());
  std::vector<std::vector<double>> vectors;
  std::vector<std::string> ids;
  for (const auto& a : scenario.actions) {
    vectors.push_back(a.performances);
    ids.push_back(a.id);
  }
  AssignmentResult result;
  result.weight_set = weights.name();
  result.lambda = lambda;
  result.categories = scenario.category_count();
  result.actions = assign_impl(scenario, weights, vectors, ids, lambda);
  return result;
}

AssignmentResult assign(const Scenario& scenario, const std::string& weight_set, double lambda) {
  return assign_with_weights(scenario, scenario.weights(weight_set), lambda);
}

std::vector<ActionAssignment> assign_vectors(const Scenario& scenario, const WeightVector& weights,
                                             std::span<const std::vector<double>> vectors, double lambda) {
  return assign_impl(scenario, weights, vectors, {}, lambda);
}

}  // namespace trinc
