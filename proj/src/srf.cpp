#include "trinc/srf.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace trinc {

CardDeck make_deck(std::vector<std::vector<std::string>> levels, std::vector<int> cards, double ratio,
                   DeckOrder order) {
  CardDeck deck;
  deck.ratio = ratio;
  if (order == DeckOrder::least_first) {
    deck.levels = std::move(levels);
    deck.blanks = std::move(cards);
    return deck;
  }
  if (!cards.empty() && cards.size() != levels.size()) {
    throw ScenarioError("most-first deck needs one card count per level (the first is ignored)");
  }
  deck.levels.assign(levels.rbegin(), levels.rend());
  if (levels.size() > 1) {
    deck.blanks.resize(levels.size() - 1, 0);
    if (!cards.empty()) {
      // cards[r] sits above level r; reversed, it sits between levels n-1-r and n-r.
      for (std::size_t r = 1; r < cards.size(); ++r) deck.blanks[levels.size() - 1 - r] = cards[r];
    }
  }
  return deck;
}

CardDeck deck_from_spec(const DeckSpec& spec) { return {spec.levels, spec.blanks, spec.ratio}; }

DeckSpec deck_to_spec(const CardDeck& deck) { return {deck.levels, deck.blanks, deck.ratio}; }

ValidationReport validate_deck(const CardDeck& deck, std::span<const std::string> criterion_ids) {
  ValidationReport report;
  if (deck.levels.empty()) report.add("levels", "deck has no levels");
  if (!deck.levels.empty() && deck.blanks.size() + 1 != deck.levels.size()) {
    report.add("blanks", "expected " + std::to_string(deck.levels.size() - 1) + " blank counts, got " +
                             std::to_string(deck.blanks.size()));
  }
  for (std::size_t r = 0; r < deck.blanks.size(); ++r) {
    if (deck.blanks[r] < 0) report.add("blanks", "negative blank count at position " + std::to_string(r));
  }
  if (deck.levels.size() >= 2 && !(deck.ratio > 1.0)) {
    report.add("ratio", "ratio z must be greater than 1");
  }
  if (!std::isfinite(deck.ratio)) report.add("ratio", "ratio z must be finite");

  std::map<std::string, int> count;
  for (std::size_t r = 0; r < deck.levels.size(); ++r) {
    if (deck.levels[r].empty()) report.add("levels", "level " + std::to_string(r) + " is empty");
    for (const auto& id : deck.levels[r]) ++count[id];
  }
  for (const auto& [id, n] : count) {
    if (std::find(criterion_ids.begin(), criterion_ids.end(), id) == criterion_ids.end()) {
      report.add(id, "unknown criterion '" + id + "'");
    } else if (n > 1) {
      report.add(id, "criterion '" + id + "' appears " + std::to_string(n) + " times");
    }
  }
  for (const auto& id : criterion_ids) {
    if (!count.contains(id)) report.add(id, "criterion '" + id + "' missing from the deck");
  }
  return report;
}

std::vector<double> srf_level_values(const CardDeck& deck) {
  const std::size_t n = deck.levels.size();
  std::vector<double> k(n, 1.0);
  if (n < 2) return k;
  const double steps =
      std::accumulate(deck.blanks.begin(), deck.blanks.end(), 0.0, [](double acc, int e) { return acc + e + 1; });
  const double unit = (deck.ratio - 1.0) / steps;
  double cumulative = 0.0;
  for (std::size_t r = 1; r < n; ++r) {
    cumulative += deck.blanks[r - 1] + 1;
    k[r] = 1.0 + unit * cumulative;
  }
  return k;
}

WeightVector compute_srf_weights(const CardDeck& deck, std::span<const std::string> criterion_ids, std::string name) {
  auto report = validate_deck(deck, criterion_ids);
  if (!report.ok()) throw ScenarioError("invalid deck:\n" + report.str());

  const auto k = srf_level_values(deck);
  std::map<std::string, double> by_id;
  double total = 0.0;
  for (std::size_t r = 0; r < deck.levels.size(); ++r) {
    for (const auto& id : deck.levels[r]) {
      by_id[id] = k[r];
      total += k[r];
    }
  }
  std::vector<double> weights;
  weights.reserve(criterion_ids.size());
  for (const auto& id : criterion_ids) weights.push_back(100.0 * by_id.at(id) / total);
  return WeightVector(std::move(name), std::move(weights), "srf");
}

double round_to(double value, int decimals) {
  const double scale = std::pow(10.0, decimals);
  return std::round(value * scale) / scale;
}

}  // namespace trinc
