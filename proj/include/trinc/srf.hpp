/**
 * @file srf.hpp
 * @brief Deck-of-cards (Simos-Roy-Figueira) weighting.
 *
 * Criteria are ranked in levels from least to most important, blank cards
 * widen the gap between consecutive levels, and the ratio z fixes how many
 * times more important the top level is than the bottom one.
 */

#ifndef TRINC_SRF_HPP
#define TRINC_SRF_HPP

#include <span>
#include <string>
#include <vector>

#include "trinc/domain.hpp"

namespace trinc {

enum class DeckOrder { least_first, most_first };

struct CardDeck {
  /// Levels from least to most important; each holds one or more criterion ids.
  std::vector<std::vector<std::string>> levels;
  /// blanks[r] = blank cards between levels[r] and levels[r + 1].
  std::vector<int> blanks;
  /// How many times the most important level outweighs the least important one.
  double ratio = 1.0;

  bool operator==(const CardDeck&) const = default;
};

/// Builds a canonical deck from levels listed in `order`.
///
/// For `most_first`, `cards[r]` is the number of blank cards between level r
/// and the level listed just before it (so `cards[0]` is ignored), which is
/// how expert rankings are usually written down. For `least_first`, `cards`
/// are the blanks between consecutive levels and must have levels.size() - 1
/// entries.
CardDeck make_deck(std::vector<std::vector<std::string>> levels, std::vector<int> cards, double ratio,
                   DeckOrder order);

CardDeck deck_from_spec(const DeckSpec& spec);
DeckSpec deck_to_spec(const CardDeck& deck);

ValidationReport validate_deck(const CardDeck& deck, std::span<const std::string> criterion_ids);

/// Non-normalized level values k(r) = 1 + u * sum_{s<r} (e_s + 1), with
/// u = (z - 1) / sum_r (e_r + 1). k(0) = 1, k(last) = z.
std::vector<double> srf_level_values(const CardDeck& deck);

/// Weights per criterion (in `criterion_ids` order), scaled to sum 100.
/// Throws ScenarioError if the deck is invalid for these criteria.
WeightVector compute_srf_weights(const CardDeck& deck, std::span<const std::string> criterion_ids,
                                 std::string name = "srf");

/// Rounds for display only.
double round_to(double value, int decimals);

}  // namespace trinc

#endif  // TRINC_SRF_HPP
