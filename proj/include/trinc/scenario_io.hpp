/**
 * @file scenario_io.hpp
 * @brief Versioned JSON scenario documents, performance CSV import,
 *        and JSON encodings of decks, anchors and run results.
 */

#ifndef TRINC_SCENARIO_IO_HPP
#define TRINC_SCENARIO_IO_HPP

#include <filesystem>
#include <string>

#include "json.hpp"
#include "trinc/domain.hpp"
#include "trinc/outranking.hpp"
#include "trinc/portfolio.hpp"
#include "trinc/robustness.hpp"
#include "trinc/srf.hpp"
#include "trinc/thresholds.hpp"

namespace trinc {

using json = nlohmann::ordered_json;

inline constexpr const char* kScenarioFormat = "trinc-scenario";
inline constexpr int kScenarioVersion = 1;

/// Parse or schema errors; `what()` carries the position or JSON pointer.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Decodes a scenario document without validating it.
Scenario scenario_from_json(const json& document);
json scenario_to_json(const Scenario& scenario);

/// Reads, decodes and validates. Throws FormatError on malformed input and
/// ScenarioError (with the full report) when validation fails.
Scenario load_scenario(const std::filesystem::path& path);
Scenario parse_scenario(const std::string& text, const std::string& origin = "<memory>");
void save_scenario(const Scenario& scenario, const std::filesystem::path& path);
std::string dump_scenario(const Scenario& scenario);

/// Applies an overlay document on top of a base scenario: any of
/// "criteria" (threshold fields by id), "categories", "weights", "lambda".
Scenario apply_overlay(const Scenario& base, const json& overlay);

/// Replaces the performance table from CSV: header "action,<criterion ids...>",
/// qualitative cells as labels ("VH", "H-M") or integer codes.
Scenario load_performance_csv(const std::filesystem::path& path, const Scenario& scenario);
Scenario parse_performance_csv(const std::string& text, const Scenario& scenario);
std::string performance_csv(const Scenario& scenario);

/// Deck documents: {"order": "least-first"|"most-first", "levels": [[ids]],
/// "blanks"|"cards": [...], "ratio": z, "criteria": [ids]?}.
CardDeck deck_from_json(const json& document);
json deck_to_json(const CardDeck& deck);

ThresholdSpec threshold_from_json(const json& value);
json threshold_to_json(const ThresholdSpec& spec);

json weights_to_json(const WeightVector& weights, const std::vector<Criterion>& criteria);

json assignment_to_json(const AssignmentResult& result);
AssignmentResult assignment_from_json(const json& document);

json solution_to_json(const PortfolioSolution& solution, const Scenario& scenario, const PriorityLadder& ladder);
json robustness_to_json(const RobustnessResult& result, const Scenario& scenario);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace trinc

#endif  // TRINC_SCENARIO_IO_HPP
