// Command-line front end: validation, weighting, calibration, sorting,
// portfolio selection, robustness runs and the HTTP service.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "trinc/outranking.hpp"
#include "trinc/portfolio.hpp"
#include "trinc/report.hpp"
#include "trinc/robustness.hpp"
#include "trinc/scenario_io.hpp"
#include "trinc/service.hpp"
#include "trinc/srf.hpp"
#include "trinc/thresholds.hpp"

namespace fs = std::filesystem;
using trinc::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitUsage = 64;

/// Raised for bad flag combinations that CLI11 cannot express.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

fs::path data_directory() {
  if (const char* env = std::getenv("TRINC_DATA_DIR"); env && *env) return env;
  return TRINC_DEFAULT_DATA_DIR;
}

/// A scenario argument is a file path, or a bare name looked up in the data directory.
fs::path scenario_path(const std::string& arg) {
  if (fs::exists(arg)) return arg;
  const auto candidate = data_directory() / (arg + ".json");
  if (fs::exists(candidate)) return candidate;
  throw trinc::FormatError(arg + ": no such scenario file (also tried " + candidate.string() + ")");
}

trinc::Scenario open_scenario(const std::string& arg) { return trinc::load_scenario(scenario_path(arg)); }

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) std::cout << text;
  else trinc::write_text_file(out, text);
}

std::vector<std::string> natural_sort(std::vector<std::string> ids) {
  auto key = [](const std::string& s) {
    auto pos = s.find_first_of("0123456789");
    if (pos == std::string::npos) return std::make_pair(s, -1L);
    return std::make_pair(s.substr(0, pos), std::strtol(s.c_str() + pos, nullptr, 10));
  };
  std::sort(ids.begin(), ids.end(), [&](const auto& a, const auto& b) { return key(a) < key(b); });
  return ids;
}

trinc::AnchorPair anchors_from(const json& v, const std::string& key) {
  auto point = [&](const json& p) {
    if (!p.is_array() || p.size() != 2) throw trinc::FormatError(key + ": anchor must be [performance, threshold]");
    return trinc::Anchor{p[0].get<double>(), p[1].get<double>()};
  };
  if (v.is_array() && v.size() == 2) return {point(v[0]), point(v[1])};
  if (v.is_object()) return {point(v.at("first")), point(v.at("second"))};
  throw trinc::FormatError(key + ": expected {\"first\": [x, t], \"second\": [x, t]} or [[x, t], [x, t]]");
}

int cmd_validate(const std::string& arg) {
  const auto path = scenario_path(arg);
  // A failing scenario throws with the full violation report.
  trinc::Scenario s;
  try {
    s = trinc::load_scenario(path);
  } catch (const trinc::ScenarioError& e) {
    std::cout << e.what();
    return kExitInvalid;
  }
  const auto report = trinc::validate_scenario(s);
  std::size_t profiles = 0;
  for (const auto& r : s.reference_sets) profiles += r.profiles.size();
  std::cout << s.name << ": ok (" << s.actions.size() << " actions, " << s.criteria.size() << " criteria, "
            << profiles << " reference profiles in " << s.category_count() << " categories)\n";
  for (const auto& w : report.warnings) std::cout << "warning: " << w.where << ": " << w.message << "\n";
  return kExitOk;
}

int cmd_srf(const std::string& deck_file, const std::string& scenario_arg, int decimals, const std::string& out) {
  const auto deck = trinc::deck_from_json(json::parse(trinc::read_text_file(deck_file)));
  std::vector<std::string> ids;
  if (!scenario_arg.empty()) {
    for (const auto& c : open_scenario(scenario_arg).criteria) ids.push_back(c.id);
  } else {
    for (const auto& level : deck.levels) ids.insert(ids.end(), level.begin(), level.end());
    ids = natural_sort(ids);
  }
  const auto weights = trinc::compute_srf_weights(deck, ids, fs::path(deck_file).stem().string());
  json full = json::object();
  json rounded = json::object();
  for (std::size_t j = 0; j < ids.size(); ++j) {
    full[ids[j]] = weights.raw()[j];
    rounded[ids[j]] = trinc::round_to(weights.raw()[j], decimals);
  }
  const json doc = {{"kind", "srf-weights"},
                    {"name", weights.name()},
                    {"weights", full},
                    {"rounded", rounded},
                    {"level_values", trinc::srf_level_values(deck)},
                    {"deck", trinc::deck_to_json(deck)}};
  emit(doc.dump(2) + "\n", out);
  return kExitOk;
}

int cmd_calibrate(const std::string& anchors_file, const std::string& out) {
  const auto doc = json::parse(trinc::read_text_file(anchors_file));
  if (!doc.is_object()) throw trinc::FormatError(anchors_file + ": expected an object of anchor pairs");
  json result = json::object();
  for (const auto& [key, value] : doc.items()) {
    const auto spec = trinc::calibrate_affine(anchors_from(value, key));
    result[key] = {{"alpha", spec.alpha}, {"beta", spec.beta}};
  }
  emit(json{{"kind", "calibration"}, {"thresholds", result}}.dump(2) + "\n", out);
  return kExitOk;
}

int cmd_sort(const std::string& scenario_arg, const std::string& weights, std::optional<double> lambda,
             const std::string& format, const std::string& out) {
  const auto s = open_scenario(scenario_arg);
  const double cut = lambda.value_or(s.lambda);
  const auto result = trinc::assign(s, weights, cut);
  const auto fmt = trinc::parse_report_format(format);
  if (fmt == trinc::ReportFormat::json) {
    json doc = trinc::assignment_to_json(result);
    doc["scenario"] = s.name;
    emit(doc.dump(2) + "\n", out);
  } else {
    emit(trinc::export_assignments(s, std::span(&result, 1), fmt), out);
  }
  return kExitOk;
}

std::vector<trinc::CategoryInterval> load_intervals(const trinc::Scenario& s, const std::string& file,
                                                    const std::string& reference, const std::string& weights,
                                                    std::optional<double> lambda, std::string& label) {
  const int sources = !file.empty() + !reference.empty() + !weights.empty();
  if (sources != 1) throw UsageError("give exactly one of --assignments, --reference, --weights");
  if (!file.empty()) {
    const auto result = trinc::assignment_from_json(json::parse(trinc::read_text_file(file)));
    if (result.actions.size() != s.actions.size()) {
      throw trinc::ScenarioError(file + ": assignment covers " + std::to_string(result.actions.size()) +
                                 " actions, scenario has " + std::to_string(s.actions.size()));
    }
    for (std::size_t i = 0; i < s.actions.size(); ++i) {
      if (result.actions[i].action_id != s.actions[i].id) {
        throw trinc::ScenarioError(file + ": action " + result.actions[i].action_id + " does not match scenario order");
      }
    }
    label = result.weight_set;
    return result.intervals();
  }
  if (!reference.empty()) {
    auto it = s.reference_assignments.find(reference);
    if (it == s.reference_assignments.end()) throw trinc::ScenarioError("no reference assignment '" + reference + "'");
    label = reference;
    return it->second;
  }
  label = weights;
  return trinc::assign(s, weights, lambda.value_or(s.lambda)).intervals();
}

int cmd_select(const std::string& scenario_arg, const std::string& assignments, const std::string& reference,
               const std::string& weights, std::optional<double> lambda, const std::string& budget_text,
               const std::string& profile, const std::string& format, const std::string& out) {
  const auto s = open_scenario(scenario_arg);
  std::string label;
  const auto intervals = load_intervals(s, assignments, reference, weights, lambda, label);
  const auto budget = trinc::resolve_budget(s, budget_text);
  const auto ladder = trinc::build_ladder(intervals);
  const auto constraints = trinc::resolve_constraints(s, profile, budget.amount);
  const auto solution = trinc::solve_certified(ladder, constraints);

  const auto fmt = trinc::parse_report_format(format);
  if (fmt == trinc::ReportFormat::json) {
    json doc = trinc::solution_to_json(solution, s, ladder);
    doc["scenario"] = s.name;
    doc["assignment"] = label;
    doc["budget"] = {{"name", budget.name}, {"amount", budget.amount}};
    doc["profile"] = profile;
    emit(doc.dump(2) + "\n", out);
  } else {
    const trinc::PortfolioColumn column{label + "/" + (budget.name.empty() ? budget_text : budget.name),
                                        solution.selected, solution.infeasible};
    emit(trinc::export_portfolios(s, std::span(&column, 1), fmt), out);
  }
  if (solution.infeasible) {
    std::cerr << "infeasible: no selection satisfies the '" << profile << "' constraints within budget "
              << budget.amount << "\n";
    std::cerr << "unsatisfiable rows:";
    for (const auto& r : solution.unsatisfiable_rows) std::cerr << ' ' << r;
    std::cerr << "\n";
    return kExitInfeasible;
  }
  return kExitOk;
}

int cmd_robustness(const std::string& scenario_arg, const std::vector<std::string>& weight_sets,
                   const std::vector<std::string>& budget_texts, const std::vector<std::string>& profiles,
                   const std::string& source, std::optional<double> lambda, const std::string& format,
                   const std::string& out) {
  const auto s = open_scenario(scenario_arg);
  std::vector<trinc::BudgetPoint> budgets;
  for (const auto& b : budget_texts) budgets.push_back(trinc::resolve_budget(s, b));
  trinc::RobustnessOptions options;
  if (source == "reference") options.source = trinc::AssignmentSource::reference;
  else if (source != "engine") throw UsageError("--source must be engine or reference");
  options.lambda = lambda.value_or(-1.0);
  const auto result = trinc::robustness_matrix(s, weight_sets, budgets, profiles, options);
  emit(trinc::export_robustness(s, result, trinc::parse_report_format(format)), out);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Priority sorting and portfolio selection for regeneration projects"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "trinc 1.0");

  std::string scenario_arg, out, format = "json";
  std::optional<double> lambda;

  auto* validate = app.add_subcommand("validate", "Check a scenario document and list violations");
  validate->add_option("scenario", scenario_arg, "Scenario file or name in the data directory")->required();

  auto* weights = app.add_subcommand("weights", "Criterion weighting procedures");
  weights->require_subcommand(1);
  auto* srf = weights->add_subcommand("srf", "Deck-of-cards weights");
  std::string deck_file;
  int decimals = 1;
  srf->add_option("--deck", deck_file, "Deck file")->required()->check(CLI::ExistingFile);
  srf->add_option("--scenario", scenario_arg, "Order weights by this scenario's criteria");
  srf->add_option("--decimals", decimals, "Decimals of the rounded display values")->check(CLI::Range(0, 6));
  srf->add_option("--out", out, "Output file (default: stdout)");

  auto* calibrate = app.add_subcommand("calibrate", "Affine thresholds from anchor pairs");
  std::string anchors_file;
  calibrate->add_option("--anchors", anchors_file, "Anchor file")->required()->check(CLI::ExistingFile);
  calibrate->add_option("--out", out, "Output file (default: stdout)");

  auto* sort = app.add_subcommand("sort", "Assign every action to a category interval");
  std::string weight_name;
  sort->add_option("--scenario", scenario_arg, "Scenario file or name")->required();
  sort->add_option("--weights", weight_name, "Weight vector name")->required();
  sort->add_option("--lambda", lambda, "Cut level in [0.5, 1] (default: scenario value)");
  sort->add_option("--format", format, "json, csv or markdown")->check(CLI::IsMember({"json", "csv", "markdown", "md"}));
  sort->add_option("--out", out, "Output file (default: stdout)");

  auto* select = app.add_subcommand("select", "Optimal portfolio for one budget and constraint profile");
  std::string assignments, reference, budget_text, profile = "full";
  select->add_option("--scenario", scenario_arg, "Scenario file or name")->required();
  select->add_option("--assignments", assignments, "Assignment file written by `sort`");
  select->add_option("--reference", reference, "Use the scenario's reference assignment for this weight set");
  select->add_option("--weights", weight_name, "Sort with this weight vector first");
  select->add_option("--lambda", lambda, "Cut level when sorting with --weights");
  select->add_option("--budget", budget_text, "Budget amount or name")->required();
  select->add_option("--constraints", profile, "Constraint profile name");
  select->add_option("--format", format, "json, csv or markdown")->check(CLI::IsMember({"json", "csv", "markdown", "md"}));
  select->add_option("--out", out, "Output file (default: stdout)");

  auto* robustness = app.add_subcommand("robustness", "Portfolios across weight sets, budgets and profiles");
  std::vector<std::string> weight_sets, budgets, profiles{"full"};
  std::string source = "engine";
  robustness->add_option("--scenario", scenario_arg, "Scenario file or name")->required();
  robustness->add_option("--weight-sets", weight_sets, "Comma-separated weight set names")->required()->delimiter(',');
  robustness->add_option("--budgets", budgets, "Comma-separated budget names or amounts")->required()->delimiter(',');
  robustness->add_option("--profiles", profiles, "Comma-separated constraint profiles")->delimiter(',');
  robustness->add_option("--source", source, "Assignments from the engine or the scenario reference");
  robustness->add_option("--lambda", lambda, "Cut level for engine assignments");
  robustness->add_option("--format", format, "json, csv or markdown")->check(CLI::IsMember({"json", "csv", "markdown", "md"}));
  robustness->add_option("--out", out, "Output file (default: stdout)");

  auto* serve = app.add_subcommand("serve", "Serve the HTTP API");
  int port = 8080;
  std::string host = "127.0.0.1";
  std::string data;
  serve->add_option("--port", port, "Port")->check(CLI::Range(1, 65535));
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--data", data, "Data directory (default: TRINC_DATA_DIR or the bundled data)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*validate) return cmd_validate(scenario_arg);
    if (*srf) return cmd_srf(deck_file, scenario_arg, decimals, out);
    if (*calibrate) return cmd_calibrate(anchors_file, out);
    if (*sort) return cmd_sort(scenario_arg, weight_name, lambda, format, out);
    if (*select) {
      return cmd_select(scenario_arg, assignments, reference, weight_name, lambda, budget_text, profile, format,
                        out);
    }
    if (*robustness) {
      return cmd_robustness(scenario_arg, weight_sets, budgets, profiles, source, lambda, format, out);
    }
    if (*serve) {
      trinc::Service service(data.empty() ? data_directory() : fs::path(data));
      std::cerr << "serving " << service.data_directory().string() << " on http://" << host << ":" << port << "\n";
      trinc::serve(service, host, port);
      return kExitOk;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const trinc::ScenarioError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const trinc::FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitUsage;
}
