#include "trinc/report.hpp"

#include <algorithm>
#include <sstream>

#include "trinc/scenario_io.hpp"

namespace trinc {

ReportFormat parse_report_format(const std::string& name) {
  if (name == "json") return ReportFormat::json;
  if (name == "csv") return ReportFormat::csv;
  if (name == "markdown" || name == "md") return ReportFormat::markdown;
  throw std::invalid_argument("unknown report format '" + name + "' (json, csv, markdown)");
}

namespace {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  return out + "\"";
}

std::string render(const Table& t, ReportFormat format) {
  std::ostringstream out;
  if (format == ReportFormat::csv) {
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t k = 0; k < cells.size(); ++k) out << (k ? "," : "") << csv_cell(cells[k]);
      out << '\n';
    };
    line(t.header);
    for (const auto& r : t.rows) line(r);
    return out.str();
  }
  auto line = [&](const std::vector<std::string>& cells) {
    out << '|';
    for (const auto& c : cells) out << ' ' << c << " |";
    out << '\n';
  };
  line(t.header);
  out << '|';
  for (std::size_t k = 0; k < t.header.size(); ++k) out << (k ? " :-: |" : " --- |");
  out << '\n';
  for (const auto& r : t.rows) line(r);
  return out.str();
}

std::string json_text(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string export_assignments(const Scenario& scenario, std::span<const AssignmentResult> runs,
                               ReportFormat format) {
  if (format == ReportFormat::json) {
    json arr = json::array();
    for (const auto& r : runs) arr.push_back(assignment_to_json(r));
    return json_text(json{{"kind", "assignments"}, {"runs", std::move(arr)}});
  }
  Table t;
  t.header.push_back("action");
  for (const auto& r : runs) t.header.push_back(r.weight_set);
  if (!runs.empty()) {
    for (std::size_t i = 0; i < scenario.actions.size(); ++i) {
      std::vector<std::string> row{scenario.actions[i].id};
      for (const auto& r : runs) row.push_back(i < r.actions.size() ? r.actions[i].interval.str() : "");
      t.rows.push_back(std::move(row));
    }
  }
  return render(t, format);
}

std::string export_portfolios(const Scenario& scenario, std::span<const PortfolioColumn> columns,
                              ReportFormat format) {
  if (format == ReportFormat::json) {
    json arr = json::array();
    for (const auto& c : columns) {
      json ids = json::array();
      for (auto i : c.selected) ids.push_back(scenario.actions.at(i).id);
      arr.push_back({{"label", c.label}, {"infeasible", c.infeasible}, {"selected", std::move(ids)}});
    }
    return json_text(json{{"kind", "portfolios"}, {"columns", std::move(arr)}});
  }
  const std::string yes = format == ReportFormat::markdown ? "✓" : "1";
  const std::string no = format == ReportFormat::markdown ? "×" : "0";
  Table t;
  t.header.push_back("action");
  for (const auto& c : columns) t.header.push_back(c.label);
  if (!columns.empty()) {
    for (std::size_t i = 0; i < scenario.actions.size(); ++i) {
      std::vector<std::string> row{scenario.actions[i].id};
      for (const auto& c : columns) {
        if (c.infeasible) {
          row.push_back("-");
        } else {
          const bool in = std::find(c.selected.begin(), c.selected.end(), i) != c.selected.end();
          row.push_back(in ? yes : no);
        }
      }
      t.rows.push_back(std::move(row));
    }
  }
  return render(t, format);
}

std::string export_robustness(const Scenario& scenario, const RobustnessResult& result, ReportFormat format) {
  if (format == ReportFormat::json) return json_text(robustness_to_json(result, scenario));
  std::vector<PortfolioColumn> columns;
  for (const auto& c : result.cells) {
    columns.push_back({c.weight_set + "/" + c.budget.name + "/" + c.profile, c.portfolio.selected,
                       c.portfolio.infeasible});
  }
  std::string text = export_portfolios(scenario, columns, format);
  if (result.cells.empty()) return text;

  Table freq;
  freq.header = {"action", "frequency"};
  for (std::size_t i = 0; i < scenario.actions.size() && i < result.selection_frequency.size(); ++i) {
    std::ostringstream v;
    v.precision(3);
    v << std::fixed << result.selection_frequency[i];
    freq.rows.push_back({scenario.actions[i].id, v.str()});
  }
  return text + "\n" + render(freq, format);
}

}  // namespace trinc
