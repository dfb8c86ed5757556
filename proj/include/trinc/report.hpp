#ifndef TRINC_REPORT_HPP
#define TRINC_REPORT_HPP

#include <span>
#include <string>
#include <vector>

#include "trinc/domain.hpp"
#include "trinc/outranking.hpp"
#include "trinc/portfolio.hpp"
#include "trinc/robustness.hpp"

namespace trinc {

enum class ReportFormat { json, csv, markdown };

ReportFormat parse_report_format(const std::string& name);

/// One column of a portfolio table (a configuration such as "w1/B2").
struct PortfolioColumn {
  std::string label;
  std::vector<std::size_t> selected;
  bool infeasible = false;
};

/// Per-action category intervals, one column per assignment run. Rows follow
/// the scenario's action order.
std::string export_assignments(const Scenario& scenario, std::span<const AssignmentResult> runs, ReportFormat format);

/// Selected / not-selected table with one row per action, check marks in markdown.
std::string export_portfolios(const Scenario& scenario, std::span<const PortfolioColumn> columns,
                              ReportFormat format);

std::string export_robustness(const Scenario& scenario, const RobustnessResult& result, ReportFormat format);

}  // namespace trinc

#endif  // TRINC_REPORT_HPP
