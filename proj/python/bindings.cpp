// Python bindings: JSON text in and out, decoded by the trinc package.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "trinc/outranking.hpp"
#include "trinc/portfolio.hpp"
#include "trinc/robustness.hpp"
#include "trinc/scenario_io.hpp"
#include "trinc/srf.hpp"
#include "trinc/thresholds.hpp"

namespace py = pybind11;

namespace {

using trinc::json;

std::string validate(const std::string& path) {
  const auto s = trinc::scenario_from_json(json::parse(trinc::read_text_file(path)));
  const auto report = trinc::validate_scenario(s);
  auto list = [](const std::vector<trinc::Violation>& vs) {
    json out = json::array();
    for (const auto& v : vs) out.push_back({{"field", v.where}, {"message", v.message}});
    return out;
  };
  return json{{"ok", report.ok()}, {"violations", list(report.violations)}, {"warnings", list(report.warnings)}}
      .dump();
}

std::string load(const std::string& path) { return trinc::scenario_to_json(trinc::load_scenario(path)).dump(); }

std::string srf_weights(const std::string& deck_text, const std::vector<std::string>& criterion_ids) {
  const auto deck = trinc::deck_from_json(json::parse(deck_text));
  const auto w = trinc::compute_srf_weights(deck, criterion_ids);
  json values = json::object();
  for (std::size_t j = 0; j < criterion_ids.size(); ++j) values[criterion_ids[j]] = w.raw()[j];
  return json{{"weights", values}, {"level_values", trinc::srf_level_values(deck)}}.dump();
}

std::pair<double, double> calibrate(double x1, double t1, double x2, double t2) {
  const auto spec = trinc::calibrate_affine({{x1, t1}, {x2, t2}});
  return {spec.alpha, spec.beta};
}

std::string sort_actions(const std::string& path, const std::string& weights, std::optional<double> lambda) {
  const auto s = trinc::load_scenario(path);
  return trinc::assignment_to_json(trinc::assign(s, weights, lambda.value_or(s.lambda))).dump();
}

std::string select_portfolio(const std::string& path, const std::string& budget, const std::string& profile,
                   std::optional<std::string> reference, std::optional<std::string> weights,
                   std::optional<double> lambda) {
  const auto s = trinc::load_scenario(path);
  std::vector<trinc::CategoryInterval> intervals;
  if (reference) {
    auto it = s.reference_assignments.find(*reference);
    if (it == s.reference_assignments.end()) throw trinc::ScenarioError("no reference assignment '" + *reference + "'");
    intervals = it->second;
  } else {
    intervals = trinc::assign(s, weights.value_or("w1"), lambda.value_or(s.lambda)).intervals();
  }
  const auto b = trinc::resolve_budget(s, budget);
  const auto ladder = trinc::build_ladder(intervals);
  const auto solution = trinc::solve_certified(ladder, trinc::resolve_constraints(s, profile, b.amount));
  return trinc::solution_to_json(solution, s, ladder).dump();
}

std::string robustness(const std::string& path, const std::vector<std::string>& weight_sets,
                       const std::vector<std::string>& budgets, const std::vector<std::string>& profiles,
                       const std::string& source) {
  const auto s = trinc::load_scenario(path);
  std::vector<trinc::BudgetPoint> points;
  for (const auto& b : budgets) points.push_back(trinc::resolve_budget(s, b));
  trinc::RobustnessOptions options;
  if (source == "reference") options.source = trinc::AssignmentSource::reference;
  else if (source != "engine") throw std::invalid_argument("source must be \"engine\" or \"reference\"");
  return trinc::robustness_to_json(trinc::robustness_matrix(s, weight_sets, points, profiles, options), s).dump();
}

}  // namespace

PYBIND11_MODULE(_trinc, m) {
  m.doc() = "Multi-criteria sorting and portfolio selection core";
  py::register_exception<trinc::ScenarioError>(m, "ScenarioError", PyExc_ValueError);
  py::register_exception<trinc::FormatError>(m, "FormatError", PyExc_ValueError);

  m.def("validate", &validate, py::arg("path"));
  m.def("load_scenario", &load, py::arg("path"));
  m.def("srf_weights", &srf_weights, py::arg("deck"), py::arg("criterion_ids"));
  m.def("calibrate", &calibrate, py::arg("x1"), py::arg("t1"), py::arg("x2"), py::arg("t2"));
  m.def("sort", &sort_actions, py::arg("path"), py::arg("weights"), py::arg("lam") = py::none());
  m.def("select", &select_portfolio, py::arg("path"), py::arg("budget"), py::arg("profile") = "full",
        py::arg("reference") = py::none(), py::arg("weights") = py::none(), py::arg("lam") = py::none());
  m.def("robustness", &robustness, py::arg("path"), py::arg("weight_sets"), py::arg("budgets"),
        py::arg("profiles") = std::vector<std::string>{"full"}, py::arg("source") = "engine");
}
