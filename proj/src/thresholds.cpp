#include "trinc/thresholds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace trinc {

ThresholdSpec calibrate_affine(const AnchorPair& anchors) {
  const double dx = anchors.second.reference - anchors.first.reference;
  if (dx == 0.0) {
    throw std::invalid_argument("anchor reference performances coincide; the system is singular");
  }
  const double alpha = (anchors.second.value - anchors.first.value) / dx;
  const double beta = anchors.first.value - alpha * anchors.first.reference;
  return ThresholdSpec::affine(alpha, beta);
}

namespace {

double raw_value(const ThresholdSpec& spec, double x) {
  switch (spec.kind) {
    case ThresholdSpec::Kind::none:
      return 0.0;
    case ThresholdSpec::Kind::constant:
      return spec.beta;
    case ThresholdSpec::Kind::affine:
      return spec.alpha * x + spec.beta;
  }
  return 0.0;
}

}  // namespace

double evaluate_threshold(const ThresholdSpec& spec, double worse_performance) {
  return std::max(0.0, raw_value(spec, worse_performance));
}

double evaluate_veto(const ThresholdSpec& spec, double worse_performance) {
  if (spec.kind == ThresholdSpec::Kind::none) return std::numeric_limits<double>::infinity();
  return evaluate_threshold(spec, worse_performance);
}

bool threshold_clamps(const ThresholdSpec& spec, double worse_performance) {
  return raw_value(spec, worse_performance) < 0.0;
}

namespace {

struct Line {
  const char* name;
  const ThresholdSpec* spec;
  bool veto;
};

double line_value(const Line& line, double x) {
  return line.veto ? evaluate_veto(*line.spec, x) : evaluate_threshold(*line.spec, x);
}

/// Point where two (non-none) threshold lines cross, if any.
std::optional<double> crossing(const ThresholdSpec& a, const ThresholdSpec& b) {
  if (a.kind == ThresholdSpec::Kind::none || b.kind == ThresholdSpec::Kind::none) return std::nullopt;
  const double slope = a.alpha - b.alpha;
  if (slope == 0.0) return std::nullopt;
  return (b.beta - a.beta) / slope;
}

std::string format_number(double x) {
  std::ostringstream out;
  out.precision(10);
  out << x;
  return out.str();
}

}  // namespace

ValidationReport validate_threshold_order(const Criterion& criterion, double low, double high) {
  ValidationReport report;
  const std::string where = "criterion " + criterion.id;
  if (low > high) {
    report.add(where, "empty performance range");
    return report;
  }

  const Line q{"q", &criterion.indifference, false};
  const Line p{"p", &criterion.preference, false};
  const Line v{"v", &criterion.veto, true};

  std::vector<double> points{low, high};
  for (auto [a, b] : {std::pair{&criterion.indifference, &criterion.preference},
                      std::pair{&criterion.preference, &criterion.veto},
                      std::pair{&criterion.indifference, &criterion.veto}}) {
    if (auto x = crossing(*a, *b); x && *x > low && *x < high) points.push_back(*x);
  }
  // A line also changes behaviour where it would go negative.
  for (const auto* spec : {&criterion.indifference, &criterion.preference, &criterion.veto}) {
    if (spec->kind == ThresholdSpec::Kind::affine && spec->alpha != 0.0) {
      const double zero = -spec->beta / spec->alpha;
      if (zero > low && zero < high) points.push_back(zero);
    }
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());

  // Tolerance for values that should be equal at a crossing point.
  auto leq = [](double a, double b) { return a <= b + 1e-9 * std::max(1.0, std::abs(b)); };

  auto crossing_note = [&](const ThresholdSpec& a, const ThresholdSpec& b) -> std::string {
    if (auto x = crossing(a, b); x && *x >= low && *x <= high) return " (lines cross at performance " + format_number(*x) + ")";
    return {};
  };

  bool q_above_p = false;
  bool p_above_v = false;
  for (double x : points) {
    const double qv = line_value(q, x);
    const double pv = line_value(p, x);
    const double vv = line_value(v, x);
    if (!q_above_p && !leq(qv, pv)) {
      report.add(where, "indifference threshold " + format_number(qv) + " exceeds preference threshold " +
                            format_number(pv) + " at performance " + format_number(x) +
                            crossing_note(criterion.indifference, criterion.preference));
      q_above_p = true;
    }
    if (!p_above_v && !leq(pv, vv)) {
      report.add(where, "preference threshold " + format_number(pv) + " exceeds veto threshold " +
                            format_number(vv) + " at performance " + format_number(x) +
                            crossing_note(criterion.preference, criterion.veto));
      p_above_v = true;
    }
    for (const auto& line : {q, p, v}) {
      if (threshold_clamps(*line.spec, x)) {
        report.warn(where, std::string(line.name) + " threshold negative at performance " + format_number(x) +
                               ", clamped to 0");
      }
    }
  }
  return report;
}

}  // namespace trinc
