#ifndef TRINC_THRESHOLDS_HPP
#define TRINC_THRESHOLDS_HPP

#include "trinc/domain.hpp"

namespace trinc {

/// One elicitation answer: at `reference` performance the threshold is `value`.
struct Anchor {
  double reference = 0.0;
  double value = 0.0;
};

struct AnchorPair {
  Anchor first;
  Anchor second;
};

/// Solves value = alpha * reference + beta through both anchors.
/// Throws std::invalid_argument when the reference performances coincide.
ThresholdSpec calibrate_affine(const AnchorPair& anchors);

/// Direct-mode evaluation at the worse of the two compared performances.
/// `none` evaluates to 0; negative affine values are clamped to 0.
double evaluate_threshold(const ThresholdSpec& spec, double worse_performance);

/// Same as evaluate_threshold, except that `none` means "no veto" (+infinity).
double evaluate_veto(const ThresholdSpec& spec, double worse_performance);

/// True if the unclamped threshold would be negative at this performance.
bool threshold_clamps(const ThresholdSpec& spec, double worse_performance);

/// Checks 0 <= q <= p <= v over [low, high], at both endpoints and at every
/// point inside the range where two of the threshold lines cross.
ValidationReport validate_threshold_order(const Criterion& criterion, double low, double high);

}  // namespace trinc

#endif  // TRINC_THRESHOLDS_HPP
