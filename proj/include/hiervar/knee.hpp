#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <optional>
#include <vector>

#include "hiervar/common.hpp"
#include "hiervar/linear.hpp"

namespace hiervar {

enum class Aggregation { l2_norm, max_abs };

/// Per-feature coefficient magnitudes sorted ascending, plus the
/// permutation mapping sorted position -> original feature index.
struct CoefficientRanking {
    Eigen::VectorXd magnitudes;    // length K, non-decreasing
    std::vector<int> permutation;  // length K, sorted position -> feature index
    Aggregation aggregation = Aggregation::l2_norm;
};

/// KNEEDLE outcome. knee_index is a 0-based position into the input curve;
/// features strictly above it survive E-ROCKET.
struct KneeResult {
    std::optional<std::size_t> knee_index;
    double sensitivity = 1.0;
    std::vector<double> normalized_difference_curve;
};

/// Collapse K x C coefficients to one score per feature (binary: |W_k|,
/// the two centered columns being exact negatives; multiclass: row L2 norm
/// or max abs) and sort ascending with stable ties by original index.
CoefficientRanking rank_coefficients(const RidgeModel& model,
                                     Aggregation aggregation = Aggregation::l2_norm);

/// KNEEDLE core for a concave-increasing curve: min-max normalize, take the
/// difference curve d_i = y_i - x_i, and confirm the first local maximum
/// whose difference drops below (peak - sensitivity * mean x spacing)
/// before the next local maximum. Constant curves have no knee.
KneeResult kneedle_detect(const std::vector<double>& curve, double sensitivity = 1.0);

/// E-ROCKET adapter: an ascending magnitude curve is convex-increasing, so
/// rotate it 180 degrees into concave orientation, run the core, and map
/// the knee back to a position in the ascending curve.
KneeResult detect_knee_ascending(const Eigen::VectorXd& ascending_curve,
                                 double sensitivity = 1.0);

/// Original indices of all features strictly above the knee, ascending.
/// With no knee, every feature is kept and `warned_no_knee` is set.
struct ErocketSelection {
    std::vector<int> indices;
    bool warned_no_knee = false;
};
ErocketSelection select_erocket(const CoefficientRanking& ranking,
                                const KneeResult& knee);

}  // namespace hiervar
