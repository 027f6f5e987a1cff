#pragma once

#include <Eigen/Core>
#include <vector>

#include "hiervar/common.hpp"
#include "hiervar/kernels.hpp"

namespace hiervar {

/// Per-feature one-way ANOVA F-statistics with the mean-based threshold.
/// F = +inf marks a perfectly discriminative feature (SSW = 0, SSB > 0);
/// such entries always pass the threshold and are excluded from the mean's
/// sum (the normalizer stays K). Globally constant features get F = 0.
struct FScoreVector {
    Eigen::VectorXd f_scores;      // length K
    Eigen::VectorXd ssb;           // length K
    Eigen::VectorXd ssw;           // length K
    std::vector<int> group_counts; // per class {1..C}
    double mean_f = 0.0;           // mu = (sum of finite F) / K
    double divider = 2.0;          // d
    double threshold = 0.0;        // epsilon = mu / d
};

/// Intersection of the stage-1 selection with the F-score filter.
struct HiervarSelection {
    std::vector<int> erocket_set;  // stage-1 indices, ascending
    std::vector<int> fscore_pass;  // { k : F_k > epsilon }, ascending
    std::vector<int> final_set;    // intersection, ascending
    double reduction_ratio = 0.0;  // 1 - |final| / K
};

/// One-way ANOVA per feature, groups = class labels: SSB over class means,
/// SSW over within-class deviations, F = (SSB/(C-1)) / (SSW/(N-C)).
FScoreVector f_scores(const FeatureMatrix& features, const std::vector<int>& labels,
                      double divider = 2.0);

/// Hierarchical selection: keep k in the stage-1 set with F_k > epsilon.
HiervarSelection select_hiervar(const FScoreVector& fscores,
                                const std::vector<int>& erocket_set);

/// Column subset preserving sample order; selection applied in ascending
/// original-index order. An empty selection yields a 0-column matrix.
FeatureMatrix apply_selection(const FeatureMatrix& features,
                              const std::vector<int>& selection);

}  // namespace hiervar
