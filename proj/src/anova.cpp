#include "hiervar/anova.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <set>

namespace hiervar {

FScoreVector f_scores(const FeatureMatrix& features, const std::vector<int>& labels,
                      double divider) {
    const Eigen::Index n_samples = features.values.rows();
    const Eigen::Index n_features = features.values.cols();
    if (static_cast<std::size_t>(n_samples) != labels.size()) {
        throw ShapeError("feature rows and label count differ");
    }
    if (divider <= 0.0) {
        throw ConfigError("divider d must be positive");
    }

    int classes = 0;
    for (int label : labels) {
        if (label < 1) {
            throw LabelError("labels must lie in {1..C}");
        }
        classes = std::max(classes, label);
    }
    const std::set<int> distinct(labels.begin(), labels.end());
    const auto groups = static_cast<int>(distinct.size());
    if (groups < 2) {
        throw LabelError("ANOVA requires at least two classes");
    }
    if (n_samples <= groups) {
        throw ConfigError("ANOVA requires N > C (got N = " + std::to_string(n_samples) +
                          ", C = " + std::to_string(groups) + ")");
    }

    FScoreVector result;
    result.divider = divider;
    result.f_scores.resize(n_features);
    result.ssb.resize(n_features);
    result.ssw.resize(n_features);
    result.group_counts.assign(static_cast<std::size_t>(classes), 0);
    for (int label : labels) {
        ++result.group_counts[static_cast<std::size_t>(label) - 1];
    }

    const double df_between = groups - 1;
    const double df_within = static_cast<double>(n_samples) - groups;
    const double infinity = std::numeric_limits<double>::infinity();

#pragma omp parallel for schedule(static)
    for (Eigen::Index j = 0; j < n_features; ++j) {
        std::vector<double> group_sum(static_cast<std::size_t>(classes), 0.0);
        double total = 0.0;
        for (Eigen::Index i = 0; i < n_samples; ++i) {
            const double value = features.values(i, j);
            group_sum[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)]) - 1] +=
                value;
            total += value;
        }
        const double grand_mean = total / static_cast<double>(n_samples);

        std::vector<double> group_mean(static_cast<std::size_t>(classes), 0.0);
        double ssb = 0.0;
        for (int c = 0; c < classes; ++c) {
            const int count = result.group_counts[static_cast<std::size_t>(c)];
            if (count == 0) {
                continue;
            }
            group_mean[static_cast<std::size_t>(c)] = group_sum[static_cast<std::size_t>(c)] / count;
            const double delta = group_mean[static_cast<std::size_t>(c)] - grand_mean;
            ssb += count * delta * delta;
        }
        double ssw = 0.0;
        for (Eigen::Index i = 0; i < n_samples; ++i) {
            const double delta =
                features.values(i, j) -
                group_mean[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)]) - 1];
            ssw += delta * delta;
        }

        result.ssb(j) = ssb;
        result.ssw(j) = ssw;
        if (ssw == 0.0) {
            // SSB > 0: perfectly discriminative; SSB == 0: globally constant.
            result.f_scores(j) = ssb > 0.0 ? infinity : 0.0;
        } else {
            result.f_scores(j) = (ssb / df_between) / (ssw / df_within);
        }
    }

    double finite_sum = 0.0;
    for (Eigen::Index j = 0; j < n_features; ++j) {
        if (std::isfinite(result.f_scores(j))) {
            finite_sum += result.f_scores(j);
        }
    }
    result.mean_f = finite_sum / static_cast<double>(n_features);
    result.threshold = result.mean_f / divider;
    return result;
}

HiervarSelection select_hiervar(const FScoreVector& fscores,
                                const std::vector<int>& erocket_set) {
    const Eigen::Index n_features = fscores.f_scores.size();
    for (int index : erocket_set) {
        if (index < 0 || index >= n_features) {
            throw ConfigError("stage-1 index " + std::to_string(index) +
                              " outside {0.." + std::to_string(n_features - 1) + "}");
        }
    }

    HiervarSelection selection;
    selection.erocket_set = erocket_set;
    std::sort(selection.erocket_set.begin(), selection.erocket_set.end());
    for (Eigen::Index k = 0; k < n_features; ++k) {
        if (fscores.f_scores(k) > fscores.threshold) {
            selection.fscore_pass.push_back(static_cast<int>(k));
        }
    }
    for (int k : selection.erocket_set) {
        if (fscores.f_scores(k) > fscores.threshold) {
            selection.final_set.push_back(k);
        }
    }
    selection.reduction_ratio =
        1.0 - static_cast<double>(selection.final_set.size()) /
                  static_cast<double>(n_features);
    return selection;
}

FeatureMatrix apply_selection(const FeatureMatrix& features,
                              const std::vector<int>& selection) {
    std::vector<int> sorted = selection;
    std::sort(sorted.begin(), sorted.end());
    for (int index : sorted) {
        if (index < 0 || index >= features.values.cols()) {
            throw ConfigError("selection index " + std::to_string(index) +
                              " outside the feature range");
        }
    }

    FeatureMatrix subset;
    subset.feature_count = static_cast<int>(sorted.size());
    subset.bank_seed = features.bank_seed;
    subset.bank_mode = features.bank_mode;
    subset.values.resize(features.values.rows(),
                         static_cast<Eigen::Index>(sorted.size()));
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        subset.values.col(static_cast<Eigen::Index>(i)) = features.values.col(sorted[i]);
    }
    return subset;
}

}  // namespace hiervar
