#include "hiervar/knee.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>

namespace hiervar {

CoefficientRanking rank_coefficients(const RidgeModel& model, Aggregation aggregation) {
    const Eigen::Index n_features = model.coefficients.rows();
    Eigen::VectorXd scores(n_features);
    if (model.coefficients.cols() == 2) {
        // Centered one-hot columns are exact negatives; one column carries
        // the full binary signal.
        scores = model.coefficients.col(0).cwiseAbs();
    } else if (aggregation == Aggregation::l2_norm) {
        scores = model.coefficients.rowwise().norm();
    } else {
        scores = model.coefficients.cwiseAbs().rowwise().maxCoeff();
    }

    CoefficientRanking ranking;
    ranking.aggregation = aggregation;
    ranking.permutation.resize(static_cast<std::size_t>(n_features));
    std::iota(ranking.permutation.begin(), ranking.permutation.end(), 0);
    std::stable_sort(ranking.permutation.begin(), ranking.permutation.end(),
                     [&scores](int a, int b) { return scores(a) < scores(b); });
    ranking.magnitudes.resize(n_features);
    for (Eigen::Index i = 0; i < n_features; ++i) {
        ranking.magnitudes(i) = scores(ranking.permutation[static_cast<std::size_t>(i)]);
    }
    return ranking;
}

KneeResult kneedle_detect(const std::vector<double>& curve, double sensitivity) {
    const std::size_t n = curve.size();
    if (n < 3) {
        throw ConfigError("kneedle needs at least 3 points");
    }
    for (double value : curve) {
        if (!std::isfinite(value)) {
            throw ConfigError("kneedle curve contains non-finite values");
        }
    }

    KneeResult result;
    result.sensitivity = sensitivity;
    result.normalized_difference_curve.assign(n, 0.0);

    const auto [min_it, max_it] = std::minmax_element(curve.begin(), curve.end());
    const double low = *min_it;
    const double span = *max_it - low;
    if (span == 0.0) {
        return result;  // constant curve, no knee
    }

    std::vector<double>& difference = result.normalized_difference_curve;
    const double x_step = 1.0 / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        const double y_norm = (curve[i] - low) / span;
        difference[i] = y_norm - static_cast<double>(i) * x_step;
    }

    std::vector<std::size_t> candidates;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (difference[i] > difference[i - 1] && difference[i] >= difference[i + 1]) {
            candidates.push_back(i);
        }
    }

    for (std::size_t c = 0; c < candidates.size(); ++c) {
        const std::size_t peak = candidates[c];
        const double threshold = difference[peak] - sensitivity * x_step;
        const std::size_t stop = c + 1 < candidates.size() ? candidates[c + 1] : n;
        for (std::size_t j = peak + 1; j < stop; ++j) {
            if (difference[j] < threshold) {
                result.knee_index = peak;
                return result;
            }
        }
    }
    return result;
}

KneeResult detect_knee_ascending(const Eigen::VectorXd& ascending_curve,
                                 double sensitivity) {
    const auto n = static_cast<std::size_t>(ascending_curve.size());
    if (n < 3) {
        throw ConfigError("knee detection needs at least 3 points");
    }
    // 180-degree rotation: an ascending convex curve becomes ascending
    // concave, which is the orientation the core handles.
    const double top = ascending_curve(static_cast<Eigen::Index>(n - 1));
    const double bottom = ascending_curve(0);
    std::vector<double> rotated(n);
    for (std::size_t i = 0; i < n; ++i) {
        rotated[i] = top + bottom - ascending_curve(static_cast<Eigen::Index>(n - 1 - i));
    }

    KneeResult rotated_result = kneedle_detect(rotated, sensitivity);
    KneeResult result;
    result.sensitivity = sensitivity;
    // Report diagnostics in ascending-curve order.
    result.normalized_difference_curve.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        result.normalized_difference_curve[i] =
            rotated_result.normalized_difference_curve[n - 1 - i];
    }
    if (rotated_result.knee_index) {
        result.knee_index = n - 1 - *rotated_result.knee_index;
    }
    return result;
}

ErocketSelection select_erocket(const CoefficientRanking& ranking, const KneeResult& knee) {
    const auto n = static_cast<std::size_t>(ranking.magnitudes.size());
    ErocketSelection selection;
    if (!knee.knee_index) {
        selection.warned_no_knee = true;
        selection.indices.resize(n);
        std::iota(selection.indices.begin(), selection.indices.end(), 0);
        return selection;
    }
    for (std::size_t i = *knee.knee_index + 1; i < n; ++i) {
        selection.indices.push_back(ranking.permutation[i]);
    }
    std::sort(selection.indices.begin(), selection.indices.end());
    return selection;
}

}  // namespace hiervar
