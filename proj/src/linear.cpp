#include "hiervar/linear.hpp"

#include <Eigen/Cholesky>
#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <numeric>
#include <set>

namespace hiervar {

namespace {

int max_label(const std::vector<int>& labels) {
    int top = 0;
    for (int label : labels) {
        if (label < 1) {
            throw LabelError("labels must lie in {1..C}");
        }
        top = std::max(top, label);
    }
    return top;
}

std::map<int, int> class_counts(const std::vector<int>& labels) {
    std::map<int, int> counts;
    for (int label : labels) {
        ++counts[label];
    }
    return counts;
}

Eigen::MatrixXd one_hot(const std::vector<int>& labels, int classes) {
    Eigen::MatrixXd targets =
        Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(labels.size()), classes);
    for (std::size_t n = 0; n < labels.size(); ++n) {
        targets(static_cast<Eigen::Index>(n), labels[n] - 1) = 1.0;
    }
    return targets;
}

FeatureMatrix subset_rows(const FeatureMatrix& features, const std::vector<int>& rows) {
    FeatureMatrix subset;
    subset.feature_count = features.feature_count;
    subset.bank_seed = features.bank_seed;
    subset.bank_mode = features.bank_mode;
    subset.values.resize(static_cast<Eigen::Index>(rows.size()), features.values.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        subset.values.row(static_cast<Eigen::Index>(i)) = features.values.row(rows[i]);
    }
    return subset;
}

}  // namespace

RidgeModel fit_ridge(const FeatureMatrix& features, const std::vector<int>& labels,
                     double lambda, bool class_weighting, RidgeSolvePath path) {
    const Eigen::Index n_samples = features.values.rows();
    const Eigen::Index n_features = features.values.cols();
    if (n_samples < 2) {
        throw ConfigError("ridge fit requires at least two samples");
    }
    if (static_cast<std::size_t>(n_samples) != labels.size()) {
        throw ShapeError("feature rows and label count differ");
    }
    if (lambda < 0.0) {
        throw ConfigError("lambda must be nonnegative");
    }
    if (n_features == 0) {
        throw ConfigError("ridge fit on a 0-column feature matrix (empty selection?)");
    }

    const auto counts = class_counts(labels);
    if (counts.size() < 2) {
        throw LabelError("ridge fit requires at least two classes");
    }
    const int classes = max_label(labels);
    const auto present = static_cast<double>(counts.size());

    RidgeModel model;
    model.lambda = lambda;
    model.classes = classes;
    model.class_weights.assign(static_cast<std::size_t>(classes), 0.0);
    Eigen::VectorXd weights(n_samples);
    for (Eigen::Index n = 0; n < n_samples; ++n) {
        const int label = labels[static_cast<std::size_t>(n)];
        const double weight =
            class_weighting
                ? static_cast<double>(n_samples) / (present * counts.at(label))
                : 1.0;
        weights(n) = weight;
        model.class_weights[static_cast<std::size_t>(label) - 1] = weight;
    }

    // Weighted centering keeps Zc' D 1 = 0, which makes the normal-equation
    // residual exact and target centering immaterial.
    model.feature_means = (features.values.transpose() * weights) / weights.sum();
    const Eigen::MatrixXd centered =
        features.values.rowwise() - model.feature_means.transpose();
    const Eigen::MatrixXd targets = one_hot(labels, classes);

    const Eigen::VectorXd sqrt_weights = weights.array().sqrt();
    const Eigen::MatrixXd scaled = sqrt_weights.asDiagonal() * centered;
    const Eigen::MatrixXd scaled_targets = sqrt_weights.asDiagonal() * targets;

    const bool use_dual = path == RidgeSolvePath::automatic ? n_samples < n_features
                                                            : path == RidgeSolvePath::dual;
    if (use_dual) {
        // Dual: W = A' (A A' + lambda I)^-1 B with A = sqrt(D) Zc.
        Eigen::MatrixXd gram = scaled * scaled.transpose();
        if (lambda > 0.0) {
            gram.diagonal().array() += lambda;
            model.coefficients = scaled.transpose() * gram.llt().solve(scaled_targets);
        } else {
            Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(gram);
            model.pseudo_inverse = cod.rank() < gram.rows();
            model.coefficients = scaled.transpose() * cod.solve(scaled_targets);
        }
    } else {
        Eigen::MatrixXd normal = scaled.transpose() * scaled;
        const Eigen::MatrixXd rhs = scaled.transpose() * scaled_targets;
        if (lambda > 0.0) {
            normal.diagonal().array() += lambda;
            model.coefficients = normal.llt().solve(rhs);
        } else {
            Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(normal);
            model.pseudo_inverse = cod.rank() < normal.rows();
            model.coefficients = cod.solve(rhs);
        }
    }
    return model;
}

std::vector<int> predict(const RidgeModel& model, const FeatureMatrix& features) {
    if (features.values.cols() != model.coefficients.rows()) {
        throw ShapeError("feature count does not match the model (" +
                         std::to_string(features.values.cols()) + " vs " +
                         std::to_string(model.coefficients.rows()) + ")");
    }
    const Eigen::MatrixXd scores =
        (features.values.rowwise() - model.feature_means.transpose()) *
        model.coefficients;
    std::vector<int> predictions(static_cast<std::size_t>(scores.rows()));
    for (Eigen::Index n = 0; n < scores.rows(); ++n) {
        int best = 0;
        for (int c = 1; c < scores.cols(); ++c) {
            if (scores(n, c) > scores(n, best)) {
                best = c;
            }
        }
        predictions[static_cast<std::size_t>(n)] = best + 1;
    }
    return predictions;
}

namespace {

struct FoldPlan {
    std::vector<std::vector<int>> validation;  // per fold, row indices
    std::vector<int> always_train;             // singleton-class rows
};

FoldPlan plan_folds(const std::vector<int>& labels, int folds, RandomStream& rng) {
    const auto counts = class_counts(labels);
    std::map<int, std::vector<int>> by_class;
    for (std::size_t n = 0; n < labels.size(); ++n) {
        by_class[labels[n]].push_back(static_cast<int>(n));
    }

    int splittable_min = 0;
    for (const auto& [label, count] : counts) {
        if (count >= 2) {
            splittable_min = splittable_min == 0 ? count : std::min(splittable_min, count);
        }
    }

    FoldPlan plan;
    if (splittable_min >= 2) {
        const int effective = std::max(2, std::min(folds, splittable_min));
        plan.validation.resize(static_cast<std::size_t>(effective));
        for (auto& [label, members] : by_class) {
            if (members.size() < 2) {
                plan.always_train.push_back(members.front());
                continue;
            }
            rng.shuffle(members);
            for (std::size_t i = 0; i < members.size(); ++i) {
                plan.validation[i % static_cast<std::size_t>(effective)].push_back(members[i]);
            }
        }
        return plan;
    }

    // Stratification impossible: every class is a singleton.
    const auto n_samples = static_cast<int>(labels.size());
    if (n_samples <= 50) {
        plan.validation.resize(static_cast<std::size_t>(n_samples));
        for (int n = 0; n < n_samples; ++n) {
            plan.validation[static_cast<std::size_t>(n)].push_back(n);
        }
    } else {
        std::vector<int> order(labels.size());
        std::iota(order.begin(), order.end(), 0);
        rng.shuffle(order);
        const int effective = std::max(2, folds);
        plan.validation.resize(static_cast<std::size_t>(effective));
        for (std::size_t i = 0; i < order.size(); ++i) {
            plan.validation[i % static_cast<std::size_t>(effective)].push_back(order[i]);
        }
    }
    return plan;
}

}  // namespace

double cross_validate_lambda(const FeatureMatrix& features, const std::vector<int>& labels,
                             const std::vector<double>& grid, int folds,
                             bool class_weighting, std::uint64_t seed) {
    if (grid.empty()) {
        throw ConfigError("lambda grid is empty");
    }
    if (grid.size() == 1) {
        return grid.front();
    }
    if (folds < 2) {
        throw ConfigError("cross-validation requires at least 2 folds");
    }

    RandomStream rng(seed);
    const FoldPlan plan = plan_folds(labels, folds, rng);

    std::vector<std::vector<int>> train_rows(plan.validation.size());
    std::vector<std::vector<int>> train_labels(plan.validation.size());
    for (std::size_t v = 0; v < plan.validation.size(); ++v) {
        std::vector<bool> held(labels.size(), false);
        for (int row : plan.validation[v]) {
            held[static_cast<std::size_t>(row)] = true;
        }
        for (std::size_t n = 0; n < labels.size(); ++n) {
            if (!held[n]) {
                train_rows[v].push_back(static_cast<int>(n));
                train_labels[v].push_back(labels[n]);
            }
        }
    }

    double best_lambda = grid.front();
    double best_accuracy = -1.0;
    for (double lambda : grid) {
        double accuracy_sum = 0.0;
        int scored_folds = 0;
        for (std::size_t v = 0; v < plan.validation.size(); ++v) {
            std::set<int> distinct(train_labels[v].begin(), train_labels[v].end());
            if (distinct.size() < 2 || plan.validation[v].empty()) {
                continue;  // unfittable or empty fold
            }
            const FeatureMatrix fold_train = subset_rows(features, train_rows[v]);
            const RidgeModel model =
                fit_ridge(fold_train, train_labels[v], lambda, class_weighting);

            const FeatureMatrix fold_val = subset_rows(features, plan.validation[v]);
            const std::vector<int> predicted = predict(model, fold_val);
            int hits = 0;
            for (std::size_t i = 0; i < predicted.size(); ++i) {
                hits += predicted[i] ==
                                labels[static_cast<std::size_t>(plan.validation[v][i])]
                            ? 1
                            : 0;
            }
            accuracy_sum += static_cast<double>(hits) /
                            static_cast<double>(plan.validation[v].size());
            ++scored_folds;
        }
        const double mean_accuracy =
            scored_folds > 0 ? accuracy_sum / scored_folds : 0.0;
        if (mean_accuracy > best_accuracy ||
            (mean_accuracy == best_accuracy && lambda > best_lambda)) {
            best_accuracy = mean_accuracy;
            best_lambda = lambda;
        }
    }
    return best_lambda;
}

LassoModel fit_lasso(const FeatureMatrix& features, const std::vector<int>& labels,
                     double alpha, int max_iterations, double tolerance) {
    if (alpha <= 0.0) {
        throw ConfigError("lasso alpha must be positive");
    }
    const Eigen::Index n_samples = features.values.rows();
    const Eigen::Index n_features = features.values.cols();
    if (static_cast<std::size_t>(n_samples) != labels.size()) {
        throw ShapeError("feature rows and label count differ");
    }
    if (class_counts(labels).size() < 2) {
        throw LabelError("lasso fit requires at least two classes");
    }
    const int classes = max_label(labels);
    const auto n = static_cast<double>(n_samples);

    LassoModel model;
    model.alpha = alpha;
    model.max_iterations = max_iterations;
    model.tolerance = tolerance;
    model.converged = true;
    model.feature_means = features.values.colwise().mean();
    model.coefficients = Eigen::MatrixXd::Zero(n_features, classes);

    const Eigen::MatrixXd centered =
        features.values.rowwise() - model.feature_means.transpose();
    Eigen::VectorXd column_scale(n_features);  // (1/N) sum zc_j^2
    for (Eigen::Index j = 0; j < n_features; ++j) {
        column_scale(j) = centered.col(j).squaredNorm() / n;
    }

    Eigen::MatrixXd targets = one_hot(labels, classes);
    targets.rowwise() -= targets.colwise().mean();

    for (int c = 0; c < classes; ++c) {
        Eigen::VectorXd beta = Eigen::VectorXd::Zero(n_features);
        Eigen::VectorXd residual = targets.col(c);
        int sweep = 0;
        for (; sweep < max_iterations; ++sweep) {
            double max_change = 0.0;
            for (Eigen::Index j = 0; j < n_features; ++j) {
                if (column_scale(j) == 0.0) {
                    continue;
                }
                const double old = beta(j);
                const double rho = centered.col(j).dot(residual) / n + column_scale(j) * old;
                const double shrunk = std::abs(rho) <= alpha
                                          ? 0.0
                                          : (rho > 0.0 ? rho - alpha : rho + alpha);
                const double updated = shrunk / column_scale(j);
                if (updated != old) {
                    residual -= centered.col(j) * (updated - old);
                    beta(j) = updated;
                    max_change = std::max(max_change, std::abs(updated - old));
                }
            }
            if (max_change < tolerance) {
                ++sweep;
                break;
            }
        }
        if (sweep >= max_iterations) {
            model.converged = false;
        }
        model.iterations = std::max(model.iterations, sweep);
        model.coefficients.col(c) = beta;
    }
    return model;
}

std::vector<int> lasso_support(const LassoModel& model) {
    std::vector<int> support;
    for (Eigen::Index j = 0; j < model.coefficients.rows(); ++j) {
        if ((model.coefficients.row(j).array() != 0.0).any()) {
            support.push_back(static_cast<int>(j));
        }
    }
    return support;
}

}  // namespace hiervar
