#include "hiervar/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace hiervar {

void PipelineConfig::validate() const {
    if (hiervar && selector == Selector::none) {
        throw ConfigError("hiervar requires a stage-1 selector (erocket or lasso)");
    }
    if (feature_count < kKernelPatternCount) {
        throw ConfigError("feature count must be at least " +
                          std::to_string(kKernelPatternCount));
    }
    if (divider <= 0.0) {
        throw ConfigError("divider d must be positive");
    }
    if (lambda_grid.empty()) {
        throw ConfigError("lambda grid is empty");
    }
    if (lasso_alpha <= 0.0) {
        throw ConfigError("lasso alpha must be positive");
    }
    if (folds < 2) {
        throw ConfigError("folds must be at least 2");
    }
}

double evaluate_accuracy(const std::vector<int>& predicted, const std::vector<int>& actual) {
    if (predicted.size() != actual.size()) {
        throw ShapeError("prediction and label vectors differ in length");
    }
    if (predicted.empty()) {
        throw ConfigError("accuracy of empty vectors");
    }
    std::size_t hits = 0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        hits += predicted[i] == actual[i] ? 1 : 0;
    }
    return static_cast<double>(hits) / static_cast<double>(predicted.size());
}

RunReport run_pipeline(const TimeSeriesDataset& train, const TimeSeriesDataset& test,
                       const PipelineConfig& config) {
    config.validate();
    if (train.series_length() != test.series_length()) {
        throw ShapeError("train/test series lengths differ (" +
                         std::to_string(train.series_length()) + " vs " +
                         std::to_string(test.series_length()) + ")");
    }
    for (int label : test.labels) {
        if (label > train.class_count) {
            throw LabelError("test label " + std::to_string(label) +
                             " outside the train label map; align_labels first");
        }
    }

    RunReport report;
    report.dataset_name = train.name;
    report.config = config;
    report.feature_count = config.feature_count;

    const TimeSeriesDataset train_norm = config.znormalize ? znormalize(train) : train;
    const TimeSeriesDataset test_norm = config.znormalize ? znormalize(test) : test;

    // Stage seeds: bank, thresholds, pre-CV, post-CV all derive from one seed.
    const std::uint64_t bank_seed = mix_seed(config.seed, 0);
    const std::uint64_t bias_seed = mix_seed(config.seed, 1);
    const std::uint64_t cv_pre_seed = mix_seed(config.seed, 2);
    const std::uint64_t cv_post_seed = mix_seed(config.seed, 3);

    Stopwatch transform_clock;
    const PoolingMode mode = config.representation == Representation::minirocket_ter
                                 ? PoolingMode::ter
                                 : PoolingMode::rter;
    KernelBank bank = generate_kernel_bank(static_cast<int>(train_norm.series_length()),
                                           config.feature_count, mode, bank_seed);
    bank = mode == PoolingMode::ter ? fit_biases(bank, train_norm, bias_seed)
                                    : calibrate_rter_range(bank, train_norm, bias_seed);
    const FeatureMatrix train_features = transform(train_norm, bank);
    report.wall_times.transform = transform_clock.elapsed();

    Stopwatch pretrain_clock;
    report.pretrain_lambda =
        cross_validate_lambda(train_features, train_norm.labels, config.lambda_grid,
                              config.folds, config.class_weighting, cv_pre_seed);
    const RidgeModel pretrain_model = fit_ridge(train_features, train_norm.labels,
                                                report.pretrain_lambda,
                                                config.class_weighting);
    report.wall_times.pretrain_fit = pretrain_clock.elapsed();

    Stopwatch selection_clock;
    std::vector<int> stage1(static_cast<std::size_t>(config.feature_count));
    std::iota(stage1.begin(), stage1.end(), 0);
    if (config.selector == Selector::erocket) {
        const CoefficientRanking ranking = rank_coefficients(pretrain_model);
        const KneeResult knee =
            detect_knee_ascending(ranking.magnitudes, config.kneedle_sensitivity);
        report.knee_missing = !knee.knee_index.has_value();
        stage1 = select_erocket(ranking, knee).indices;
    } else if (config.selector == Selector::lasso) {
        const LassoModel lasso =
            fit_lasso(train_features, train_norm.labels, config.lasso_alpha,
                      config.lasso_max_iterations, config.lasso_tolerance);
        report.lasso_converged = lasso.converged;
        stage1 = lasso_support(lasso);
    }
    report.after_stage1 = static_cast<int>(stage1.size());

    std::vector<int> final_set = stage1;
    if (config.hiervar) {
        const FScoreVector scores =
            f_scores(train_features, train_norm.labels, config.divider);
        final_set = select_hiervar(scores, stage1).final_set;
    }
    if (final_set.empty()) {
        report.empty_selection_fallback = true;
        final_set = stage1;
    }
    report.after_hiervar = static_cast<int>(final_set.size());
    report.reduction_percent =
        100.0 * (1.0 - static_cast<double>(final_set.size()) / config.feature_count);
    report.wall_times.selection = selection_clock.elapsed();

    Stopwatch posttrain_clock;
    RidgeModel selected_model;
    if (config.selector == Selector::none) {
        // Identity pipeline: keep the pre-training fit so accuracies match exactly.
        selected_model = pretrain_model;
        report.posttrain_lambda = report.pretrain_lambda;
    } else {
        const FeatureMatrix selected_train = apply_selection(train_features, final_set);
        report.posttrain_lambda =
            cross_validate_lambda(selected_train, train_norm.labels, config.lambda_grid,
                                  config.folds, config.class_weighting, cv_post_seed);
        selected_model = fit_ridge(selected_train, train_norm.labels,
                                   report.posttrain_lambda, config.class_weighting);
    }
    report.wall_times.posttrain_fit = posttrain_clock.elapsed();

    Stopwatch test_transform_clock;
    const FeatureMatrix test_features = transform(test_norm, bank);
    report.wall_times.test_transform = test_transform_clock.elapsed();

    Stopwatch baseline_clock;
    const std::vector<int> baseline_predictions = predict(pretrain_model, test_features);
    report.wall_times.baseline_predict = baseline_clock.elapsed();
    report.baseline_accuracy = evaluate_accuracy(baseline_predictions, test_norm.labels);

    Stopwatch predict_clock;
    std::vector<int> selected_predictions;
    if (config.selector == Selector::none) {
        selected_predictions = predict(selected_model, test_features);
    } else {
        const FeatureMatrix selected_test = apply_selection(test_features, final_set);
        selected_predictions = predict(selected_model, selected_test);
    }
    report.wall_times.test_predict = predict_clock.elapsed();
    report.selected_accuracy = evaluate_accuracy(selected_predictions, test_norm.labels);

    return report;
}

std::string to_string(Representation r) {
    return r == Representation::minirocket_ter ? "minirocket" : "raster";
}

std::string to_string(Selector s) {
    switch (s) {
        case Selector::none: return "none";
        case Selector::erocket: return "erocket";
        default: return "lasso";
    }
}

std::string config_label(const PipelineConfig& config) {
    std::ostringstream label;
    label << to_string(config.representation) << "+" << to_string(config.selector);
    if (config.hiervar) {
        label << "+hiervar(d=" << config.divider << ")";
    }
    return label.str();
}

SuiteReport run_suite(const std::vector<SuiteDataset>& datasets,
                      const std::vector<PipelineConfig>& configs, int repeats) {
    if (datasets.empty() || configs.empty()) {
        throw ConfigError("suite needs at least one dataset and one config");
    }
    if (repeats < 1) {
        throw ConfigError("repeats must be at least 1");
    }

    SuiteReport suite;
    for (const SuiteDataset& entry : datasets) {
        TimeSeriesDataset train;
        TimeSeriesDataset test;
        bool loaded = false;
        std::string load_error;
        try {
            train = load_ucr_dataset(entry.train_path, Split::train);
            train.name = entry.name;
            test = align_labels(load_ucr_dataset(entry.test_path, Split::test), train);
            test.name = entry.name;
            loaded = true;
        } catch (const Error& err) {
            load_error = err.what();
        }

        for (const PipelineConfig& base_config : configs) {
            for (int repeat = 0; repeat < repeats; ++repeat) {
                SuiteRow row;
                row.dataset = entry.name;
                row.config_label = config_label(base_config);
                row.repeat = repeat;
                row.seed = base_config.seed + static_cast<std::uint64_t>(repeat);
                if (!loaded) {
                    row.failed = true;
                    row.error = load_error;
                    suite.rows.push_back(std::move(row));
                    continue;
                }
                PipelineConfig config = base_config;
                config.seed = row.seed;
                try {
                    row.report = run_pipeline(train, test, config);
                } catch (const Error& err) {
                    row.failed = true;
                    row.error = err.what();
                }
                suite.rows.push_back(std::move(row));
            }
        }
    }

    // Per (dataset, config) means, then an equal-weight mean across datasets.
    for (const SuiteDataset& entry : datasets) {
        for (const PipelineConfig& config : configs) {
            SuiteAggregate aggregate;
            aggregate.dataset = entry.name;
            aggregate.config_label = config_label(config);
            for (const SuiteRow& row : suite.rows) {
                if (row.failed || row.dataset != entry.name ||
                    row.config_label != aggregate.config_label) {
                    continue;
                }
                ++aggregate.runs;
                aggregate.mean_baseline_accuracy += row.report.baseline_accuracy;
                aggregate.mean_selected_accuracy += row.report.selected_accuracy;
                aggregate.mean_after_stage1 += row.report.after_stage1;
                aggregate.mean_after_hiervar += row.report.after_hiervar;
                aggregate.mean_reduction_percent += row.report.reduction_percent;
            }
            if (aggregate.runs > 0) {
                aggregate.mean_baseline_accuracy /= aggregate.runs;
                aggregate.mean_selected_accuracy /= aggregate.runs;
                aggregate.mean_after_stage1 /= aggregate.runs;
                aggregate.mean_after_hiervar /= aggregate.runs;
                aggregate.mean_reduction_percent /= aggregate.runs;
                suite.aggregates.push_back(aggregate);
            }
        }
    }
    for (const PipelineConfig& config : configs) {
        SuiteAggregate overall;
        overall.dataset = "ALL";
        overall.config_label = config_label(config);
        int dataset_count = 0;
        for (const SuiteAggregate& aggregate : suite.aggregates) {
            if (aggregate.dataset == "ALL" ||
                aggregate.config_label != overall.config_label) {
                continue;
            }
            ++dataset_count;
            overall.runs += aggregate.runs;
            overall.mean_baseline_accuracy += aggregate.mean_baseline_accuracy;
            overall.mean_selected_accuracy += aggregate.mean_selected_accuracy;
            overall.mean_after_stage1 += aggregate.mean_after_stage1;
            overall.mean_after_hiervar += aggregate.mean_after_hiervar;
            overall.mean_reduction_percent += aggregate.mean_reduction_percent;
        }
        if (dataset_count > 0) {
            overall.mean_baseline_accuracy /= dataset_count;
            overall.mean_selected_accuracy /= dataset_count;
            overall.mean_after_stage1 /= dataset_count;
            overall.mean_after_hiervar /= dataset_count;
            overall.mean_reduction_percent /= dataset_count;
            suite.aggregates.push_back(overall);
        }
    }
    return suite;
}

}  // namespace hiervar
