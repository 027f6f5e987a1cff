#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hiervar/anova.hpp"
#include "hiervar/dataset.hpp"
#include "hiervar/kernels.hpp"
#include "hiervar/knee.hpp"
#include "hiervar/linear.hpp"

namespace hiervar {

enum class Representation { minirocket_ter, raster_rter };
enum class Selector { none, erocket, lasso };

struct PipelineConfig {
    Representation representation = Representation::minirocket_ter;
    int feature_count = 10000;  // K
    Selector selector = Selector::erocket;
    bool hiervar = false;
    double divider = 2.0;  // d
    std::vector<double> lambda_grid = {0.001, 0.01, 0.1, 1.0};
    double lasso_alpha = 0.0001;
    int lasso_max_iterations = 10000;
    double lasso_tolerance = 1e-5;
    bool class_weighting = true;
    bool znormalize = true;
    double kneedle_sensitivity = 1.0;
    std::uint64_t seed = 0;
    int folds = 5;

    void validate() const;
};

struct StageTimes {
    double transform = 0.0;
    double pretrain_fit = 0.0;
    double selection = 0.0;
    double posttrain_fit = 0.0;
    double test_transform = 0.0;
    double test_predict = 0.0;
    double baseline_predict = 0.0;
};

struct RunReport {
    std::string dataset_name;
    PipelineConfig config;
    double baseline_accuracy = 0.0;
    double selected_accuracy = 0.0;
    int feature_count = 0;      // K
    int after_stage1 = 0;
    int after_hiervar = 0;      // == after_stage1 when hiervar is off
    double reduction_percent = 0.0;
    StageTimes wall_times;
    double pretrain_lambda = 0.0;
    double posttrain_lambda = 0.0;
    bool knee_missing = false;
    bool empty_selection_fallback = false;
    bool lasso_converged = true;
};

/// Pre-train on all K features, select (E-ROCKET / LASSO, optionally
/// intersected with the ANOVA filter), re-fit on the selected columns, and
/// score both models on the test split. All randomness derives from
/// config.seed; everything fitted is a function of the train split only.
RunReport run_pipeline(const TimeSeriesDataset& train, const TimeSeriesDataset& test,
                       const PipelineConfig& config);

/// Exact-match fraction.
double evaluate_accuracy(const std::vector<int>& predicted,
                         const std::vector<int>& actual);

struct SuiteDataset {
    std::string name;
    std::string train_path;
    std::string test_path;
};

struct SuiteRow {
    std::string dataset;
    std::string config_label;
    int repeat = 0;
    std::uint64_t seed = 0;
    bool failed = false;
    std::string error;
    RunReport report;
};

struct SuiteAggregate {
    std::string dataset;  // "ALL" for the cross-dataset mean
    std::string config_label;
    int runs = 0;
    double mean_baseline_accuracy = 0.0;
    double mean_selected_accuracy = 0.0;
    double mean_after_stage1 = 0.0;
    double mean_after_hiervar = 0.0;
    double mean_reduction_percent = 0.0;
};

struct SuiteReport {
    std::vector<SuiteRow> rows;
    std::vector<SuiteAggregate> aggregates;
};

/// Every (dataset, config) pair repeated with seeds seed+0..repeats-1;
/// failing datasets are recorded and skipped. Aggregates are per
/// (dataset, config) plus an equal-weight cross-dataset mean per config.
SuiteReport run_suite(const std::vector<SuiteDataset>& datasets,
                      const std::vector<PipelineConfig>& configs, int repeats = 4);

std::string to_string(Representation r);
std::string to_string(Selector s);
std::string config_label(const PipelineConfig& config);

}  // namespace hiervar
