#include <CLI11.hpp>
#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <numeric>
#include <string>
#include <vector>

#include "hiervar/anova.hpp"
#include "hiervar/io.hpp"
#include "hiervar/pipeline.hpp"

namespace {

using namespace hiervar;

struct CommonFlags {
    std::string repr = "minirocket";
    std::string selector = "erocket";
    bool hiervar = false;
    double d = 2.0;
    int k = 10000;
    std::uint64_t seed = 0;
    int folds = 5;
    std::vector<double> lambda_grid = {0.001, 0.01, 0.1, 1.0};
    double alpha = 0.0001;
    bool no_class_weight = false;
    bool no_znorm = false;
    double sensitivity = 1.0;
    int threads = 0;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--repr", flags.repr, "Representation: minirocket | raster")
        ->check(CLI::IsMember({"minirocket", "raster"}));
    cmd->add_option("--k", flags.k, "Number of random features (default 10000)");
    cmd->add_option("--seed", flags.seed, "Master seed; fixes every random draw");
    cmd->add_option("--folds", flags.folds, "Cross-validation folds (default 5)");
    cmd->add_option("--lambda-grid", flags.lambda_grid,
                    "Ridge lambda grid (default 0.001,0.01,0.1,1)")
        ->delimiter(',');
    cmd->add_option("--alpha", flags.alpha, "Lasso alpha (default 0.0001)");
    cmd->add_flag("--no-class-weight", flags.no_class_weight,
                  "Disable inverse-frequency class weighting");
    cmd->add_flag("--no-znorm", flags.no_znorm, "Skip per-series z-normalization");
    cmd->add_option("--sensitivity", flags.sensitivity,
                    "KNEEDLE sensitivity (default 1.0)");
    cmd->add_option("--threads", flags.threads, "Cap data-parallel threads (0 = auto)");
}

void add_selector_flags(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--selector", flags.selector, "Stage-1 selector: erocket | lasso | none")
        ->check(CLI::IsMember({"erocket", "lasso", "none"}));
    cmd->add_flag("--hiervar", flags.hiervar, "Intersect stage 1 with the ANOVA filter");
    cmd->add_option("--d", flags.d, "ANOVA divider d, threshold = mean F / d (default 2)");
}

int resolve_threads(int flag_value) {
    if (flag_value > 0) {
        return flag_value;
    }
    // HIERVAR_THREADS is the only environment override; everything else is flags.
    if (const char* env = std::getenv("HIERVAR_THREADS")) {
        return std::atoi(env);
    }
    return 0;
}

PipelineConfig build_config(const CommonFlags& flags) {
    PipelineConfig config;
    config.representation = flags.repr == "minirocket" ? Representation::minirocket_ter
                                                       : Representation::raster_rter;
    config.selector = flags.selector == "erocket" ? Selector::erocket
                      : flags.selector == "lasso" ? Selector::lasso
                                                  : Selector::none;
    config.hiervar = flags.hiervar;
    config.divider = flags.d;
    config.feature_count = flags.k;
    config.seed = flags.seed;
    config.folds = flags.folds;
    config.lambda_grid = flags.lambda_grid;
    config.lasso_alpha = flags.alpha;
    config.class_weighting = !flags.no_class_weight;
    config.znormalize = !flags.no_znorm;
    config.kneedle_sensitivity = flags.sensitivity;
    set_max_threads(resolve_threads(flags.threads));
    return config;
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') {
            std::cout << '\n';
        }
    } else {
        write_text_file(out_path, text);
        std::cerr << "wrote " << out_path << "\n";
    }
}

struct PreparedData {
    TimeSeriesDataset train;
    TimeSeriesDataset test;
    bool has_test = false;
};

PreparedData load_pair(const std::string& train_path, const std::string& test_path) {
    PreparedData data;
    data.train = load_ucr_dataset(train_path, Split::train);
    if (!test_path.empty()) {
        data.test = align_labels(load_ucr_dataset(test_path, Split::test), data.train);
        data.has_test = true;
    }
    return data;
}

/// Shared by fscore-curve and d-sweep: transform, pre-train, stage-1 select.
struct Stage1Result {
    FeatureMatrix train_features;
    std::vector<int> labels;
    std::vector<int> stage1;
    CoefficientRanking ranking;
    KneeResult knee;
    bool ranked = false;
};

Stage1Result run_stage1(const TimeSeriesDataset& train_raw, const PipelineConfig& config) {
    const TimeSeriesDataset train = config.znormalize ? znormalize(train_raw) : train_raw;
    const PoolingMode mode = config.representation == Representation::minirocket_ter
                                 ? PoolingMode::ter
                                 : PoolingMode::rter;
    KernelBank bank = generate_kernel_bank(static_cast<int>(train.series_length()),
                                           config.feature_count, mode,
                                           mix_seed(config.seed, 0));
    bank = mode == PoolingMode::ter
               ? fit_biases(bank, train, mix_seed(config.seed, 1))
               : calibrate_rter_range(bank, train, mix_seed(config.seed, 1));

    Stage1Result result;
    result.train_features = transform(train, bank);
    result.labels = train.labels;
    result.stage1.resize(static_cast<std::size_t>(config.feature_count));
    std::iota(result.stage1.begin(), result.stage1.end(), 0);

    if (config.selector == Selector::erocket) {
        const double lambda = cross_validate_lambda(result.train_features, train.labels,
                                                    config.lambda_grid, config.folds,
                                                    config.class_weighting,
                                                    mix_seed(config.seed, 2));
        const RidgeModel model =
            fit_ridge(result.train_features, train.labels, lambda, config.class_weighting);
        result.ranking = rank_coefficients(model);
        result.knee = detect_knee_ascending(result.ranking.magnitudes,
                                            config.kneedle_sensitivity);
        result.stage1 = select_erocket(result.ranking, result.knee).indices;
        result.ranked = true;
    } else if (config.selector == Selector::lasso) {
        const LassoModel lasso =
            fit_lasso(result.train_features, train.labels, config.lasso_alpha,
                      config.lasso_max_iterations, config.lasso_tolerance);
        result.stage1 = lasso_support(lasso);
    }
    return result;
}

int run_command(const std::string& train_path, const std::string& test_path,
                const CommonFlags& flags, const std::string& out_path,
                const std::string& format, const std::string& bank_out) {
    const PipelineConfig config = build_config(flags);
    const PreparedData data = load_pair(train_path, test_path);
    const RunReport report = run_pipeline(data.train, data.test, config);
    if (!bank_out.empty()) {
        const TimeSeriesDataset train =
            config.znormalize ? znormalize(data.train) : data.train;
        const PoolingMode mode = config.representation == Representation::minirocket_ter
                                     ? PoolingMode::ter
                                     : PoolingMode::rter;
        KernelBank bank = generate_kernel_bank(static_cast<int>(train.series_length()),
                                               config.feature_count, mode,
                                               mix_seed(config.seed, 0));
        bank = mode == PoolingMode::ter
                   ? fit_biases(bank, train, mix_seed(config.seed, 1))
                   : calibrate_rter_range(bank, train, mix_seed(config.seed, 1));
        save_bank(bank, bank_out);
        std::cerr << "wrote " << bank_out << "\n";
    }
    emit(format == "csv" ? report_to_csv(report) : report_to_json(report), out_path);
    return 0;
}

int transform_command(const std::string& train_path, const std::string& test_path,
                      const CommonFlags& flags, const std::string& out_path,
                      const std::string& bank_in, const std::string& bank_out) {
    PipelineConfig config = build_config(flags);
    const PreparedData data = load_pair(train_path, test_path);
    const TimeSeriesDataset train = config.znormalize ? znormalize(data.train) : data.train;

    KernelBank bank;
    if (!bank_in.empty()) {
        bank = load_bank(bank_in);
    } else {
        const PoolingMode mode = config.representation == Representation::minirocket_ter
                                     ? PoolingMode::ter
                                     : PoolingMode::rter;
        bank = generate_kernel_bank(static_cast<int>(train.series_length()),
                                    config.feature_count, mode, mix_seed(config.seed, 0));
        bank = mode == PoolingMode::ter
                   ? fit_biases(bank, train, mix_seed(config.seed, 1))
                   : calibrate_rter_range(bank, train, mix_seed(config.seed, 1));
    }
    if (!bank_out.empty()) {
        save_bank(bank, bank_out);
        std::cerr << "wrote " << bank_out << "\n";
    }

    if (data.has_test) {
        const TimeSeriesDataset test = config.znormalize ? znormalize(data.test) : data.test;
        emit(features_to_csv(transform(test, bank), test.labels), out_path);
    } else {
        emit(features_to_csv(transform(train, bank), train.labels), out_path);
    }
    return 0;
}

int fscore_curve_command(const std::string& train_path, const CommonFlags& flags,
                         const std::string& out_path, const std::string& knee_out) {
    const PipelineConfig config = build_config(flags);
    config.validate();
    const PreparedData data = load_pair(train_path, "");
    const Stage1Result stage1 = run_stage1(data.train, config);
    const FScoreVector scores = f_scores(stage1.train_features, stage1.labels, config.divider);
    if (!knee_out.empty()) {
        if (!stage1.ranked) {
            throw ConfigError("--knee-out needs --selector erocket");
        }
        write_text_file(knee_out, knee_diagnostics_csv(stage1.ranking, stage1.knee));
        std::cerr << "wrote " << knee_out << "\n";
    }
    emit(fscore_curve_csv(scores, stage1.stage1), out_path);
    return 0;
}

int d_sweep_command(const std::string& train_path, const std::vector<double>& d_values,
                    const CommonFlags& flags, const std::string& out_path) {
    if (d_values.empty()) {
        throw ConfigError("--d-values needs at least one value");
    }
    PipelineConfig config = build_config(flags);
    if (config.selector == Selector::none) {
        throw ConfigError("d-sweep needs a stage-1 selector (erocket or lasso)");
    }
    config.validate();
    const PreparedData data = load_pair(train_path, "");
    const Stage1Result stage1 = run_stage1(data.train, config);
    // S and the F-scores are d-independent; only epsilon moves.
    const FScoreVector scores = f_scores(stage1.train_features, stage1.labels, config.divider);

    std::ostringstream out;
    out << "d,epsilon,after_stage1,selected_features\n";
    for (double d : d_values) {
        FScoreVector shifted = scores;
        shifted.divider = d;
        shifted.threshold = scores.mean_f / d;
        const HiervarSelection selection = select_hiervar(shifted, stage1.stage1);
        out << d << ',' << shifted.threshold << ',' << stage1.stage1.size() << ','
            << selection.final_set.size() << '\n';
    }
    emit(out.str(), out_path);
    return 0;
}

int suite_command(const std::vector<std::string>& dataset_specs,
                  const std::vector<std::string>& selectors,
                  const std::vector<std::string>& hiervar_modes, int repeats,
                  const CommonFlags& flags, const std::string& out_path,
                  const std::string& format) {
    std::vector<SuiteDataset> datasets;
    for (const std::string& spec : dataset_specs) {
        // name=TRAIN:TEST
        const std::size_t eq = spec.find('=');
        const std::size_t colon = spec.find(':', eq == std::string::npos ? 0 : eq);
        if (eq == std::string::npos || colon == std::string::npos) {
            throw ConfigError("--datasets expects name=TRAIN_PATH:TEST_PATH, got '" +
                              spec + "'");
        }
        datasets.push_back({spec.substr(0, eq), spec.substr(eq + 1, colon - eq - 1),
                            spec.substr(colon + 1)});
    }

    std::vector<PipelineConfig> configs;
    for (const std::string& selector : selectors) {
        for (const std::string& mode : hiervar_modes) {
            CommonFlags variant = flags;
            variant.selector = selector;
            variant.hiervar = mode == "on";
            if (variant.hiervar && selector == "none") {
                continue;  // invalid combination, skip silently in the cross product
            }
            configs.push_back(build_config(variant));
            configs.back().validate();
        }
    }
    if (configs.empty()) {
        throw ConfigError("--selectors / --hiervar-modes leave no valid combination");
    }

    const SuiteReport suite = run_suite(datasets, configs, repeats);
    emit(format == "csv" ? suite_to_csv(suite) : suite_to_json(suite), out_path);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"HIERVAR: random-kernel time-series features with hierarchical "
                 "(E-ROCKET/LASSO + ANOVA) feature selection"};
    app.require_subcommand(1);

    CommonFlags flags;
    std::string train_path;
    std::string test_path;
    std::string out_path;
    std::string format = "json";
    std::string bank_in;
    std::string bank_out;
    std::vector<std::string> dataset_specs;
    std::vector<std::string> selectors = {"erocket"};
    std::vector<std::string> hiervar_modes = {"off", "on"};
    std::vector<double> d_values;
    int repeats = 4;

    CLI::App* run = app.add_subcommand("run", "Run one pipeline on a train/test pair");
    run->add_option("--train", train_path, "Train split (UCR tsv/csv)")->required();
    run->add_option("--test", test_path, "Test split (UCR tsv/csv)")->required();
    add_selector_flags(run, flags);
    add_common_flags(run, flags);
    run->add_option("--out", out_path, "Write the report here instead of stdout");
    run->add_option("--format", format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
    run->add_option("--save-bank", bank_out, "Also save the fitted kernel bank (JSON)");

    CLI::App* transform_cmd =
        app.add_subcommand("transform", "Emit pooled features for a dataset as CSV");
    transform_cmd->add_option("--train", train_path, "Train split (fits biases)")->required();
    transform_cmd->add_option("--test", test_path,
                              "Optional test split; emitted instead of train");
    add_common_flags(transform_cmd, flags);
    transform_cmd->add_option("--out", out_path, "Output path (default stdout)");
    transform_cmd->add_option("--load-bank", bank_in, "Reuse a saved kernel bank");
    transform_cmd->add_option("--save-bank", bank_out, "Save the kernel bank (JSON)");

    CLI::App* suite = app.add_subcommand("suite", "Run a dataset x config benchmark grid");
    suite->add_option("--datasets", dataset_specs, "name=TRAIN_PATH:TEST_PATH ...")->required();
    suite->add_option("--selectors", selectors, "Stage-1 selectors to cross (default erocket)");
    suite->add_option("--hiervar-modes", hiervar_modes,
                      "off / on values to cross (default both)")
        ->check(CLI::IsMember({"off", "on"}));
    suite->add_option("--repeats", repeats, "Seeds seed+0..repeats-1 per cell (default 4)");
    add_selector_flags(suite, flags);
    add_common_flags(suite, flags);
    suite->add_option("--out", out_path, "Write the suite report here instead of stdout");
    suite->add_option("--format", format, "json | csv")->check(CLI::IsMember({"json", "csv"}));

    CLI::App* fscore = app.add_subcommand(
        "fscore-curve", "Emit the descending F-score curve with stage-1 membership flags");
    fscore->add_option("--train", train_path, "Train split")->required();
    add_selector_flags(fscore, flags);
    add_common_flags(fscore, flags);
    fscore->add_option("--out", out_path, "Output path (default stdout)");
    std::string knee_out;
    fscore->add_option("--knee-out", knee_out,
                       "Also write the sorted-magnitude / KNEEDLE diagnostics CSV");

    CLI::App* dsweep = app.add_subcommand(
        "d-sweep", "Selected-feature count as the divider d varies");
    dsweep->add_option("--train", train_path, "Train split")->required();
    dsweep->add_option("--d-values", d_values, "Divider values, e.g. 0.5 1 2 4 8")
        ->required()
        ->delimiter(',');
    add_selector_flags(dsweep, flags);
    add_common_flags(dsweep, flags);
    dsweep->add_option("--out", out_path, "Output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        // Prints help/usage on the error stream; collapse CLI11's code space
        // onto the documented contract (0 = help, 1 = usage error).
        const int code = app.exit(err);
        return code == 0 ? 0 : 1;
    }

    try {
        if (run->parsed()) {
            return run_command(train_path, test_path, flags, out_path, format, bank_out);
        }
        if (transform_cmd->parsed()) {
            return transform_command(train_path, test_path, flags, out_path, bank_in,
                                     bank_out);
        }
        if (suite->parsed()) {
            return suite_command(dataset_specs, selectors, hiervar_modes, repeats, flags,
                                 out_path, format);
        }
        if (fscore->parsed()) {
            return fscore_curve_command(train_path, flags, out_path, knee_out);
        }
        if (dsweep->parsed()) {
            return d_sweep_command(train_path, d_values, flags, out_path);
        }
    } catch (const CLI::Error& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    } catch (const hiervar::ConfigError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    } catch (const hiervar::Error& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 2;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 2;
    }
    return 1;
}
