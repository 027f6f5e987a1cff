#include "hiervar/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

namespace hiervar {

namespace {

using nlohmann::json;

constexpr int kBankVersion = 1;
constexpr int kModelVersion = 1;

json vector_to_json(const Eigen::VectorXd& values) {
    json array = json::array();
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        array.push_back(values(i));
    }
    return array;
}

Eigen::VectorXd vector_from_json(const json& array) {
    Eigen::VectorXd values(array.size());
    for (std::size_t i = 0; i < array.size(); ++i) {
        values(static_cast<Eigen::Index>(i)) = array[i].get<double>();
    }
    return values;
}

json matrix_to_json(const Eigen::MatrixXd& values) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < values.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < values.cols(); ++c) {
            row.push_back(values(r, c));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXd matrix_from_json(const json& rows) {
    if (rows.empty()) {
        return {};
    }
    Eigen::MatrixXd values(rows.size(), rows[0].size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < rows[r].size(); ++c) {
            values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                rows[r][c].get<double>();
        }
    }
    return values;
}

json parse(const std::string& text, const std::string& expected_format) {
    json parsed = json::parse(text, nullptr, false);
    if (parsed.is_discarded()) {
        throw FormatError("invalid JSON document");
    }
    if (parsed.value("format", "") != expected_format) {
        throw FormatError("expected a '" + expected_format + "' document");
    }
    return parsed;
}

std::string format_double(double value) {
    if (std::isinf(value)) {
        return value > 0 ? "inf" : "-inf";
    }
    std::ostringstream out;
    out.precision(17);
    out << value;
    return out.str();
}

json config_to_json(const PipelineConfig& config) {
    return json{{"representation", to_string(config.representation)},
                {"k", config.feature_count},
                {"selector", to_string(config.selector)},
                {"hiervar", config.hiervar},
                {"d", config.divider},
                {"lambda_grid", config.lambda_grid},
                {"lasso_alpha", config.lasso_alpha},
                {"lasso_max_iterations", config.lasso_max_iterations},
                {"lasso_tolerance", config.lasso_tolerance},
                {"class_weighting", config.class_weighting},
                {"znormalize", config.znormalize},
                {"kneedle_sensitivity", config.kneedle_sensitivity},
                {"seed", config.seed},
                {"folds", config.folds}};
}

json report_to_json_object(const RunReport& report) {
    return json{{"dataset", report.dataset_name},
                {"config", config_to_json(report.config)},
                {"baseline_accuracy", report.baseline_accuracy},
                {"selected_accuracy", report.selected_accuracy},
                {"feature_counts",
                 {{"k", report.feature_count},
                  {"after_stage1", report.after_stage1},
                  {"after_hiervar", report.after_hiervar}}},
                {"reduction_percent", report.reduction_percent},
                {"wall_times_seconds",
                 {{"transform", report.wall_times.transform},
                  {"pretrain_fit", report.wall_times.pretrain_fit},
                  {"selection", report.wall_times.selection},
                  {"posttrain_fit", report.wall_times.posttrain_fit},
                  {"test_transform", report.wall_times.test_transform},
                  {"test_predict", report.wall_times.test_predict},
                  {"baseline_predict", report.wall_times.baseline_predict}}},
                {"chosen_lambda",
                 {{"pretrain", report.pretrain_lambda},
                  {"posttrain", report.posttrain_lambda}}},
                {"knee_missing", report.knee_missing},
                {"empty_selection_fallback", report.empty_selection_fallback},
                {"lasso_converged", report.lasso_converged}};
}

constexpr const char* kRunCsvHeader =
    "dataset,config,repeat,seed,status,error,baseline_accuracy,selected_accuracy,"
    "k,after_stage1,after_hiervar,reduction_percent,pretrain_lambda,posttrain_lambda,"
    "transform_s,pretrain_fit_s,selection_s,posttrain_fit_s,test_transform_s,"
    "test_predict_s,baseline_predict_s";

std::string csv_escape(const std::string& text) {
    if (text.find_first_of(",\"\n") == std::string::npos) {
        return text;
    }
    std::string quoted = "\"";
    for (char c : text) {
        if (c == '"') {
            quoted += '"';
        }
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

void append_run_csv_row(std::ostringstream& out, const std::string& dataset,
                        const std::string& config, int repeat, std::uint64_t seed,
                        bool failed, const std::string& error, const RunReport& report) {
    out << csv_escape(dataset) << ',' << csv_escape(config) << ',' << repeat << ','
        << seed << ',' << (failed ? "failed" : "ok") << ',' << csv_escape(error) << ',';
    if (failed) {
        out << ",,,,,,,,,,,,,,\n";
        return;
    }
    out << format_double(report.baseline_accuracy) << ','
        << format_double(report.selected_accuracy) << ',' << report.feature_count << ','
        << report.after_stage1 << ',' << report.after_hiervar << ','
        << format_double(report.reduction_percent) << ','
        << format_double(report.pretrain_lambda) << ','
        << format_double(report.posttrain_lambda) << ','
        << format_double(report.wall_times.transform) << ','
        << format_double(report.wall_times.pretrain_fit) << ','
        << format_double(report.wall_times.selection) << ','
        << format_double(report.wall_times.posttrain_fit) << ','
        << format_double(report.wall_times.test_transform) << ','
        << format_double(report.wall_times.test_predict) << ','
        << format_double(report.wall_times.baseline_predict) << '\n';
}

}  // namespace

std::string bank_to_json(const KernelBank& bank) {
    json document{{"format", "hiervar-kernel-bank"},
                  {"version", kBankVersion},
                  {"seed", bank.seed},
                  {"mode", bank.mode == PoolingMode::ter ? "ter" : "rter"},
                  {"series_length", bank.series_length},
                  {"feature_count", bank.feature_count},
                  {"feature_to_kernel", bank.feature_to_kernel},
                  {"dilations", bank.dilations},
                  {"paddings", bank.paddings},
                  {"biases_set", bank.biases_set},
                  {"rter_range", bank.rter_range}};
    document["biases"] = bank.biases_set ? vector_to_json(bank.biases) : json::array();
    return document.dump(2);
}

KernelBank bank_from_json(const std::string& text) {
    const json document = parse(text, "hiervar-kernel-bank");
    if (document.value("version", 0) != kBankVersion) {
        throw FormatError("unsupported kernel bank version");
    }
    KernelBank bank = generate_kernel_bank(
        document.at("series_length").get<int>(), document.at("feature_count").get<int>(),
        document.at("mode").get<std::string>() == "ter" ? PoolingMode::ter
                                                        : PoolingMode::rter,
        document.at("seed").get<std::uint64_t>());
    // Stored hyperparameters win over regeneration; a bank edited or built by
    // another tool still replays exactly.
    bank.feature_to_kernel = document.at("feature_to_kernel").get<std::vector<int>>();
    bank.dilations = document.at("dilations").get<std::vector<int>>();
    bank.paddings = document.at("paddings").get<std::vector<std::uint8_t>>();
    bank.rter_range = document.at("rter_range").get<double>();
    bank.biases_set = document.at("biases_set").get<bool>();
    if (bank.biases_set) {
        bank.biases = vector_from_json(document.at("biases"));
        if (bank.biases.size() != bank.feature_count) {
            throw FormatError("bias vector length does not match feature count");
        }
    }
    return bank;
}

std::string ridge_to_json(const RidgeModel& model) {
    json document{{"format", "hiervar-ridge-model"},
                  {"version", kModelVersion},
                  {"lambda", model.lambda},
                  {"classes", model.classes},
                  {"class_weights", model.class_weights},
                  {"pseudo_inverse", model.pseudo_inverse},
                  {"feature_means", vector_to_json(model.feature_means)},
                  {"coefficients", matrix_to_json(model.coefficients)}};
    return document.dump(2);
}

RidgeModel ridge_from_json(const std::string& text) {
    const json document = parse(text, "hiervar-ridge-model");
    if (document.value("version", 0) != kModelVersion) {
        throw FormatError("unsupported ridge model version");
    }
    RidgeModel model;
    model.lambda = document.at("lambda").get<double>();
    model.classes = document.at("classes").get<int>();
    model.class_weights = document.at("class_weights").get<std::vector<double>>();
    model.pseudo_inverse = document.at("pseudo_inverse").get<bool>();
    model.feature_means = vector_from_json(document.at("feature_means"));
    model.coefficients = matrix_from_json(document.at("coefficients"));
    if (model.coefficients.rows() != model.feature_means.size()) {
        throw FormatError("coefficient rows do not match the centering vector");
    }
    return model;
}

std::string lasso_to_json(const LassoModel& model) {
    json document{{"format", "hiervar-lasso-model"},
                  {"version", kModelVersion},
                  {"alpha", model.alpha},
                  {"max_iterations", model.max_iterations},
                  {"tolerance", model.tolerance},
                  {"converged", model.converged},
                  {"iterations", model.iterations},
                  {"feature_means", vector_to_json(model.feature_means)},
                  {"coefficients", matrix_to_json(model.coefficients)}};
    return document.dump(2);
}

LassoModel lasso_from_json(const std::string& text) {
    const json document = parse(text, "hiervar-lasso-model");
    if (document.value("version", 0) != kModelVersion) {
        throw FormatError("unsupported lasso model version");
    }
    LassoModel model;
    model.alpha = document.at("alpha").get<double>();
    model.max_iterations = document.at("max_iterations").get<int>();
    model.tolerance = document.at("tolerance").get<double>();
    model.converged = document.at("converged").get<bool>();
    model.iterations = document.at("iterations").get<int>();
    model.feature_means = vector_from_json(document.at("feature_means"));
    model.coefficients = matrix_from_json(document.at("coefficients"));
    return model;
}

void save_bank(const KernelBank& bank, const std::string& path) {
    write_text_file(path, bank_to_json(bank));
}

KernelBank load_bank(const std::string& path) {
    return bank_from_json(read_text_file(path));
}

void save_ridge(const RidgeModel& model, const std::string& path) {
    write_text_file(path, ridge_to_json(model));
}

RidgeModel load_ridge(const std::string& path) {
    return ridge_from_json(read_text_file(path));
}

std::string report_to_json(const RunReport& report) {
    json document = report_to_json_object(report);
    document["format"] = "hiervar-run-report";
    document["version"] = 1;
    return document.dump(2);
}

std::string suite_to_json(const SuiteReport& suite) {
    json rows = json::array();
    for (const SuiteRow& row : suite.rows) {
        json entry{{"dataset", row.dataset},
                   {"config", row.config_label},
                   {"repeat", row.repeat},
                   {"seed", row.seed},
                   {"status", row.failed ? "failed" : "ok"}};
        if (row.failed) {
            entry["error"] = row.error;
        } else {
            entry["report"] = report_to_json_object(row.report);
        }
        rows.push_back(std::move(entry));
    }
    json aggregates = json::array();
    for (const SuiteAggregate& aggregate : suite.aggregates) {
        aggregates.push_back(json{
            {"dataset", aggregate.dataset},
            {"config", aggregate.config_label},
            {"runs", aggregate.runs},
            {"mean_baseline_accuracy", aggregate.mean_baseline_accuracy},
            {"mean_selected_accuracy", aggregate.mean_selected_accuracy},
            {"mean_after_stage1", aggregate.mean_after_stage1},
            {"mean_after_hiervar", aggregate.mean_after_hiervar},
            {"mean_reduction_percent", aggregate.mean_reduction_percent}});
    }
    json document{{"format", "hiervar-suite-report"},
                  {"version", 1},
                  {"runs", std::move(rows)},
                  {"aggregates", std::move(aggregates)}};
    return document.dump(2);
}

std::string report_to_csv(const RunReport& report) {
    std::ostringstream out;
    out << kRunCsvHeader << '\n';
    append_run_csv_row(out, report.dataset_name, config_label(report.config), 0,
                       report.config.seed, false, "", report);
    return out.str();
}

std::string suite_to_csv(const SuiteReport& suite) {
    std::ostringstream out;
    out << kRunCsvHeader << '\n';
    for (const SuiteRow& row : suite.rows) {
        append_run_csv_row(out, row.dataset, row.config_label, row.repeat, row.seed,
                           row.failed, row.error, row.report);
    }
    out << "\ndataset,config,runs,mean_baseline_accuracy,mean_selected_accuracy,"
           "mean_after_stage1,mean_after_hiervar,mean_reduction_percent\n";
    for (const SuiteAggregate& aggregate : suite.aggregates) {
        out << csv_escape(aggregate.dataset) << ',' << csv_escape(aggregate.config_label)
            << ',' << aggregate.runs << ','
            << format_double(aggregate.mean_baseline_accuracy) << ','
            << format_double(aggregate.mean_selected_accuracy) << ','
            << format_double(aggregate.mean_after_stage1) << ','
            << format_double(aggregate.mean_after_hiervar) << ','
            << format_double(aggregate.mean_reduction_percent) << '\n';
    }
    return out.str();
}

std::string features_to_csv(const FeatureMatrix& features, const std::vector<int>& labels) {
    if (static_cast<std::size_t>(features.values.rows()) != labels.size()) {
        throw ShapeError("feature rows and label count differ");
    }
    std::ostringstream out;
    out << "label";
    for (Eigen::Index k = 0; k < features.values.cols(); ++k) {
        out << ",f" << k;
    }
    out << '\n';
    for (Eigen::Index n = 0; n < features.values.rows(); ++n) {
        out << labels[static_cast<std::size_t>(n)];
        for (Eigen::Index k = 0; k < features.values.cols(); ++k) {
            out << ',' << format_double(features.values(n, k));
        }
        out << '\n';
    }
    return out.str();
}

std::string fscore_curve_csv(const FScoreVector& scores, const std::vector<int>& erocket_set) {
    const std::set<int> members(erocket_set.begin(), erocket_set.end());
    std::vector<int> order(static_cast<std::size_t>(scores.f_scores.size()));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&scores](int a, int b) {
        return scores.f_scores(a) > scores.f_scores(b);
    });

    std::ostringstream out;
    out << "rank,feature_index,f_score,in_erocket_set,passes_threshold\n";
    for (std::size_t rank = 0; rank < order.size(); ++rank) {
        const int index = order[rank];
        out << rank << ',' << index << ',' << format_double(scores.f_scores(index)) << ','
            << (members.count(index) ? 1 : 0) << ','
            << (scores.f_scores(index) > scores.threshold ? 1 : 0) << '\n';
    }
    return out.str();
}

std::string knee_diagnostics_csv(const CoefficientRanking& ranking, const KneeResult& knee) {
    std::ostringstream out;
    out << "sorted_position,feature_index,magnitude,normalized_difference,is_knee\n";
    for (Eigen::Index i = 0; i < ranking.magnitudes.size(); ++i) {
        const auto position = static_cast<std::size_t>(i);
        out << position << ',' << ranking.permutation[position] << ','
            << format_double(ranking.magnitudes(i)) << ','
            << format_double(knee.normalized_difference_curve[position]) << ','
            << (knee.knee_index && *knee.knee_index == position ? 1 : 0) << '\n';
    }
    return out.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream file(path, std::ios::binary);
    if (!file) {
        throw FormatError("cannot open for writing: " + path);
    }
    file << text;
    if (!file) {
        throw FormatError("write failed: " + path);
    }
}

std::string read_text_file(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) {
        throw FormatError("cannot open for reading: " + path);
    }
    std::ostringstream buffer;
    buffer << file.rdbuf();
    return buffer.str();
}

}  // namespace hiervar
