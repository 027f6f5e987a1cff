#include "hiervar/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

namespace hiervar {

namespace {

std::vector<std::string> split_fields(const std::string& line, char delim) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream stream(line);
    while (std::getline(stream, field, delim)) {
        fields.push_back(field);
    }
    return fields;
}

double parse_value(const std::string& token, const std::string& path, std::size_t line_no) {
    try {
        std::size_t consumed = 0;
        double value = std::stod(token, &consumed);
        while (consumed < token.size() &&
               (token[consumed] == ' ' || token[consumed] == '\t')) {
            ++consumed;
        }
        if (consumed != token.size()) {
            throw FormatError(path + ":" + std::to_string(line_no) +
                              ": trailing characters in value '" + token + "'");
        }
        if (!std::isfinite(value)) {
            throw FormatError(path + ":" + std::to_string(line_no) +
                              ": non-finite value '" + token + "' (missing values are rejected)");
        }
        return value;
    } catch (const std::invalid_argument&) {
        throw FormatError(path + ":" + std::to_string(line_no) +
                          ": unparsable value '" + token + "'");
    } catch (const std::out_of_range&) {
        throw FormatError(path + ":" + std::to_string(line_no) +
                          ": value out of range '" + token + "'");
    }
}

std::string stem_of(const std::string& path) {
    std::size_t slash = path.find_last_of("/\\");
    std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
    std::size_t dot = base.find_last_of('.');
    return dot == std::string::npos ? base : base.substr(0, dot);
}

}  // namespace

TimeSeriesDataset load_ucr_dataset(const std::string& path, Split split) {
    std::ifstream file(path);
    if (!file) {
        throw FormatError("cannot open dataset file: " + path);
    }

    std::vector<std::vector<double>> rows;
    std::vector<double> raw_row_labels;
    char delim = '\0';
    std::string line;
    std::size_t line_no = 0;
    std::size_t expected_fields = 0;

    while (std::getline(file, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        if (delim == '\0') {
            delim = line.find('\t') != std::string::npos ? '\t'
                  : line.find(',') != std::string::npos  ? ','
                                                         : '\0';
            if (delim == '\0') {
                throw FormatError(path + ":" + std::to_string(line_no) +
                                  ": no tab or comma delimiter found");
            }
        }
        std::vector<std::string> fields = split_fields(line, delim);
        if (fields.size() < 2) {
            throw FormatError(path + ":" + std::to_string(line_no) +
                              ": row has a label but no values");
        }
        if (expected_fields == 0) {
            expected_fields = fields.size();
        } else if (fields.size() != expected_fields) {
            throw FormatError(path + ":" + std::to_string(line_no) + ": ragged row (" +
                              std::to_string(fields.size() - 1) + " values, expected " +
                              std::to_string(expected_fields - 1) + ")");
        }
        raw_row_labels.push_back(parse_value(fields[0], path, line_no));
        std::vector<double> values(fields.size() - 1);
        for (std::size_t i = 1; i < fields.size(); ++i) {
            values[i - 1] = parse_value(fields[i], path, line_no);
        }
        rows.push_back(std::move(values));
    }

    if (rows.empty()) {
        throw FormatError("empty dataset: " + path);
    }

    std::vector<double> distinct = raw_row_labels;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

    std::map<double, int> label_map;
    for (std::size_t i = 0; i < distinct.size(); ++i) {
        label_map[distinct[i]] = static_cast<int>(i) + 1;
    }

    TimeSeriesDataset dataset;
    dataset.split = split;
    dataset.name = stem_of(path);
    dataset.raw_labels = distinct;
    dataset.class_count = static_cast<int>(distinct.size());
    dataset.series.resize(static_cast<Eigen::Index>(rows.size()),
                          static_cast<Eigen::Index>(rows.front().size()));
    dataset.labels.resize(rows.size());
    for (std::size_t n = 0; n < rows.size(); ++n) {
        dataset.labels[n] = label_map.at(raw_row_labels[n]);
        for (std::size_t t = 0; t < rows[n].size(); ++t) {
            dataset.series(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(t)) =
                rows[n][t];
        }
    }
    return dataset;
}

TimeSeriesDataset align_labels(const TimeSeriesDataset& dataset,
                               const TimeSeriesDataset& reference) {
    std::map<double, int> reference_map;
    for (std::size_t i = 0; i < reference.raw_labels.size(); ++i) {
        reference_map[reference.raw_labels[i]] = static_cast<int>(i) + 1;
    }

    TimeSeriesDataset aligned = dataset;
    aligned.class_count = reference.class_count;
    aligned.raw_labels = reference.raw_labels;
    for (std::size_t n = 0; n < dataset.labels.size(); ++n) {
        double raw = dataset.raw_labels.at(static_cast<std::size_t>(dataset.labels[n]) - 1);
        auto it = reference_map.find(raw);
        if (it == reference_map.end()) {
            std::ostringstream msg;
            msg << dataset.name << ": label " << raw << " (sample " << n
                << ") is absent from the train label map";
            throw LabelError(msg.str());
        }
        aligned.labels[n] = it->second;
    }
    return aligned;
}

TimeSeriesDataset make_dataset(Eigen::MatrixXd series, std::vector<int> labels,
                               const std::string& name, Split split) {
    if (series.rows() == 0 || series.cols() == 0) {
        throw FormatError(name + ": empty dataset");
    }
    if (static_cast<std::size_t>(series.rows()) != labels.size()) {
        throw ShapeError(name + ": series rows and label count differ");
    }
    if (!series.allFinite()) {
        throw FormatError(name + ": non-finite series values");
    }
    int max_label = 0;
    for (int label : labels) {
        if (label < 1) {
            throw LabelError(name + ": labels must lie in {1..C}");
        }
        max_label = std::max(max_label, label);
    }

    TimeSeriesDataset dataset;
    dataset.series = std::move(series);
    dataset.labels = std::move(labels);
    dataset.class_count = max_label;
    dataset.split = split;
    dataset.name = name;
    dataset.raw_labels.resize(static_cast<std::size_t>(max_label));
    for (int c = 1; c <= max_label; ++c) {
        dataset.raw_labels[static_cast<std::size_t>(c) - 1] = c;
    }
    return dataset;
}

TimeSeriesDataset znormalize(const TimeSeriesDataset& dataset) {
    TimeSeriesDataset result = dataset;
    const Eigen::Index length = dataset.series.cols();
    for (Eigen::Index n = 0; n < dataset.series.rows(); ++n) {
        const double mean = dataset.series.row(n).mean();
        const double variance =
            (dataset.series.row(n).array() - mean).square().sum() /
            static_cast<double>(length);
        if (variance <= 0.0) {
            result.series.row(n).setZero();
        } else {
            result.series.row(n) =
                (dataset.series.row(n).array() - mean) / std::sqrt(variance);
        }
    }
    return result;
}

}  // namespace hiervar
