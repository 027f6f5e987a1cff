#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "hiervar/common.hpp"

namespace hiervar {

enum class Split { train, test };

/// N labeled univariate series of equal length L. Labels are contiguous
/// {1..C}; raw_labels keeps the original file tokens (sorted ascending) so
/// a test split can be aligned to the train split's label map.
struct TimeSeriesDataset {
    Eigen::MatrixXd series;          // N x L
    std::vector<int> labels;         // length N, values in {1..C}
    int class_count = 0;             // C
    Split split = Split::train;
    std::string name;
    std::vector<double> raw_labels;  // distinct raw labels, ascending; raw_labels[c-1] -> c

    Eigen::Index sample_count() const { return series.rows(); }
    Eigen::Index series_length() const { return series.cols(); }
};

/// Parse a UCR-archive flat file: one example per line, label first, then L
/// values; tab or comma separated (auto-detected from the first line),
/// LF or CRLF. Labels are remapped to {1..C} by ascending raw value.
TimeSeriesDataset load_ucr_dataset(const std::string& path, Split split);

/// Remap `dataset` labels onto `reference`'s raw-label map. A raw label
/// absent from the reference raises LabelError.
TimeSeriesDataset align_labels(const TimeSeriesDataset& dataset,
                               const TimeSeriesDataset& reference);

/// Build a dataset from an in-memory matrix; validates labels and finiteness.
TimeSeriesDataset make_dataset(Eigen::MatrixXd series, std::vector<int> labels,
                               const std::string& name = "memory",
                               Split split = Split::train);

/// Per-series zero mean / unit population-std normalization. A zero-variance
/// series maps to all zeros.
TimeSeriesDataset znormalize(const TimeSeriesDataset& dataset);

}  // namespace hiervar
