#include "hiervar/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <tuple>

namespace hiervar {

namespace {

Eigen::Matrix<double, kKernelPatternCount, kKernelLength> enumerate_patterns() {
    Eigen::Matrix<double, kKernelPatternCount, kKernelLength> weights;
    int row = 0;
    for (int a = 0; a < kKernelLength; ++a) {
        for (int b = a + 1; b < kKernelLength; ++b) {
            for (int c = b + 1; c < kKernelLength; ++c) {
                for (int j = 0; j < kKernelLength; ++j) {
                    weights(row, j) = (j == a || j == b || j == c) ? 2.0 : -1.0;
                }
                ++row;
            }
        }
    }
    return weights;
}

void check_dilations(const KernelBank& bank, Eigen::Index series_length) {
    for (int d : bank.dilations) {
        if (static_cast<Eigen::Index>(kKernelLength - 1) * d >= series_length) {
            throw ConfigError("dilation " + std::to_string(d) +
                              " invalid for series length " +
                              std::to_string(series_length));
        }
    }
}

}  // namespace

Eigen::VectorXd convolve_feature(const Eigen::Ref<const Eigen::RowVectorXd>& series,
                                 const KernelBank& bank, int feature) {
    const Eigen::Index length = series.size();
    const int dilation = bank.dilations[static_cast<std::size_t>(feature)];
    const bool padded = bank.paddings[static_cast<std::size_t>(feature)] != 0;
    const auto weights = bank.kernel_weights.row(
        bank.feature_to_kernel[static_cast<std::size_t>(feature)]);

    const Eigen::Index span = static_cast<Eigen::Index>(kKernelLength - 1) * dilation;
    if (padded) {
        Eigen::VectorXd output(length);
        const Eigen::Index center = static_cast<Eigen::Index>(kKernelLength / 2) * dilation;
        for (Eigen::Index t = 0; t < length; ++t) {
            double acc = 0.0;
            for (int j = 0; j < kKernelLength; ++j) {
                const Eigen::Index pos = t + static_cast<Eigen::Index>(j) * dilation - center;
                if (pos >= 0 && pos < length) {
                    acc += weights(j) * series(pos);
                }
            }
            output(t) = acc;
        }
        return output;
    }
    Eigen::VectorXd output(length - span);
    for (Eigen::Index t = 0; t + span < length; ++t) {
        double acc = 0.0;
        for (int j = 0; j < kKernelLength; ++j) {
            acc += weights(j) * series(t + static_cast<Eigen::Index>(j) * dilation);
        }
        output(t) = acc;
    }
    return output;
}

double quantile(std::vector<double> values, double level) {
    if (values.empty()) {
        throw ConfigError("quantile of an empty sample");
    }
    std::sort(values.begin(), values.end());
    const double position = level * static_cast<double>(values.size() - 1);
    const auto lower = static_cast<std::size_t>(std::floor(position));
    if (lower + 1 >= values.size()) {
        return values.back();
    }
    const double fraction = position - static_cast<double>(lower);
    return values[lower] + fraction * (values[lower + 1] - values[lower]);
}

KernelBank generate_kernel_bank(int series_length, int feature_count,
                                PoolingMode mode, std::uint64_t seed) {
    if (feature_count < kKernelPatternCount) {
        throw ConfigError("feature count must be at least " +
                          std::to_string(kKernelPatternCount) + ", got " +
                          std::to_string(feature_count));
    }
    if (series_length < kKernelLength) {
        throw ConfigError("series length must be at least " +
                          std::to_string(kKernelLength) + ", got " +
                          std::to_string(series_length));
    }

    KernelBank bank;
    bank.kernel_weights = enumerate_patterns();
    bank.mode = mode;
    bank.seed = seed;
    bank.series_length = series_length;
    bank.feature_count = feature_count;
    bank.feature_to_kernel.resize(static_cast<std::size_t>(feature_count));
    bank.dilations.resize(static_cast<std::size_t>(feature_count));
    bank.paddings.resize(static_cast<std::size_t>(feature_count));
    bank.biases = Eigen::VectorXd::Constant(feature_count,
                                            std::numeric_limits<double>::quiet_NaN());

    RandomStream rng(seed);
    const double max_exponent =
        std::log2(static_cast<double>(series_length - 1) / (kKernelLength - 1.0));
    for (int f = 0; f < feature_count; ++f) {
        bank.feature_to_kernel[static_cast<std::size_t>(f)] = f % kKernelPatternCount;
        const double exponent = rng.uniform(0.0, max_exponent);
        bank.dilations[static_cast<std::size_t>(f)] =
            std::max(1, static_cast<int>(std::floor(std::exp2(exponent))));
        bank.paddings[static_cast<std::size_t>(f)] = static_cast<std::uint8_t>(f % 2 == 0);
    }

    if (mode == PoolingMode::rter) {
        bank.rter_range = 1.0;
        for (int f = 0; f < feature_count; ++f) {
            bank.biases(f) = rng.uniform(-bank.rter_range, bank.rter_range);
        }
        bank.biases_set = true;
    }
    return bank;
}

KernelBank fit_biases(const KernelBank& bank, const TimeSeriesDataset& train,
                      std::uint64_t seed) {
    if (bank.mode != PoolingMode::ter) {
        throw StateError("fit_biases applies to TER banks only; rTER thresholds are set at generation");
    }
    if (train.sample_count() == 0) {
        throw ConfigError("fit_biases requires a nonempty training set");
    }
    check_dilations(bank, train.series_length());

    KernelBank fitted = bank;
    RandomStream rng(seed);
    const auto sample_count = static_cast<std::uint64_t>(train.sample_count());
    for (int f = 0; f < bank.feature_count; ++f) {
        const auto row = static_cast<Eigen::Index>(rng.uniform_index(sample_count));
        const double level = rng.uniform();
        const Eigen::VectorXd conv = convolve_feature(train.series.row(row), bank, f);
        fitted.biases(f) =
            quantile(std::vector<double>(conv.data(), conv.data() + conv.size()), level);
    }
    fitted.biases_set = true;
    return fitted;
}

KernelBank calibrate_rter_range(const KernelBank& bank, const TimeSeriesDataset& train,
                                std::uint64_t seed) {
    if (bank.mode != PoolingMode::rter) {
        throw StateError("calibrate_rter_range applies to rTER banks only");
    }
    if (train.sample_count() == 0) {
        throw ConfigError("calibrate_rter_range requires a nonempty training set");
    }
    check_dilations(bank, train.series_length());

    RandomStream rng(seed);
    const auto sample_count = static_cast<std::uint64_t>(train.sample_count());
    const int probes = static_cast<int>(std::min<std::uint64_t>(10, sample_count));
    std::vector<double> magnitudes;
    for (int p = 0; p < probes; ++p) {
        const auto row = static_cast<Eigen::Index>(rng.uniform_index(sample_count));
        for (int f = 0; f < std::min(bank.feature_count, kKernelPatternCount); ++f) {
            const Eigen::VectorXd conv = convolve_feature(train.series.row(row), bank, f);
            for (Eigen::Index i = 0; i < conv.size(); ++i) {
                magnitudes.push_back(std::abs(conv(i)));
            }
        }
    }
    double range = quantile(std::move(magnitudes), 0.9);
    if (range <= 0.0) {
        range = 1.0;  // degenerate all-zero convolutions; keep thresholds usable
    }

    KernelBank calibrated = bank;
    calibrated.biases = bank.biases * (range / bank.rter_range);
    calibrated.rter_range = range;
    return calibrated;
}

FeatureMatrix transform(const TimeSeriesDataset& dataset, const KernelBank& bank) {
    if (!bank.biases_set) {
        throw StateError("transform called before biases were fitted");
    }
    check_dilations(bank, dataset.series_length());

    // Features sharing (kernel, dilation, padding) reuse one convolution.
    std::map<std::tuple<int, int, int>, std::vector<int>> groups;
    for (int f = 0; f < bank.feature_count; ++f) {
        groups[{bank.feature_to_kernel[static_cast<std::size_t>(f)],
                bank.dilations[static_cast<std::size_t>(f)],
                static_cast<int>(bank.paddings[static_cast<std::size_t>(f)])}]
            .push_back(f);
    }
    std::vector<const std::vector<int>*> group_list;
    group_list.reserve(groups.size());
    for (const auto& [key, members] : groups) {
        group_list.push_back(&members);
    }

    FeatureMatrix features;
    features.feature_count = bank.feature_count;
    features.bank_seed = bank.seed;
    features.bank_mode = bank.mode;
    features.values.resize(dataset.sample_count(), bank.feature_count);

    const auto rows = dataset.sample_count();
#pragma omp parallel for schedule(static)
    for (Eigen::Index n = 0; n < rows; ++n) {
        for (const std::vector<int>* members : group_list) {
            const Eigen::VectorXd conv =
                convolve_feature(dataset.series.row(n), bank, members->front());
            const auto output_length = static_cast<double>(conv.size());
            for (int f : *members) {
                const double bias = bank.biases(f);
                Eigen::Index exceed = 0;
                for (Eigen::Index i = 0; i < conv.size(); ++i) {
                    exceed += conv(i) > bias ? 1 : 0;
                }
                features.values(n, f) = static_cast<double>(exceed) / output_length;
            }
        }
    }
    return features;
}

}  // namespace hiervar
