#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "hiervar/common.hpp"
#include "hiervar/dataset.hpp"

namespace hiervar {

enum class PoolingMode { ter, rter };

inline constexpr int kKernelLength = 9;
inline constexpr int kKernelPatternCount = 84;  // choose 3 of 9 positions for weight 2

/// Frozen random hyperparameters of the feature map: 84 fixed weight
/// patterns (three 2s, six -1s), per-feature dilation / padding / bias, and
/// the seed that reproduces all of it.
struct KernelBank {
    Eigen::Matrix<double, kKernelPatternCount, kKernelLength> kernel_weights;
    std::vector<int> feature_to_kernel;  // length K, row into kernel_weights
    std::vector<int> dilations;          // length K
    std::vector<std::uint8_t> paddings;  // length K, 1 = zero-padded same-length output
    Eigen::VectorXd biases;              // length K (TER: set by fit_biases)
    bool biases_set = false;
    PoolingMode mode = PoolingMode::ter;
    std::uint64_t seed = 0;
    int series_length = 0;    // L the bank was generated for
    int feature_count = 0;    // K
    double rter_range = 1.0;  // rTER thresholds live in [-rter_range, rter_range]
};

/// N x K matrix of pooled features, every entry in [0, 1].
struct FeatureMatrix {
    Eigen::MatrixXd values;  // N x K
    int feature_count = 0;
    std::uint64_t bank_seed = 0;
    PoolingMode bank_mode = PoolingMode::ter;

    Eigen::Index sample_count() const { return values.rows(); }
};

/// Deterministic bank for (L, K, mode, seed). Kernels are assigned
/// round-robin over the 84 patterns; dilations drawn as floor(2^u) with u
/// uniform on [0, log2((L-1)/8)]; padding alternates. TER biases are left
/// unset; rTER thresholds are drawn uniform on [-1, 1] at generation and
/// rescaled by calibrate_rter_range.
KernelBank generate_kernel_bank(int series_length, int feature_count,
                                PoolingMode mode, std::uint64_t seed);

/// TER only: per feature, set the bias to a random-level quantile of the
/// convolution output of one randomly chosen training series.
KernelBank fit_biases(const KernelBank& bank, const TimeSeriesDataset& train,
                      std::uint64_t seed);

/// rTER only: rescale thresholds to [-q, q], q = 0.9 quantile of
/// |convolution outputs| over min(10, N) seeded training series.
KernelBank calibrate_rter_range(const KernelBank& bank,
                                const TimeSeriesDataset& train,
                                std::uint64_t seed);

/// Pooled features: values(n, k) = fraction of convolution outputs of
/// series n under kernel k that exceed bias k.
FeatureMatrix transform(const TimeSeriesDataset& dataset, const KernelBank& bank);

/// Dilated 9-tap convolution of one series under one bank feature.
/// Padded: output length L, centered taps, zeros outside. Valid: length
/// L - 8*dilation. Shared by transform and the bias fitters.
Eigen::VectorXd convolve_feature(const Eigen::Ref<const Eigen::RowVectorXd>& series,
                                 const KernelBank& bank, int feature);

/// Linear-interpolation quantile of an unsorted sample, level in [0, 1].
double quantile(std::vector<double> values, double level);

}  // namespace hiervar
