#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "hiervar/common.hpp"
#include "hiervar/kernels.hpp"

namespace hiervar {

/// Closed-form weighted ridge classifier. Coefficients solve
/// (Zc' D Zc + lambda I) W = Zc' D Y with Zc the (weighted-)mean-centered
/// design matrix, D the diagonal sample weights and Y one-hot targets.
struct RidgeModel {
    Eigen::MatrixXd coefficients;      // K x C
    double lambda = 0.0;
    Eigen::VectorXd feature_means;     // length K (weighted means when weighted)
    std::vector<double> class_weights; // per class {1..C}; 0 for absent classes
    int classes = 0;                   // C
    bool pseudo_inverse = false;       // lambda = 0 hit a rank-deficient system
};

/// One-vs-rest squared-loss lasso fitted by cyclic coordinate descent.
struct LassoModel {
    Eigen::MatrixXd coefficients;   // K x C
    double alpha = 0.0;
    int max_iterations = 0;
    double tolerance = 0.0;
    bool converged = false;
    int iterations = 0;             // max sweeps used over the C subproblems
    Eigen::VectorXd feature_means;  // length K
};

/// automatic picks dual when N < K; the explicit values exist so the two
/// algebraic routes can be compared against each other.
enum class RidgeSolvePath { automatic, primal, dual };

/// Weighted ridge fit. Sample n gets weight N/(C_present * N_class(n)) when
/// class_weighting, else 1. Solves the N x N dual system when N < K.
RidgeModel fit_ridge(const FeatureMatrix& features, const std::vector<int>& labels,
                     double lambda, bool class_weighting,
                     RidgeSolvePath path = RidgeSolvePath::automatic);

/// Stratified k-fold selection over the grid, mean fold accuracy, ties
/// broken toward the larger lambda. Folds shrink to the smallest class
/// (floor 2); single-member classes always stay in training; if
/// stratification is impossible falls back to leave-one-out (N <= 50) or
/// unstratified folds.
double cross_validate_lambda(const FeatureMatrix& features,
                             const std::vector<int>& labels,
                             const std::vector<double>& grid, int folds,
                             bool class_weighting, std::uint64_t seed);

/// argmax_c ((z - feature_means) . W)_c, ties toward the smaller class.
std::vector<int> predict(const RidgeModel& model, const FeatureMatrix& features);

LassoModel fit_lasso(const FeatureMatrix& features, const std::vector<int>& labels,
                     double alpha, int max_iterations = 10000,
                     double tolerance = 1e-5);

/// Original indices of features with any nonzero coefficient, ascending.
std::vector<int> lasso_support(const LassoModel& model);

}  // namespace hiervar
