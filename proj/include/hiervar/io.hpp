#pragma once

#include <string>

#include "hiervar/anova.hpp"
#include "hiervar/kernels.hpp"
#include "hiervar/knee.hpp"
#include "hiervar/linear.hpp"
#include "hiervar/pipeline.hpp"

namespace hiervar {

// Versioned JSON serialization. Doubles round-trip exactly, so a reloaded
// bank reproduces features bit-for-bit.

std::string bank_to_json(const KernelBank& bank);
KernelBank bank_from_json(const std::string& text);
void save_bank(const KernelBank& bank, const std::string& path);
KernelBank load_bank(const std::string& path);

std::string ridge_to_json(const RidgeModel& model);
RidgeModel ridge_from_json(const std::string& text);
void save_ridge(const RidgeModel& model, const std::string& path);
RidgeModel load_ridge(const std::string& path);

std::string lasso_to_json(const LassoModel& model);
LassoModel lasso_from_json(const std::string& text);

std::string report_to_json(const RunReport& report);
std::string suite_to_json(const SuiteReport& suite);

/// One row per run plus aggregate rows, documented column set.
std::string suite_to_csv(const SuiteReport& suite);
std::string report_to_csv(const RunReport& report);

/// Feature matrix as CSV: label column then K feature columns.
std::string features_to_csv(const FeatureMatrix& features,
                            const std::vector<int>& labels);

/// F-scores sorted descending with a stage-1 membership flag (plot-ready).
std::string fscore_curve_csv(const FScoreVector& scores,
                             const std::vector<int>& erocket_set);

/// KNEEDLE diagnostics: sorted magnitudes and the normalized difference curve.
std::string knee_diagnostics_csv(const CoefficientRanking& ranking,
                                 const KneeResult& knee);

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

}  // namespace hiervar
