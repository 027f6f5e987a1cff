#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hiervar/anova.hpp"
#include "hiervar/dataset.hpp"
#include "hiervar/io.hpp"
#include "hiervar/kernels.hpp"
#include "hiervar/knee.hpp"
#include "hiervar/linear.hpp"
#include "hiervar/pipeline.hpp"

namespace py = pybind11;
using namespace hiervar;

PYBIND11_MODULE(_hiervar, m) {
    m.doc() = "Random-kernel time-series features with hierarchical "
              "(E-ROCKET/LASSO + ANOVA) feature selection";

    py::register_exception<Error>(m, "HiervarError", PyExc_RuntimeError);

    py::enum_<Split>(m, "Split")
        .value("train", Split::train)
        .value("test", Split::test);
    py::enum_<PoolingMode>(m, "PoolingMode")
        .value("ter", PoolingMode::ter)
        .value("rter", PoolingMode::rter);
    py::enum_<Aggregation>(m, "Aggregation")
        .value("l2_norm", Aggregation::l2_norm)
        .value("max_abs", Aggregation::max_abs);
    py::enum_<Representation>(m, "Representation")
        .value("minirocket_ter", Representation::minirocket_ter)
        .value("raster_rter", Representation::raster_rter);
    py::enum_<Selector>(m, "Selector")
        .value("none", Selector::none)
        .value("erocket", Selector::erocket)
        .value("lasso", Selector::lasso);

    py::class_<TimeSeriesDataset>(m, "TimeSeriesDataset")
        .def_readonly("series", &TimeSeriesDataset::series)
        .def_readonly("labels", &TimeSeriesDataset::labels)
        .def_readonly("class_count", &TimeSeriesDataset::class_count)
        .def_readonly("name", &TimeSeriesDataset::name)
        .def_property_readonly("sample_count", &TimeSeriesDataset::sample_count)
        .def_property_readonly("series_length", &TimeSeriesDataset::series_length);

    py::class_<KernelBank>(m, "KernelBank")
        .def_readonly("feature_count", &KernelBank::feature_count)
        .def_readonly("series_length", &KernelBank::series_length)
        .def_readonly("seed", &KernelBank::seed)
        .def_readonly("mode", &KernelBank::mode)
        .def_readonly("dilations", &KernelBank::dilations)
        .def_readonly("biases", &KernelBank::biases)
        .def_readonly("biases_set", &KernelBank::biases_set)
        .def_readonly("rter_range", &KernelBank::rter_range);

    py::class_<FeatureMatrix>(m, "FeatureMatrix")
        .def_readonly("values", &FeatureMatrix::values)
        .def_readonly("feature_count", &FeatureMatrix::feature_count)
        .def_property_readonly("sample_count", &FeatureMatrix::sample_count);

    py::class_<RidgeModel>(m, "RidgeModel")
        .def_readonly("coefficients", &RidgeModel::coefficients)
        .def_readonly("lambda_", &RidgeModel::lambda)
        .def_readonly("feature_means", &RidgeModel::feature_means)
        .def_readonly("classes", &RidgeModel::classes)
        .def_readonly("pseudo_inverse", &RidgeModel::pseudo_inverse);

    py::class_<LassoModel>(m, "LassoModel")
        .def_readonly("coefficients", &LassoModel::coefficients)
        .def_readonly("alpha", &LassoModel::alpha)
        .def_readonly("converged", &LassoModel::converged)
        .def_readonly("iterations", &LassoModel::iterations);

    py::class_<CoefficientRanking>(m, "CoefficientRanking")
        .def_readonly("magnitudes", &CoefficientRanking::magnitudes)
        .def_readonly("permutation", &CoefficientRanking::permutation);

    py::class_<KneeResult>(m, "KneeResult")
        .def_readonly("knee_index", &KneeResult::knee_index)
        .def_readonly("sensitivity", &KneeResult::sensitivity)
        .def_readonly("normalized_difference_curve",
                      &KneeResult::normalized_difference_curve);

    py::class_<ErocketSelection>(m, "ErocketSelection")
        .def_readonly("indices", &ErocketSelection::indices)
        .def_readonly("warned_no_knee", &ErocketSelection::warned_no_knee);

    py::class_<FScoreVector>(m, "FScoreVector")
        .def_readonly("f_scores", &FScoreVector::f_scores)
        .def_readonly("ssb", &FScoreVector::ssb)
        .def_readonly("ssw", &FScoreVector::ssw)
        .def_readonly("group_counts", &FScoreVector::group_counts)
        .def_readonly("mean_f", &FScoreVector::mean_f)
        .def_readonly("divider", &FScoreVector::divider)
        .def_readonly("threshold", &FScoreVector::threshold);

    py::class_<HiervarSelection>(m, "HiervarSelection")
        .def_readonly("erocket_set", &HiervarSelection::erocket_set)
        .def_readonly("fscore_pass", &HiervarSelection::fscore_pass)
        .def_readonly("final_set", &HiervarSelection::final_set)
        .def_readonly("reduction_ratio", &HiervarSelection::reduction_ratio);

    py::class_<PipelineConfig>(m, "PipelineConfig")
        .def(py::init<>())
        .def_readwrite("representation", &PipelineConfig::representation)
        .def_readwrite("feature_count", &PipelineConfig::feature_count)
        .def_readwrite("selector", &PipelineConfig::selector)
        .def_readwrite("hiervar", &PipelineConfig::hiervar)
        .def_readwrite("divider", &PipelineConfig::divider)
        .def_readwrite("lambda_grid", &PipelineConfig::lambda_grid)
        .def_readwrite("lasso_alpha", &PipelineConfig::lasso_alpha)
        .def_readwrite("class_weighting", &PipelineConfig::class_weighting)
        .def_readwrite("znormalize", &PipelineConfig::znormalize)
        .def_readwrite("kneedle_sensitivity", &PipelineConfig::kneedle_sensitivity)
        .def_readwrite("seed", &PipelineConfig::seed)
        .def_readwrite("folds", &PipelineConfig::folds);

    py::class_<StageTimes>(m, "StageTimes")
        .def_readonly("transform", &StageTimes::transform)
        .def_readonly("pretrain_fit", &StageTimes::pretrain_fit)
        .def_readonly("selection", &StageTimes::selection)
        .def_readonly("posttrain_fit", &StageTimes::posttrain_fit)
        .def_readonly("test_transform", &StageTimes::test_transform)
        .def_readonly("test_predict", &StageTimes::test_predict)
        .def_readonly("baseline_predict", &StageTimes::baseline_predict);

    py::class_<RunReport>(m, "RunReport")
        .def_readonly("dataset_name", &RunReport::dataset_name)
        .def_readonly("baseline_accuracy", &RunReport::baseline_accuracy)
        .def_readonly("selected_accuracy", &RunReport::selected_accuracy)
        .def_readonly("feature_count", &RunReport::feature_count)
        .def_readonly("after_stage1", &RunReport::after_stage1)
        .def_readonly("after_hiervar", &RunReport::after_hiervar)
        .def_readonly("reduction_percent", &RunReport::reduction_percent)
        .def_readonly("wall_times", &RunReport::wall_times)
        .def_readonly("pretrain_lambda", &RunReport::pretrain_lambda)
        .def_readonly("posttrain_lambda", &RunReport::posttrain_lambda)
        .def_readonly("knee_missing", &RunReport::knee_missing)
        .def_readonly("empty_selection_fallback", &RunReport::empty_selection_fallback)
        .def("to_json", [](const RunReport& report) { return report_to_json(report); });

    m.def("load_ucr_dataset", &load_ucr_dataset, py::arg("path"), py::arg("split"));
    m.def("align_labels", &align_labels, py::arg("dataset"), py::arg("reference"));
    m.def("make_dataset", &make_dataset, py::arg("series"), py::arg("labels"),
          py::arg("name") = "memory", py::arg("split") = Split::train);
    m.def("znormalize", &znormalize, py::arg("dataset"));

    m.def("generate_kernel_bank", &generate_kernel_bank, py::arg("series_length"),
          py::arg("feature_count"), py::arg("mode"), py::arg("seed"));
    m.def("fit_biases", &fit_biases, py::arg("bank"), py::arg("train"), py::arg("seed"));
    m.def("calibrate_rter_range", &calibrate_rter_range, py::arg("bank"), py::arg("train"),
          py::arg("seed"));
    m.def("transform", &transform, py::arg("dataset"), py::arg("bank"),
          py::call_guard<py::gil_scoped_release>());

    m.def(
        "fit_ridge",
        [](const FeatureMatrix& features, const std::vector<int>& labels, double lambda,
           bool class_weighting) {
            return fit_ridge(features, labels, lambda, class_weighting);
        },
        py::arg("features"), py::arg("labels"), py::arg("lambda_"),
        py::arg("class_weighting") = true, py::call_guard<py::gil_scoped_release>());
    m.def("cross_validate_lambda", &cross_validate_lambda, py::arg("features"),
          py::arg("labels"), py::arg("grid"), py::arg("folds") = 5,
          py::arg("class_weighting") = true, py::arg("seed") = 0,
          py::call_guard<py::gil_scoped_release>());
    m.def("predict", &predict, py::arg("model"), py::arg("features"));
    m.def("fit_lasso", &fit_lasso, py::arg("features"), py::arg("labels"), py::arg("alpha"),
          py::arg("max_iterations") = 10000, py::arg("tolerance") = 1e-5,
          py::call_guard<py::gil_scoped_release>());
    m.def("lasso_support", &lasso_support, py::arg("model"));

    m.def("rank_coefficients", &rank_coefficients, py::arg("model"),
          py::arg("aggregation") = Aggregation::l2_norm);
    m.def("kneedle_detect", &kneedle_detect, py::arg("curve"), py::arg("sensitivity") = 1.0);
    m.def("detect_knee_ascending", &detect_knee_ascending, py::arg("ascending_curve"),
          py::arg("sensitivity") = 1.0);
    m.def("select_erocket", &select_erocket, py::arg("ranking"), py::arg("knee"));

    m.def("f_scores", &f_scores, py::arg("features"), py::arg("labels"),
          py::arg("divider") = 2.0, py::call_guard<py::gil_scoped_release>());
    m.def("select_hiervar", &select_hiervar, py::arg("fscores"), py::arg("erocket_set"));
    m.def("apply_selection", &apply_selection, py::arg("features"), py::arg("selection"));

    m.def("run_pipeline", &run_pipeline, py::arg("train"), py::arg("test"),
          py::arg("config"), py::call_guard<py::gil_scoped_release>());
    m.def("evaluate_accuracy", &evaluate_accuracy, py::arg("predicted"), py::arg("actual"));

    m.def("save_bank", &save_bank, py::arg("bank"), py::arg("path"));
    m.def("load_bank", &load_bank, py::arg("path"));
    m.def("save_ridge", &save_ridge, py::arg("model"), py::arg("path"));
    m.def("load_ridge", &load_ridge, py::arg("path"));
    m.def("set_max_threads", &set_max_threads, py::arg("n"));
}
