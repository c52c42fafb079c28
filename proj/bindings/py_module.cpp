#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "krom/errors.hpp"
#include "krom/kmd.hpp"
#include "krom/metrics.hpp"
#include "krom/modeselect.hpp"
#include "krom/noise.hpp"
#include "krom/pipeline.hpp"
#include "krom/rom.hpp"
#include "krom/serialize.hpp"
#include "krom/snapshots.hpp"
#include "krom/systems.hpp"

namespace py = pybind11;
using namespace krom;

PYBIND11_MODULE(_krom, m) {
    m.doc() = "Koopman mode decomposition, reduced order models and noise splitting";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);

    // ----- snapshots --------------------------------------------------------
    py::enum_<RepKind>(m, "RepKind")
        .value("raw", RepKind::raw)
        .value("complexified_angle", RepKind::complexified_angle)
        .value("hankel", RepKind::hankel);

    py::class_<Representation>(m, "Representation")
        .def(py::init<>())
        .def_readwrite("kind", &Representation::kind)
        .def_readwrite("delay", &Representation::delay)
        .def_readwrite("base_n_obs", &Representation::base_n_obs)
        .def_readwrite("base_kind", &Representation::base_kind)
        .def("__repr__", [](const Representation& r) { return to_string(r); });

    py::class_<SnapshotMatrix>(m, "SnapshotMatrix")
        .def(py::init([](const Eigen::MatrixXcd& values, double dt, double t0,
                         std::vector<std::string> names) {
                 return make_snapshots(values, dt, t0, std::move(names));
             }),
             py::arg("values"), py::arg("dt") = 1.0, py::arg("t0") = 0.0,
             py::arg("coord_names") = std::vector<std::string>{})
        .def_readwrite("values", &SnapshotMatrix::values)
        .def_readwrite("dt", &SnapshotMatrix::dt)
        .def_readwrite("t0", &SnapshotMatrix::t0)
        .def_readwrite("coord_names", &SnapshotMatrix::coord_names)
        .def_readwrite("representation", &SnapshotMatrix::representation)
        .def_readwrite("period", &SnapshotMatrix::period)
        .def_property_readonly("n_obs", &SnapshotMatrix::n_obs)
        .def_property_readonly("n_t", &SnapshotMatrix::n_t)
        .def("validate", &SnapshotMatrix::validate)
        .def("__repr__", [](const SnapshotMatrix& s) {
            return "SnapshotMatrix(" + std::to_string(s.n_obs()) + "x" +
                   std::to_string(s.n_t()) + ")";
        });

    m.def("load_snapshots", &load_snapshots, py::arg("path"));
    m.def("save_snapshots", &save_snapshots, py::arg("snapshots"), py::arg("path"));
    m.def("hankel_embed", &hankel_embed, py::arg("snapshots"), py::arg("delay"));
    m.def("unembed_first_block", &unembed_first_block, py::arg("snapshots"));
    m.def("complexify_angles", &complexify_angles, py::arg("snapshots"), py::arg("period"));
    m.def("decomplexify_angles", &decomplexify_angles, py::arg("snapshots"));

    // ----- decomposition ----------------------------------------------------
    py::class_<KoopmanDecomposition>(m, "KoopmanDecomposition")
        .def_readonly("eigenvalues", &KoopmanDecomposition::eigenvalues)
        .def_readonly("modes", &KoopmanDecomposition::modes)
        .def_readonly("raw_mode_norms", &KoopmanDecomposition::raw_mode_norms)
        .def_readonly("rank_used", &KoopmanDecomposition::rank_used)
        .def_property_readonly("mode_count", &KoopmanDecomposition::mode_count)
        .def("__repr__", [](const KoopmanDecomposition& d) {
            return "KoopmanDecomposition(modes=" + std::to_string(d.mode_count()) + ")";
        });

    m.def("compute_dmd", &compute_dmd, py::arg("data"), py::arg("rank") = std::nullopt);
    m.def("truncate", &truncate, py::arg("decomposition"), py::arg("modes_to_keep"));
    m.def("save_decomposition", &save_decomposition, py::arg("decomposition"), py::arg("path"));
    m.def("load_decomposition", &load_decomposition, py::arg("path"));

    // ----- reduced order model ---------------------------------------------
    py::class_<IndexRange>(m, "IndexRange")
        .def(py::init<int, int>(), py::arg("begin"), py::arg("end"))
        .def_readwrite("begin", &IndexRange::begin)
        .def_readwrite("end", &IndexRange::end)
        .def("count", &IndexRange::count)
        .def("__repr__", [](const IndexRange& r) {
            return "IndexRange(" + std::to_string(r.begin) + ", " + std::to_string(r.end) + ")";
        });

    py::class_<ReducedOrderModel>(m, "ReducedOrderModel")
        .def_readonly("decomposition", &ReducedOrderModel::decomposition)
        .def_readonly("coefficients", &ReducedOrderModel::coefficients)
        .def_readonly("train_window", &ReducedOrderModel::train_window)
        .def_readonly("dt", &ReducedOrderModel::dt)
        .def_property_readonly("mode_count", &ReducedOrderModel::mode_count);

    m.def("fit_coefficients", &fit_coefficients, py::arg("decomposition"), py::arg("data"),
          py::arg("window"));
    m.def("reconstruct", &reconstruct, py::arg("model"), py::arg("range"));
    m.def("forecast_stats", &forecast_stats, py::arg("model"), py::arg("noise"), py::arg("t"));
    m.def("save_rom", &save_rom, py::arg("model"), py::arg("path"));
    m.def("load_rom", &load_rom, py::arg("path"));

    // ----- noise split ------------------------------------------------------
    py::class_<GaussianFit>(m, "GaussianFit")
        .def_readonly("mean_re", &GaussianFit::mean_re)
        .def_readonly("std_re", &GaussianFit::std_re)
        .def_readonly("mean_im", &GaussianFit::mean_im)
        .def_readonly("std_im", &GaussianFit::std_im)
        .def("pooled_std", &GaussianFit::pooled_std);

    py::class_<NoiseDecomposition>(m, "NoiseDecomposition")
        .def_readonly("residual", &NoiseDecomposition::residual)
        .def_readonly("modal", &NoiseDecomposition::modal)
        .def_readonly("innovation", &NoiseDecomposition::innovation)
        .def_readonly("eval_window", &NoiseDecomposition::eval_window)
        .def_readonly("gaussian_fits", &NoiseDecomposition::gaussian_fits);

    py::class_<ConfidenceBand>(m, "ConfidenceBand")
        .def_readonly("center", &ConfidenceBand::center)
        .def_readonly("half_width", &ConfidenceBand::half_width)
        .def_readonly("k", &ConfidenceBand::k);

    m.def("compute_residual", &compute_residual, py::arg("model"), py::arg("data"),
          py::arg("window"));
    m.def("project_modal", &project_modal, py::arg("decomposition"), py::arg("residual"));
    m.def("compute_innovation", &compute_innovation, py::arg("residual"), py::arg("modal"));
    m.def("fit_gaussian", &fit_gaussian, py::arg("sequence"));
    m.def("decompose_noise", &decompose_noise, py::arg("model"), py::arg("data"),
          py::arg("window"));
    m.def("confidence_band", &confidence_band, py::arg("model"), py::arg("fits"),
          py::arg("range"), py::arg("k") = 2.0);
    m.def("save_noise", &save_noise, py::arg("noise"), py::arg("path"));
    m.def("load_noise", &load_noise, py::arg("path"));

    // ----- normality heuristic ----------------------------------------------
    py::class_<ShapiroResult>(m, "ShapiroResult")
        .def_readonly("w", &ShapiroResult::w)
        .def_readonly("p", &ShapiroResult::p)
        .def("__repr__", [](const ShapiroResult& r) {
            return "ShapiroResult(w=" + std::to_string(r.w) + ", p=" + std::to_string(r.p) + ")";
        });

    py::class_<NormalityReport>(m, "NormalityReport")
        .def_readonly("model_sizes", &NormalityReport::model_sizes)
        .def_readonly("p_values", &NormalityReport::p_values)
        .def_readonly("means", &NormalityReport::means)
        .def_readonly("medians", &NormalityReport::medians)
        .def_readonly("selected_J", &NormalityReport::selected_J)
        .def_readonly("threshold", &NormalityReport::threshold);

    m.def("shapiro_wilk", &shapiro_wilk, py::arg("sample"));
    m.def("select_min_modes", &select_min_modes, py::arg("modal_sets"),
          py::arg("threshold") = 0.05, py::arg("test_imaginary") = false,
          py::arg("subsample_seed") = 0);
    m.def("save_normality", &save_normality, py::arg("report"), py::arg("path"));
    m.def("load_normality", &load_normality, py::arg("path"));

    // ----- simulators ---------------------------------------------------------
    py::class_<LinearModalConfig>(m, "LinearModalConfig")
        .def(py::init<>())
        .def_readwrite("J_true", &LinearModalConfig::J_true)
        .def_readwrite("n", &LinearModalConfig::n)
        .def_readwrite("noise_std", &LinearModalConfig::noise_std)
        .def_readwrite("n_steps", &LinearModalConfig::n_steps)
        .def_readwrite("seed", &LinearModalConfig::seed);

    py::class_<LinearGroundTruth>(m, "LinearGroundTruth")
        .def_readonly("modes", &LinearGroundTruth::modes)
        .def_readonly("eigenvalues", &LinearGroundTruth::eigenvalues);

    py::class_<AnharmonicConfig>(m, "AnharmonicConfig")
        .def(py::init<>())
        .def_readwrite("n_osc", &AnharmonicConfig::n_osc)
        .def_readwrite("dt", &AnharmonicConfig::dt)
        .def_readwrite("t_final", &AnharmonicConfig::t_final)
        .def_readwrite("coupling_c", &AnharmonicConfig::coupling_c)
        .def_readwrite("lambda_exp", &AnharmonicConfig::lambda_exp)
        .def_readwrite("noise_std", &AnharmonicConfig::noise_std)
        .def_readwrite("seed", &AnharmonicConfig::seed)
        .def("n_steps", &AnharmonicConfig::n_steps);

    py::class_<KuramotoConfig>(m, "KuramotoConfig")
        .def(py::init<>())
        .def_readwrite("n_osc", &KuramotoConfig::n_osc)
        .def_readwrite("dt", &KuramotoConfig::dt)
        .def_readwrite("t_final", &KuramotoConfig::t_final)
        .def_readwrite("K", &KuramotoConfig::K)
        .def_readwrite("zeta_std", &KuramotoConfig::zeta_std)
        .def_readwrite("xi_var_param", &KuramotoConfig::xi_var_param)
        .def_readwrite("omega_range", &KuramotoConfig::omega_range)
        .def_readwrite("seed", &KuramotoConfig::seed)
        .def("n_steps", &KuramotoConfig::n_steps);

    m.def("simulate_linear_modal", &simulate_linear_modal, py::arg("config"));
    m.def("simulate_anharmonic", &simulate_anharmonic, py::arg("config"));
    m.def("simulate_kuramoto", &simulate_kuramoto, py::arg("config"));
    m.def("kuramoto_zeta", &kuramoto_zeta, py::arg("config"));

    // ----- metrics ------------------------------------------------------------
    m.def("geodesic_error", &geodesic_error, py::arg("theta"), py::arg("phi"),
          py::arg("period"));
    m.def("euclidean_error", &euclidean_error, py::arg("x"), py::arg("x_hat"));
    m.def("true_geodesic", &true_geodesic, py::arg("a"), py::arg("b"), py::arg("period"));
    m.def("residence_time", &residence_time, py::arg("theta"), py::arg("phi"),
          py::arg("sigma"), py::arg("period"));
    m.def("residence_time_linear", &residence_time_linear, py::arg("x"), py::arg("x_rom"),
          py::arg("sigma"));
    m.def("eigenvalue_discrepancy", &eigenvalue_discrepancy, py::arg("truth"),
          py::arg("computed"));

    // ----- pipeline -------------------------------------------------------------
    py::enum_<SystemKind>(m, "SystemKind")
        .value("linear_modal", SystemKind::linear_modal)
        .value("anharmonic", SystemKind::anharmonic)
        .value("kuramoto", SystemKind::kuramoto)
        .value("external_csv", SystemKind::external_csv);

    py::enum_<AngleHandling>(m, "AngleHandling")
        .value("raw", AngleHandling::raw)
        .value("complexify", AngleHandling::complexify);

    py::enum_<Stage>(m, "Stage")
        .value("simulate", Stage::simulate)
        .value("embed", Stage::embed)
        .value("decompose", Stage::decompose)
        .value("rom", Stage::rom)
        .value("noise", Stage::noise)
        .value("heuristic", Stage::heuristic)
        .value("metrics", Stage::metrics)
        .value("pipeline", Stage::pipeline);

    py::class_<ExperimentConfig>(m, "ExperimentConfig")
        .def(py::init<>())
        .def_readwrite("system", &ExperimentConfig::system)
        .def_readwrite("linear", &ExperimentConfig::linear)
        .def_readwrite("anharmonic", &ExperimentConfig::anharmonic)
        .def_readwrite("kuramoto", &ExperimentConfig::kuramoto)
        .def_readwrite("external_csv", &ExperimentConfig::external_csv)
        .def_readwrite("delay", &ExperimentConfig::delay)
        .def_readwrite("mode_sweep", &ExperimentConfig::mode_sweep)
        .def_readwrite("train_window", &ExperimentConfig::train_window)
        .def_readwrite("noise_window", &ExperimentConfig::noise_window)
        .def_readwrite("dmd_rank", &ExperimentConfig::dmd_rank)
        .def_readwrite("band_k", &ExperimentConfig::band_k)
        .def_readwrite("angle_handling", &ExperimentConfig::angle_handling)
        .def_readwrite("seed", &ExperimentConfig::seed)
        .def_readwrite("output_dir", &ExperimentConfig::output_dir)
        .def("validate", &ExperimentConfig::validate)
        .def("resolved_seed", &ExperimentConfig::resolved_seed);

    py::class_<MetricRow>(m, "MetricRow")
        .def_readonly("modes_used", &MetricRow::modes_used)
        .def_readonly("coordinate", &MetricRow::coordinate)
        .def_readonly("error", &MetricRow::error)
        .def_readonly("residence", &MetricRow::residence);

    py::class_<PipelineResult>(m, "PipelineResult")
        .def_readonly("run_dir", &PipelineResult::run_dir)
        .def_readonly("raw", &PipelineResult::raw)
        .def_readonly("prepared", &PipelineResult::prepared)
        .def_readonly("ground_truth", &PipelineResult::ground_truth)
        .def_readonly("decomposition", &PipelineResult::decomposition)
        .def_readonly("mode_sweep", &PipelineResult::mode_sweep)
        .def_readonly("models", &PipelineResult::models)
        .def_readonly("noises", &PipelineResult::noises)
        .def_readonly("normality", &PipelineResult::normality)
        .def_readonly("metrics", &PipelineResult::metrics)
        .def_readonly("eigenvalue_discrepancies", &PipelineResult::eigenvalue_discrepancies);

    m.def("load_experiment_config", &load_experiment_config, py::arg("path"));
    m.def("config_canonical_json", &config_canonical_json, py::arg("config"));
    m.def("run_id", &run_id, py::arg("config"));
    m.def("run_pipeline", &run_pipeline, py::arg("config"), py::arg("stage") = Stage::pipeline);
    m.def("normal_quantile", &normal_quantile, py::arg("p"));
    m.def("emit_qq_data", &emit_qq_data, py::arg("sample"));
}
