#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "krom/kmd.hpp"
#include "krom/modeselect.hpp"
#include "krom/noise.hpp"
#include "krom/rom.hpp"
#include "krom/systems.hpp"

namespace krom {

enum class SystemKind { linear_modal, anharmonic, kuramoto, external_csv };
enum class AngleHandling { raw, complexify };

// Everything one experiment run needs: which system, how it is embedded,
// which model sizes to sweep, and where artifacts land. train_window and
// noise_window index the embedded time axis. The decomposition sees the record
// up to the end of the train window; the coefficient fit uses the train window
// itself. When noise_window is absent the noise split is evaluated on the part
// of the record after the train window, or on the train window itself when
// training used the whole record.
struct ExperimentConfig {
    SystemKind system = SystemKind::linear_modal;
    LinearModalConfig linear;
    AnharmonicConfig anharmonic;
    KuramotoConfig kuramoto;
    std::filesystem::path external_csv;

    int delay = 1;  // 1 = no embedding
    std::vector<int> mode_sweep;
    std::optional<IndexRange> train_window;  // default: full embedded record
    std::optional<IndexRange> noise_window;  // default: rest of record, else train
    std::optional<int> dmd_rank;             // SVD rank cap; default drops tiny singulars
    double band_k = 2.0;
    AngleHandling angle_handling = AngleHandling::raw;
    std::optional<std::uint64_t> seed;  // overrides the system config's seed
    std::filesystem::path output_dir = "out";

    void validate() const;
    std::uint64_t resolved_seed() const;
};

ExperimentConfig load_experiment_config(const std::filesystem::path& path);

// Canonical JSON of the config; also what the run manifest embeds. The run id
// is a hash of this string, so identical configs land in identical
// directories.
std::string config_canonical_json(const ExperimentConfig& cfg);
std::string run_id(const ExperimentConfig& cfg);

// How far the pipeline executes (each stage includes the previous ones).
enum class Stage { simulate, embed, decompose, rom, noise, heuristic, metrics, pipeline };

struct MetricRow {
    int modes_used = 0;
    std::string coordinate;
    double error = 0.0;
    double residence = 0.0;
};

struct PipelineResult {
    std::filesystem::path run_dir;
    SnapshotMatrix raw;       // simulated or loaded data
    SnapshotMatrix prepared;  // after angle handling and delay embedding
    std::optional<LinearGroundTruth> ground_truth;
    KoopmanDecomposition decomposition;
    std::vector<int> mode_sweep;
    std::vector<ReducedOrderModel> models;
    std::vector<NoiseDecomposition> noises;
    NormalityReport normality;
    std::vector<MetricRow> metrics;
    std::vector<std::pair<int, double>> eigenvalue_discrepancies;  // (J, value), truth runs only
};

// Runs the experiment up to `stage` and writes the artifacts produced so far
// under output_dir/<run-id>/: snapshots/, kmd/, roms/J<k>/, metrics.csv,
// normality.json, manifest.json. Rerunning an identical config rewrites
// byte-identical files.
PipelineResult run_pipeline(const ExperimentConfig& cfg, Stage stage = Stage::pipeline);

// Standard-normal quantile (inverse CDF), |error| < 1e-9 over (0,1); rational
// approximation with one Halley refinement of erfc.
double normal_quantile(double p);

// QQ pairs (theoretical quantile at (i - 0.5)/n, i-th order statistic).
std::vector<std::pair<double, double>> emit_qq_data(const Eigen::VectorXd& sample);

}  // namespace krom
