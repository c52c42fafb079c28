#include "krom/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "json.hpp"
#include "krom/errors.hpp"
#include "krom/metrics.hpp"
#include "krom/serialize.hpp"

namespace krom {

using nlohmann::json;

namespace {

std::string fmt17(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

int stage_rank(Stage s) { return static_cast<int>(s); }

const char* system_name(SystemKind s) {
    switch (s) {
        case SystemKind::linear_modal: return "linear_modal";
        case SystemKind::anharmonic: return "anharmonic";
        case SystemKind::kuramoto: return "kuramoto";
        case SystemKind::external_csv: return "external_csv";
    }
    return "linear_modal";
}

SystemKind system_from(const std::string& s) {
    if (s == "linear_modal") return SystemKind::linear_modal;
    if (s == "anharmonic") return SystemKind::anharmonic;
    if (s == "kuramoto") return SystemKind::kuramoto;
    if (s == "external_csv") return SystemKind::external_csv;
    throw ConfigError("unknown system '" + s + "'");
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open '" + path.string() + "' for writing");
    return out;
}

}  // namespace

void ExperimentConfig::validate() const {
    if (delay < 1) throw ConfigError("delay must be at least 1");
    if (band_k <= 0.0) throw ConfigError("band_k must be positive");
    for (std::size_t i = 1; i < mode_sweep.size(); ++i)
        if (mode_sweep[i] <= mode_sweep[i - 1])
            throw ConfigError("mode_sweep must be strictly ascending");
    for (int j : mode_sweep)
        if (j < 1) throw ConfigError("mode_sweep entries must be positive");
    if (train_window) {
        if (train_window->begin < 0 || train_window->count() < 1)
            throw ConfigError("train_window must be a nonempty range of nonnegative indices");
    }
    if (noise_window) {
        if (noise_window->begin < 0 || noise_window->count() < 2)
            throw ConfigError("noise_window needs at least two nonnegative indices");
    }
    if (dmd_rank && *dmd_rank < 1) throw ConfigError("dmd_rank must be positive");
    switch (system) {
        case SystemKind::linear_modal: linear.validate(); break;
        case SystemKind::anharmonic: anharmonic.validate(); break;
        case SystemKind::kuramoto: kuramoto.validate(); break;
        case SystemKind::external_csv:
            if (external_csv.empty()) throw ConfigError("external_csv path missing");
            break;
    }
}

std::uint64_t ExperimentConfig::resolved_seed() const {
    if (seed) return *seed;
    switch (system) {
        case SystemKind::linear_modal: return linear.seed;
        case SystemKind::anharmonic: return anharmonic.seed;
        case SystemKind::kuramoto: return kuramoto.seed;
        case SystemKind::external_csv: return 0;
    }
    return 0;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed config JSON: ") + e.what());
    }

    ExperimentConfig cfg;
    try {
        cfg.system = system_from(j.at("system").get<std::string>());
        const json p = j.value("system_params", json::object());
        switch (cfg.system) {
            case SystemKind::linear_modal: {
                cfg.linear.J_true = p.value("J_true", cfg.linear.J_true);
                cfg.linear.n = p.value("n", cfg.linear.n);
                cfg.linear.noise_std = p.value("noise_std", cfg.linear.noise_std);
                cfg.linear.n_steps = p.value("n_steps", cfg.linear.n_steps);
                cfg.linear.seed = p.value("seed", cfg.linear.seed);
                break;
            }
            case SystemKind::anharmonic: {
                cfg.anharmonic.n_osc = p.value("n_osc", cfg.anharmonic.n_osc);
                cfg.anharmonic.dt = p.value("dt", cfg.anharmonic.dt);
                cfg.anharmonic.t_final = p.value("t_final", cfg.anharmonic.t_final);
                cfg.anharmonic.coupling_c = p.value("coupling_c", cfg.anharmonic.coupling_c);
                cfg.anharmonic.lambda_exp = p.value("lambda_exp", cfg.anharmonic.lambda_exp);
                cfg.anharmonic.noise_std = p.value("noise_std", cfg.anharmonic.noise_std);
                cfg.anharmonic.seed = p.value("seed", cfg.anharmonic.seed);
                break;
            }
            case SystemKind::kuramoto: {
                cfg.kuramoto.n_osc = p.value("n_osc", cfg.kuramoto.n_osc);
                cfg.kuramoto.dt = p.value("dt", cfg.kuramoto.dt);
                cfg.kuramoto.t_final = p.value("t_final", cfg.kuramoto.t_final);
                cfg.kuramoto.K = p.value("K", cfg.kuramoto.K);
                cfg.kuramoto.zeta_std = p.value("zeta_std", cfg.kuramoto.zeta_std);
                cfg.kuramoto.xi_var_param = p.value("xi_var_param", cfg.kuramoto.xi_var_param);
                if (p.contains("omega_range")) {
                    const json& r = p.at("omega_range");
                    cfg.kuramoto.omega_range = {r.at(0).get<double>(), r.at(1).get<double>()};
                }
                cfg.kuramoto.seed = p.value("seed", cfg.kuramoto.seed);
                break;
            }
            case SystemKind::external_csv:
                cfg.external_csv = p.value("path", std::string{});
                break;
        }
        cfg.delay = j.value("delay", 1);
        cfg.mode_sweep = j.value("mode_sweep", std::vector<int>{});
        if (j.contains("train_window") && !j.at("train_window").is_null()) {
            const json& w = j.at("train_window");
            cfg.train_window = IndexRange{w.at(0).get<int>(), w.at(1).get<int>()};
        }
        if (j.contains("noise_window") && !j.at("noise_window").is_null()) {
            const json& w = j.at("noise_window");
            cfg.noise_window = IndexRange{w.at(0).get<int>(), w.at(1).get<int>()};
        }
        if (j.contains("dmd_rank") && !j.at("dmd_rank").is_null())
            cfg.dmd_rank = j.at("dmd_rank").get<int>();
        cfg.band_k = j.value("band_k", 2.0);
        const std::string handling = j.value("angle_handling", std::string("raw"));
        if (handling == "raw")
            cfg.angle_handling = AngleHandling::raw;
        else if (handling == "complexify")
            cfg.angle_handling = AngleHandling::complexify;
        else
            throw ConfigError("angle_handling must be 'raw' or 'complexify'");
        if (j.contains("seed") && !j.at("seed").is_null())
            cfg.seed = j.at("seed").get<std::uint64_t>();
        cfg.output_dir = j.value("output_dir", std::string("out"));
    } catch (const json::exception& e) {
        throw ConfigError(std::string("invalid config: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

std::string config_canonical_json(const ExperimentConfig& cfg) {
    // output_dir is deliberately left out: the same experiment written to two
    // places must produce byte-identical trees.
    json j;
    j["system"] = system_name(cfg.system);
    json p;
    switch (cfg.system) {
        case SystemKind::linear_modal:
            p["J_true"] = cfg.linear.J_true;
            p["n"] = cfg.linear.n;
            p["noise_std"] = cfg.linear.noise_std;
            p["n_steps"] = cfg.linear.n_steps;
            p["seed"] = cfg.linear.seed;
            break;
        case SystemKind::anharmonic:
            p["n_osc"] = cfg.anharmonic.n_osc;
            p["dt"] = cfg.anharmonic.dt;
            p["t_final"] = cfg.anharmonic.t_final;
            p["coupling_c"] = cfg.anharmonic.coupling_c;
            p["lambda_exp"] = cfg.anharmonic.lambda_exp;
            p["noise_std"] = cfg.anharmonic.noise_std;
            p["seed"] = cfg.anharmonic.seed;
            break;
        case SystemKind::kuramoto:
            p["n_osc"] = cfg.kuramoto.n_osc;
            p["dt"] = cfg.kuramoto.dt;
            p["t_final"] = cfg.kuramoto.t_final;
            p["K"] = cfg.kuramoto.K;
            p["zeta_std"] = cfg.kuramoto.zeta_std;
            p["xi_var_param"] = cfg.kuramoto.xi_var_param;
            p["omega_range"] = json::array({cfg.kuramoto.omega_range.first,
                                            cfg.kuramoto.omega_range.second});
            p["seed"] = cfg.kuramoto.seed;
            break;
        case SystemKind::external_csv:
            p["path"] = cfg.external_csv.string();
            break;
    }
    j["system_params"] = p;
    j["delay"] = cfg.delay;
    j["mode_sweep"] = cfg.mode_sweep;
    if (cfg.train_window)
        j["train_window"] = json::array({cfg.train_window->begin, cfg.train_window->end});
    else
        j["train_window"] = nullptr;
    if (cfg.noise_window)
        j["noise_window"] = json::array({cfg.noise_window->begin, cfg.noise_window->end});
    else
        j["noise_window"] = nullptr;
    if (cfg.dmd_rank)
        j["dmd_rank"] = *cfg.dmd_rank;
    else
        j["dmd_rank"] = nullptr;
    j["band_k"] = cfg.band_k;
    j["angle_handling"] = cfg.angle_handling == AngleHandling::raw ? "raw" : "complexify";
    j["seed"] = cfg.resolved_seed();
    return j.dump();
}

std::string run_id(const ExperimentConfig& cfg) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a(config_canonical_json(cfg))));
    return std::string("run-") + buf;
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw ConfigError("quantile argument must lie in (0,1)");

    // Rational approximation (relative error ~1e-9 already), then one Halley
    // step against erfc pins the result well below 1e-9 absolute.
    static constexpr double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                    -2.759285104469687e+02, 1.383577518672690e+02,
                                    -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                    -1.556989798598866e+02, 6.680131188771972e+01,
                                    -1.328068155288572e+01};
    static constexpr double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                    -2.400758277161838e+00, -2.549732539343734e+00,
                                    4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                    2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    double x = 0.0;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }

    const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
    const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(x * x / 2.0);
    x = x - u / (1.0 + x * u / 2.0);
    return x;
}

std::vector<std::pair<double, double>> emit_qq_data(const Eigen::VectorXd& sample) {
    const Eigen::Index n = sample.size();
    if (n < 3) throw ConfigError("QQ data needs at least 3 samples");
    std::vector<double> sorted(sample.begin(), sample.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::pair<double, double>> rows;
    rows.reserve(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        const double pos = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
        rows.emplace_back(normal_quantile(pos), sorted[static_cast<std::size_t>(i)]);
    }
    return rows;
}

namespace {

SnapshotMatrix simulate_for(const ExperimentConfig& cfg, std::optional<LinearGroundTruth>& truth) {
    switch (cfg.system) {
        case SystemKind::linear_modal: {
            LinearModalConfig c = cfg.linear;
            if (cfg.seed) c.seed = *cfg.seed;
            auto [snap, gt] = simulate_linear_modal(c);
            truth = std::move(gt);
            return std::move(snap);
        }
        case SystemKind::anharmonic: {
            AnharmonicConfig c = cfg.anharmonic;
            if (cfg.seed) c.seed = *cfg.seed;
            return simulate_anharmonic(c);
        }
        case SystemKind::kuramoto: {
            KuramotoConfig c = cfg.kuramoto;
            if (cfg.seed) c.seed = *cfg.seed;
            return simulate_kuramoto(c);
        }
        case SystemKind::external_csv: return load_snapshots(cfg.external_csv);
    }
    throw ConfigError("unreachable system kind");
}

// Reconstruction mapped to the representation the raw data lives in: drop
// the lagged blocks, decode complexified angles.
SnapshotMatrix display_reconstruction(const SnapshotMatrix& rec) {
    SnapshotMatrix disp = rec;
    if (disp.representation.kind == RepKind::hankel) disp = unembed_first_block(disp);
    if (disp.representation.kind == RepKind::complexified_angle && disp.period)
        disp = decomplexify_angles(disp);
    return disp;
}

void write_eigenvalue_csv(const KoopmanDecomposition& d, const std::filesystem::path& path) {
    std::ofstream csv = open_out(path);
    csv << "index,re,im,abs,raw_norm\n";
    for (Eigen::Index j = 0; j < d.mode_count(); ++j)
        csv << j << "," << fmt17(d.eigenvalues(j).real()) << "," << fmt17(d.eigenvalues(j).imag())
            << "," << fmt17(std::abs(d.eigenvalues(j))) << "," << fmt17(d.raw_mode_norms(j))
            << "\n";
}

void write_qq_csv(const Eigen::VectorXd& sample, const std::filesystem::path& path) {
    std::ofstream csv = open_out(path);
    csv << "theoretical,sample\n";
    for (const auto& [th, ob] : emit_qq_data(sample))
        csv << fmt17(th) << "," << fmt17(ob) << "\n";
}

}  // namespace

PipelineResult run_pipeline(const ExperimentConfig& cfg, Stage stage) {
    cfg.validate();
    namespace fs = std::filesystem;

    PipelineResult result;
    result.run_dir = cfg.output_dir / run_id(cfg);
    fs::create_directories(result.run_dir / "snapshots");
    std::vector<std::string> artifacts;

    result.raw = simulate_for(cfg, result.ground_truth);
    save_snapshots(result.raw, result.run_dir / "snapshots" / "raw.csv");
    artifacts.emplace_back("snapshots/raw.csv");
    artifacts.emplace_back("snapshots/raw.manifest.json");

    const auto done = [&](Stage reached) {
        json manifest;
        manifest["run_id"] = run_id(cfg);
        manifest["config"] = json::parse(config_canonical_json(cfg));
        manifest["stage"] = stage_rank(reached);
        manifest["library"] = "krom 0.1.0";
        std::sort(artifacts.begin(), artifacts.end());
        manifest["artifacts"] = artifacts;
        std::ofstream out = open_out(result.run_dir / "manifest.json");
        out << manifest.dump(2) << "\n";
        return result;
    };

    if (stage_rank(stage) < stage_rank(Stage::embed)) return done(Stage::simulate);

    result.prepared = result.raw;
    if (cfg.angle_handling == AngleHandling::complexify) {
        if (!result.raw.period)
            throw ConfigError("angle_handling=complexify needs data with a known period");
        result.prepared = complexify_angles(result.prepared, *result.raw.period);
    }
    if (cfg.delay > 1) result.prepared = hankel_embed(result.prepared, cfg.delay);
    if (cfg.delay > 1 || cfg.angle_handling == AngleHandling::complexify) {
        save_snapshots(result.prepared, result.run_dir / "snapshots" / "prepared.csv");
        artifacts.emplace_back("snapshots/prepared.csv");
        artifacts.emplace_back("snapshots/prepared.manifest.json");
    }
    if (stage_rank(stage) < stage_rank(Stage::decompose)) return done(Stage::embed);

    const int n_t = result.prepared.n_t();
    const IndexRange train = cfg.train_window.value_or(IndexRange{0, n_t});
    if (train.end > n_t) throw ConfigError("train_window extends past the embedded record");
    const IndexRange eval = cfg.noise_window.value_or(
        train.end < n_t ? IndexRange{train.end, n_t} : IndexRange{0, n_t});
    if (eval.end > n_t) throw ConfigError("noise_window extends past the embedded record");

    // The model never sees data past the train window: the decomposition is
    // computed on the record up to train.end, the coefficients on the train
    // window itself.
    SnapshotMatrix dmd_input = result.prepared;
    if (train.end < n_t) dmd_input.values = result.prepared.values.leftCols(train.end).eval();
    result.decomposition = compute_dmd(dmd_input, cfg.dmd_rank);
    fs::create_directories(result.run_dir / "kmd");
    save_decomposition(result.decomposition, result.run_dir / "kmd" / "decomposition.json");
    write_eigenvalue_csv(result.decomposition, result.run_dir / "kmd" / "eigenvalues.csv");
    artifacts.emplace_back("kmd/decomposition.json");
    artifacts.emplace_back("kmd/eigenvalues.csv");
    if (stage_rank(stage) < stage_rank(Stage::rom)) return done(Stage::decompose);

    if (cfg.mode_sweep.empty()) throw ConfigError("mode_sweep is empty; nothing to fit");
    result.mode_sweep = cfg.mode_sweep;
    // Reconstructions are displayed over the whole raw record; columns past the
    // embedded range are forecasts of the leading block.
    const int n_show = result.raw.n_t();

    const int base_n =
        result.prepared.representation.kind == RepKind::hankel
            ? result.prepared.representation.base_n_obs
            : result.prepared.n_obs();

    for (int J : cfg.mode_sweep) {
        const fs::path rom_dir = result.run_dir / "roms" / ("J" + std::to_string(J));
        fs::create_directories(rom_dir);
        const std::string rel = "roms/J" + std::to_string(J) + "/";

        const KoopmanDecomposition trunc = truncate(result.decomposition, J);
        ReducedOrderModel model = fit_coefficients(trunc, result.prepared, train);
        save_rom(model, rom_dir / "rom.json");
        write_eigenvalue_csv(model.decomposition, rom_dir / "eigenvalues.csv");
        artifacts.push_back(rel + "rom.json");
        artifacts.push_back(rel + "eigenvalues.csv");

        if (stage_rank(stage) >= stage_rank(Stage::noise)) {
            NoiseDecomposition noise = decompose_noise(model, result.prepared, eval);
            save_noise(noise, rom_dir / "noise.json");
            artifacts.push_back(rel + "noise.json");
            artifacts.push_back(rel + "noise.residual.csv");
            artifacts.push_back(rel + "noise.modal.csv");
            artifacts.push_back(rel + "noise.innovation.csv");

            const ConfidenceBand band =
                confidence_band(model, noise.gaussian_fits, {0, n_show}, cfg.band_k);
            const SnapshotMatrix disp = display_reconstruction(reconstruct(model, {0, n_show}));

            {
                std::ofstream csv = open_out(rom_dir / "band.csv");
                csv << "t";
                for (int i = 0; i < base_n; ++i) {
                    const std::string& nm = result.raw.coord_names[static_cast<std::size_t>(i)];
                    csv << "," << nm << "_center," << nm << "_lo," << nm << "_hi";
                }
                csv << "\n";
                for (int t = 0; t < n_show; ++t) {
                    csv << fmt17(result.raw.t0 + t * result.raw.dt);
                    for (int i = 0; i < base_n; ++i)
                        csv << "," << fmt17(band.center(i, t)) << ","
                            << fmt17(band.center(i, t) - band.half_width(i)) << ","
                            << fmt17(band.center(i, t) + band.half_width(i));
                    csv << "\n";
                }
            }
            artifacts.push_back(rel + "band.csv");

            {
                std::ofstream csv = open_out(rom_dir / "trace.csv");
                csv << "t";
                for (int i = 0; i < base_n; ++i) {
                    const std::string& nm = result.raw.coord_names[static_cast<std::size_t>(i)];
                    csv << "," << nm << "_true," << nm << "_rom," << nm << "_lo," << nm << "_hi";
                }
                csv << "\n";
                for (int t = 0; t < n_show; ++t) {
                    csv << fmt17(result.raw.t0 + t * result.raw.dt);
                    for (int i = 0; i < base_n; ++i)
                        csv << "," << fmt17(result.raw.values(i, t).real()) << ","
                            << fmt17(disp.values(i, t).real()) << ","
                            << fmt17(band.center(i, t) - band.half_width(i)) << ","
                            << fmt17(band.center(i, t) + band.half_width(i));
                    csv << "\n";
                }
            }
            artifacts.push_back(rel + "trace.csv");

            write_qq_csv(noise.modal.row(0).real().transpose(), rom_dir / "qq.csv");
            artifacts.push_back(rel + "qq.csv");

            result.noises.push_back(std::move(noise));
        }
        result.models.push_back(std::move(model));
    }
    if (stage_rank(stage) < stage_rank(Stage::heuristic)) return done(stage);

    {
        std::vector<std::pair<int, Eigen::MatrixXcd>> modal_sets;
        modal_sets.reserve(result.noises.size());
        for (std::size_t k = 0; k < result.noises.size(); ++k)
            modal_sets.emplace_back(result.mode_sweep[k],
                                    result.noises[k].modal.topRows(base_n));
        result.normality = select_min_modes(modal_sets, 0.05, false, cfg.resolved_seed());
        save_normality(result.normality, result.run_dir / "normality.json");
        artifacts.emplace_back("normality.json");
    }
    if (stage_rank(stage) < stage_rank(Stage::metrics)) return done(Stage::heuristic);

    {
        const double* period = result.raw.period ? &*result.raw.period : nullptr;
        for (std::size_t k = 0; k < result.models.size(); ++k) {
            const int J = result.mode_sweep[k];
            const NoiseDecomposition& noise = result.noises[k];
            const bool complexified =
                result.prepared.representation.kind == RepKind::complexified_angle ||
                result.prepared.representation.base_kind == RepKind::complexified_angle;

            // Errors judge the reconstruction over the embedded record; the
            // residence check also covers the forecast tail, with the band
            // centered on the expected prediction (deterministic trace plus
            // the modal-noise mean).
            SnapshotMatrix first = reconstruct(result.models[k], {0, n_show});
            if (first.representation.kind == RepKind::hankel) first = unembed_first_block(first);
            SnapshotMatrix centered = first;
            for (int i = 0; i < base_n; ++i) {
                const GaussianFit& g = noise.gaussian_fits[static_cast<std::size_t>(i)];
                centered.values.row(i).array() += std::complex<double>(g.mean_re, g.mean_im);
            }
            const SnapshotMatrix disp =
                first.representation.kind == RepKind::complexified_angle && first.period
                    ? decomplexify_angles(first)
                    : first;
            const SnapshotMatrix disp_centered =
                centered.representation.kind == RepKind::complexified_angle && centered.period
                    ? decomplexify_angles(centered)
                    : centered;

            for (int i = 0; i < base_n; ++i) {
                const GaussianFit& g = noise.gaussian_fits[static_cast<std::size_t>(i)];
                const double sigma = complexified ? g.pooled_std() : g.std_re;
                MetricRow row;
                row.modes_used = J;
                row.coordinate = result.raw.coord_names[static_cast<std::size_t>(i)];
                if (period) {
                    const Eigen::VectorXd truth =
                        result.raw.values.row(i).head(n_t).real().transpose();
                    const Eigen::VectorXd rom = disp.values.row(i).head(n_t).real().transpose();
                    row.error = geodesic_error(truth, rom, *period);
                    row.residence = residence_time(result.raw.values.row(i).real().transpose(),
                                                   disp_centered.values.row(i).real().transpose(),
                                                   sigma, *period);
                } else {
                    const Eigen::VectorXcd truth = result.raw.values.row(i).head(n_t).transpose();
                    const Eigen::VectorXcd rom = disp.values.row(i).head(n_t).transpose();
                    row.error = euclidean_error(truth, rom);
                    row.residence = residence_time_linear(
                        result.raw.values.row(i).real().transpose(),
                        disp_centered.values.row(i).real().transpose(), sigma);
                }
                result.metrics.push_back(std::move(row));
            }
            if (result.ground_truth)
                result.eigenvalue_discrepancies.emplace_back(
                    J, eigenvalue_discrepancy(result.ground_truth->eigenvalues,
                                              result.models[k].decomposition.eigenvalues));
        }

        std::ofstream csv = open_out(result.run_dir / "metrics.csv");
        csv << "modes_used,coordinate,error,residence\n";
        for (const MetricRow& row : result.metrics)
            csv << row.modes_used << "," << row.coordinate << "," << fmt17(row.error) << ","
                << fmt17(row.residence) << "\n";
        artifacts.emplace_back("metrics.csv");

        if (result.ground_truth) {
            std::ofstream disc = open_out(result.run_dir / "kmd" / "eigen_discrepancy.csv");
            disc << "modes_used,discrepancy\n";
            for (const auto& [J, v] : result.eigenvalue_discrepancies)
                disc << J << "," << fmt17(v) << "\n";
            artifacts.emplace_back("kmd/eigen_discrepancy.csv");
        }
    }

    return done(stage);
}

}  // namespace krom
