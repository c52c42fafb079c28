#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "krom/errors.hpp"
#include "krom/pipeline.hpp"

namespace {

struct StageEntry {
    const char* name;
    const char* help;
    krom::Stage stage;
};

constexpr StageEntry kStages[] = {
    {"simulate", "generate (or copy) the snapshot data", krom::Stage::simulate},
    {"embed", "simulate, then apply angle handling and delay embedding", krom::Stage::embed},
    {"decompose", "embed, then compute the spectral decomposition", krom::Stage::decompose},
    {"rom", "decompose, then fit the reduced models of the sweep", krom::Stage::rom},
    {"noise", "rom, then split residuals and emit confidence bands", krom::Stage::noise},
    {"heuristic", "noise, then run the minimum-mode normality selection", krom::Stage::heuristic},
    {"metrics", "heuristic, then write per-coordinate error metrics", krom::Stage::metrics},
    {"pipeline", "run everything", krom::Stage::pipeline},
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Koopman mode decomposition and reduced order modeling"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::vector<int> modes;
    std::optional<int> delay;
    std::optional<std::string> out_dir;

    for (const StageEntry& entry : kStages) {
        CLI::App* sub = app.add_subcommand(entry.name, entry.help);
        sub->add_option("--config", config_path, "experiment config JSON")->required();
        sub->add_option("--seed", seed, "override the simulator seed");
        sub->add_option("--modes", modes, "override the mode sweep (comma separated)")
            ->delimiter(',');
        sub->add_option("--delay", delay, "override the delay embedding depth");
        sub->add_option("--out", out_dir, "override the output directory");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    krom::Stage stage = krom::Stage::pipeline;
    for (const StageEntry& entry : kStages)
        if (app.got_subcommand(entry.name)) stage = entry.stage;

    try {
        krom::ExperimentConfig cfg = krom::load_experiment_config(config_path);
        if (seed) cfg.seed = *seed;
        if (!modes.empty()) cfg.mode_sweep = modes;
        if (delay) cfg.delay = *delay;
        if (out_dir) cfg.output_dir = *out_dir;
        cfg.validate();

        const krom::PipelineResult result = krom::run_pipeline(cfg, stage);

        std::cout << "run " << result.run_dir.string() << "\n";
        std::cout << "data " << result.raw.n_obs() << "x" << result.raw.n_t() << "\n";
        if (static_cast<int>(stage) >= static_cast<int>(krom::Stage::decompose))
            std::cout << "rank " << result.decomposition.rank_used << "\n";
        if (static_cast<int>(stage) >= static_cast<int>(krom::Stage::heuristic)) {
            if (result.normality.selected_J)
                std::cout << "selected_J " << *result.normality.selected_J << "\n";
            else
                std::cout << "selected_J none\n";
        }
        return 0;
    } catch (const krom::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const krom::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 3;
    }
}
