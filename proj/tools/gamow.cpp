#include <cstdio>
#include <exception>
#include <filesystem>
#include <string>

#include "CLI11.hpp"

#include "gamow/gamow.hpp"

namespace {

int exit_code(const gamow::Error& e) {
    switch (e.category()) {
        case gamow::Error::Category::config: return 2;
        case gamow::Error::Category::numerical: return 3;
        case gamow::Error::Category::oracle: return 4;
    }
    return 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Resonance-expansion survival probability for double-barrier structures"};
    app.require_subcommand(1);
    app.set_version_flag("--version", gamow::version);

    std::string run_config;
    std::string run_output;
    auto* run = app.add_subcommand("run", "run a scenario config and write CSV, manifest and plot script");
    run->add_option("config", run_config, "scenario config file")->required()->check(CLI::ExistingFile);
    run->add_option("-o,--output-dir", run_output, "override output_dir from the config");

    std::string sweep_config;
    std::string sweep_output;
    double w_first = 0.0;
    double w_last = 0.0;
    int steps = 0;
    auto* sweep = app.add_subcommand("sweep", "track the lowest resonance across well widths");
    sweep->add_option("config", sweep_config, "base scenario config")->required()->check(CLI::ExistingFile);
    sweep->add_option("--w-first", w_first, "first well width (nm)")->required();
    sweep->add_option("--w-last", w_last, "last well width (nm)")->required();
    sweep->add_option("--steps", steps, "number of widths, at least 2")->required();
    sweep->add_option("-o,--output-dir", sweep_output, "override output_dir from the config");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*run) {
            auto cfg = gamow::load_config(run_config);
            if (!run_output.empty()) cfg.output_dir = run_output;
            const auto report = gamow::run_scenario(cfg);
            for (const auto& f : report.files) std::printf("%s\n", f.string().c_str());
            return 0;
        }
        auto cfg = gamow::load_config(sweep_config);
        if (!sweep_output.empty()) cfg.output_dir = sweep_output;
        const auto rows = gamow::sweep_well_width(cfg, w_first, w_last, steps);
        std::filesystem::create_directories(cfg.output_dir);
        const auto path = cfg.output_dir / "sweep.csv";
        gamow::write_sweep_csv(path, rows);
        std::printf("%s\n", path.string().c_str());
        return 0;
    } catch (const gamow::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_code(e);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
