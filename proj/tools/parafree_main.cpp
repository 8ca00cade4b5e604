#include <CLI11.hpp>

#include <iostream>
#include <stdexcept>
#include <string>
#include <utility>

#include "parafree/acceptance.hpp"
#include "parafree/commands.hpp"
#include "parafree/config.hpp"
#include "parafree/parallel.hpp"

int main(int argc, char** argv) {
    CLI::App app{"solver and estimator toolkit for parabolic free boundary problems"};
    app.require_subcommand(1);

    std::string config_path;
    CLI::App* solve = app.add_subcommand("solve", "solve the configured free boundary problem");
    CLI::App* analyze =
        app.add_subcommand("analyze", "estimator tables for a field and its positivity mask");
    CLI::App* ladder =
        app.add_subcommand("ladder", "quadratic approximation ladder and derived tables");
    CLI::App* blowup =
        app.add_subcommand("blowup", "profile and interface fits at configured points");
    for (CLI::App* sub : {solve, analyze, ladder, blowup}) {
        sub->add_option("config", config_path, "run configuration file")->required();
    }

    CLI::App* operators = app.add_subcommand("operators", "operator toolbox");
    operators->require_subcommand(1);
    CLI::App* validate = operators->add_subcommand("validate", "sample the ellipticity checks");
    int samples = 1000;
    unsigned seed = 2026u;
    validate->add_option("config", config_path, "run configuration file")->required();
    validate->add_option("--samples", samples, "matrix pairs to sample")
        ->check(CLI::PositiveNumber);
    validate->add_option("--seed", seed, "sampling seed");

    CLI::App* verify =
        app.add_subcommand("verify", "run the built-in verification suite on its fixtures");
    int h_scale = 1;
    std::string verify_mode;
    verify->add_option("--h-scale", h_scale,
                       "coarsen every fixture grid by this factor (1 or 2)");
    verify->add_option("--mode", verify_mode, "parallel backend: serial or omp");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    const std::pair<const char*, CLI::App*> verbs[] = {
        {"solve", solve}, {"analyze", analyze}, {"ladder", ladder}, {"blowup", blowup}};
    for (const auto& [name, sub] : verbs) {
        if (sub->parsed()) return parafree::run_verb(name, config_path);
    }
    if (validate->parsed()) {
        try {
            const parafree::RunConfig cfg = parafree::load_config(config_path);
            return parafree::cmd_validate_operator(cfg, samples, seed);
        } catch (const parafree::ConfigError& e) {
            std::cerr << "config error: " << e.what() << "\n";
            return 1;
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 2;
        }
    }
    if (verify->parsed()) {
        parafree::AcceptanceOptions opts;
        opts.h_scale = h_scale;
        try {
            if (!verify_mode.empty()) opts.mode = parafree::par::mode_from_name(verify_mode);
            if (h_scale != 1 && h_scale != 2) throw std::invalid_argument("h scale must be 1 or 2");
        } catch (const std::invalid_argument& e) {
            std::cerr << "config error: " << e.what() << "\n";
            return 1;
        }
        try {
            return parafree::cmd_verify(opts);
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 2;
        }
    }
    return 1;
}
