#include "dosx/cli.hpp"
#include "dosx/errors.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"dosx: disorder-averaged resolvent expansion and density of states"};
    dosx::RunOptions opts;
    std::uint64_t seed = 0, samples = 0;
    app.add_option("mode", opts.mode, "coeffs | resolvent | dos | verify | crosscheck")
        ->required()
        ->check(CLI::IsMember({"coeffs", "resolvent", "dos", "verify", "crosscheck"}));
    app.add_option("--config", opts.config_path, "key = value configuration file")->required();
    auto* seed_opt = app.add_option("--seed", seed, "master seed, overrides sampling.seed");
    auto* samples_opt = app.add_option("--samples", samples, "Monte Carlo sample count, overrides sampling.samples");
    app.add_option("--out", opts.out_dir, "output directory for CSV and JSON artifacts");
    CLI11_PARSE(app, argc, argv);
    if (*seed_opt) opts.seed = seed;
    if (*samples_opt) opts.samples = samples;

    try {
        return dosx::run(opts);
    } catch (const dosx::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
