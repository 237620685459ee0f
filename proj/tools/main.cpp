// loglab: run one experiment described by a JSON config.
#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"
#include "loglab/experiments.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Numerical experiments for semilinear Dirichlet problems with logarithmic and power nonlinearities"};
    std::string config_path;
    loglab::RunOverrides overrides;
    std::uint64_t seed = 0;
    int resolution = 0;
    std::string out_dir;
    bool strict = false;
    app.add_option("--config", config_path, "Experiment config (JSON)")->required();
    auto* out_opt = app.add_option("--out", out_dir, "Output directory for artifacts");
    auto* seed_opt = app.add_option("--seed", seed, "RNG seed for sampled checks");
    auto* res_opt = app.add_option("--resolution", resolution, "Base grid resolution (nodes per axis)");
    app.add_flag("--strict", strict, "Treat warnings as failures");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : loglab::kExitInvalidConfig;
    }
    if (*out_opt) overrides.out_dir = out_dir;
    if (*seed_opt) overrides.seed = seed;
    if (*res_opt) overrides.resolution = resolution;

    loglab::ExperimentConfig config;
    try {
        config = loglab::apply_overrides(loglab::load_config(config_path), overrides);
    } catch (const loglab::ConfigError& e) {
        std::fprintf(stderr, "invalid config: %s\n", e.what());
        return loglab::kExitInvalidConfig;
    }

    const loglab::RunOutcome outcome = loglab::run(config, strict);
    if (outcome.exit_code == loglab::kExitInvalidConfig) {
        std::fprintf(stderr, "invalid config: %s\n", outcome.error.c_str());
        return outcome.exit_code;
    }
    for (const auto& c : outcome.checks) {
        std::printf("%-4s %-9s %s value=%.6g limit=%.6g\n", c.pass ? "ok" : "FAIL", c.warning ? "warning" : "assert",
                    c.name.c_str(), c.value, c.limit);
    }
    if (!outcome.error.empty()) std::fprintf(stderr, "error: %s\n", outcome.error.c_str());
    std::printf("%s: exit %d, %zu artifacts in %s (config %s)\n", config.experiment.c_str(), outcome.exit_code,
                outcome.artifacts.size(), config.output_dir.c_str(), outcome.config_hash.c_str());
    return outcome.exit_code;
}
