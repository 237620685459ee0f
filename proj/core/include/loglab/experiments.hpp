#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "loglab/config.hpp"

namespace loglab {

enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitInvalidConfig = 2 };

struct RunOverrides {
    std::optional<std::string> out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<int> resolution;
};

// Command-line overrides. A resolution override replaces the base resolution
// and rescales the others so that their spacing ratios are preserved.
ExperimentConfig apply_overrides(ExperimentConfig config, const RunOverrides& overrides);

struct Check {
    std::string name;
    bool pass = false;
    double value = 0.0;
    double limit = 0.0;
    bool warning = false;  // only fatal under --strict
};

struct RunOutcome {
    int exit_code = kExitOk;
    std::string config_hash;
    std::vector<Check> checks;
    std::vector<std::string> artifacts;
    std::string error;
};

// Runs one experiment and writes its artifacts under config.output_dir.
// Exit code 0 iff every assertion passes (and every warning, when strict).
RunOutcome run(const ExperimentConfig& config, bool strict = false);

}  // namespace loglab
