#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "loglab/concavity.hpp"
#include "loglab/grid.hpp"
#include "loglab/reactions.hpp"
#include "loglab/solver.hpp"

namespace loglab {

// Thrown for malformed or inconsistent experiment configurations.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct TransformSpec {
    Transform transform = Transform::log();
    std::optional<Verdict> expect;
};

struct BGrid {
    double lo = 0.35;
    double hi = 4.0;
    int points = 20;

    std::vector<double> values() const;  // logarithmically spaced, increasing
};

struct Tolerances {
    double newton = 1e-10;
    double eigen = 1e-13;
    double quadrature = 1e-12;
    double m_of_b = 1e-12;
    double limit_error = 0.02;
    double field_error = 0.01;
    double residual_factor = 10.0;  // bounds of the form factor * h^2
    double energy_factor = 5.0;     // bounds of the form factor * h^2 * scale
};

struct ExperimentConfig {
    std::string experiment;
    std::optional<Domain> domain;
    std::optional<Reaction> reaction;
    std::vector<int> resolutions;
    std::vector<double> q_schedule;
    std::optional<SigmaRule> sigma_rule;
    std::vector<TransformSpec> transforms;
    std::vector<double> alphas;
    std::optional<BGrid> b_grid;
    std::vector<double> levels;  // fractions of sup u
    std::size_t sample_pairs = 2000;
    std::optional<std::uint64_t> seed;
    std::string field_source = "solve";  // solve | tensor | oned | gausson
    Tolerances tolerances;
    ConcavityOptions concavity;
    std::string output_dir = "out";
};

const std::vector<std::string>& experiment_names();

// Strict parsing: unknown keys, wrong types and failed invariants raise ConfigError.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);
std::string serialize_config(const ExperimentConfig& config);  // canonical, stable-ordered JSON

void validate(const ExperimentConfig& config);

// FNV-1a over the canonical serialization without output_dir, as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

}  // namespace loglab
