#pragma once

#include "nrfdr/simulation.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace nrfdr {

/// Flat key/value experiment description. Recognized keys: scenario,
/// n_grid, d_grid, pi0, q, q_prime, mu_scale, replicates, methods, seed,
/// pool_size. Lists are comma separated; '#' starts a comment.
struct ExperimentConfig {
    int scenario = 1;
    std::vector<std::size_t> n_grid;
    std::vector<int> d_grid;
    double pi0 = 0.8;
    double q = 0.1;
    double q_prime = 0.0;  // <= 0 means q / 1000
    double mu_scale = 2.0;
    std::size_t replicates = 0;
    std::vector<Method> methods;
    std::uint64_t seed = 0;
    std::size_t pool_size = 100000;

    void validate() const;
};

ExperimentConfig parse_experiment_config(std::istream& in,
                                         const std::string& name);
ExperimentConfig parse_experiment_config_file(const std::string& path);

/// Canonical text form, parseable by parse_experiment_config; embedded in
/// manifests so a run can be reproduced from its manifest alone.
std::string render_experiment_config(const ExperimentConfig& config);

/// Runs the full grid, one row per (n, d, method).
std::vector<MetricsRow> run_experiment(const ExperimentConfig& config,
                                       int threads = 0);

}  // namespace nrfdr
