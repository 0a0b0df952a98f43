#pragma once

#include "nrfdr/core.hpp"
#include "nrfdr/oracle.hpp"
#include "nrfdr/rng.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace nrfdr {

/// Simulation grid point. Scenario 1 draws independent coordinates;
/// scenario 2 draws every hypothesis of a replicate from one random
/// correlation matrix. The table2_alternatives variant keeps nulls standard
/// normal and gives only the non-nulls a random covariance (scaled Wishart)
/// with mean vector of length mu_scale.
struct ScenarioConfig {
    int scenario = 1;  // 1 or 2
    std::size_t n = 1000;
    int d = 2;
    double pi0 = 0.8;  // (0,1]; 1 gives pure-null data
    double q = 0.1;
    double q_prime = 0.0;     // <= 0 means q / 1000
    double mu_scale = 2.0;    // per-coordinate non-null mean = mu_scale / sqrt(d)
    std::size_t replicates = 100;
    std::uint64_t seed = 1;
    std::size_t pool_size = 100000;
    std::size_t refit_batch = 1;
    bool table2_alternatives = false;  // scenario 2 only
    int threads = 0;  // 0 means hardware concurrency

    void validate() const;
    double effective_q_prime() const { return q_prime > 0.0 ? q_prime : q / 1000.0; }
};

struct GeneratedReplicate {
    ZMatrix z;
    HypothesisLabels labels;
    MixtureSpec mixture;
};

/// Random correlation matrix, uniform over the space of correlation
/// matrices (vine method: lag-m partial correlations drawn from a symmetric
/// Beta with parameter 1 + (d-1-m)/2, then composed).
Eigen::MatrixXd random_correlation(int d, Rng& rng);
Eigen::MatrixXd random_correlation(int d, std::uint64_t seed);

GeneratedReplicate generate(const ScenarioConfig& config,
                            std::size_t replicate_index);

enum class Method { BhFisher, Sc, Nr, Oracle };

std::string method_name(Method m);
Method parse_method(const std::string& name);

/// One aggregated table row: mean and standard error of FDP and FNP.
struct MetricsRow {
    std::string method;
    std::size_t n = 0;
    int d = 0;
    int scenario = 0;
    double fdr = 0.0;
    double fdr_se = 0.0;
    double fnr = 0.0;
    double fnr_se = 0.0;
    std::size_t replicates = 0;
    std::size_t failures = 0;
    bool degenerate_se = false;  // fewer than two successful replicates
};

std::vector<MetricsRow> run_replicates(const ScenarioConfig& config,
                                       const std::vector<Method>& methods);

/// Injection seam used by run_replicates and by tests: a named procedure
/// run on each generated replicate. The pool pointer is non-null when any
/// procedure in the batch requested one. Procedures with `decorrelate` set
/// receive the replicate transformed by the inverse Cholesky factor of the
/// true covariance (scenario 2); the standard-normal null model is then
/// exact for them, as for the whitened real-data workflow.
struct NamedProcedure {
    std::string name;
    bool needs_pool = false;
    bool decorrelate = false;
    std::function<RejectionOutcome(const GeneratedReplicate&,
                                   const NullSamplePool*)>
        run;
};

std::vector<MetricsRow> run_replicates_with(
    const ScenarioConfig& config, const std::vector<NamedProcedure>& procedures);

/// Non-decreasing deterministic step function on [0,1], b(t) = value of the
/// last jump at or before t, zero before the first jump.
struct StepFunction {
    std::vector<std::pair<double, double>> jumps;  // (time, value)

    double operator()(double t) const;
    double final_value() const { return jumps.empty() ? 0.0 : jumps.back().second; }
    void validate() const;
};

struct Lemma1Result {
    double mean = 0.0;
    double se = 0.0;
    std::size_t sims = 0;
};

/// Monte-Carlo check of the centered-count stopping inequality: draws n0
/// uniform p-values, stops the walk a_t - n0 t at the boundary
/// n t / q - b(t) - n0 t (first order statistic on the event grid, then
/// closed-form linear crossings), and averages a-hat(tau)/tau over sims.
Lemma1Result lemma1_harness(std::size_t n0, double q, const StepFunction& b,
                            std::size_t sims, std::uint64_t seed);

}  // namespace nrfdr
