#pragma once

#include "nrfdr/core.hpp"
#include "nrfdr/nr.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>

namespace nrfdr {

enum class AnalyzeMethod { Nr, Sc, Fisher, Bh1d };

AnalyzeMethod parse_analyze_method(const std::string& name);
std::string analyze_method_name(AnalyzeMethod method);

struct AnalyzeOptions {
    AnalyzeMethod method = AnalyzeMethod::Nr;
    double q = 0.1;
    bool whiten = false;
    std::optional<double> pi0;       // explicit null proportion for sc
    bool pi0_lowest_slope = false;   // estimate pi0 as the per-column minimum
    std::uint64_t seed = 0;
    std::size_t pool_size = 100000;
    double q_prime = 0.0;  // <= 0 means q / 10
    int column = -1;       // bh1d column on multi-column data
};

/// Per-row score column of the rejection CSV:
///   sc     -> estimated Lfdr
///   fisher -> combined p-value
///   bh1d   -> two-sided p-value
///   nr     -> rejection step index (-1 when accepted)
struct AnalyzeResult {
    RejectionOutcome outcome;
    Eigen::VectorXd scores;
    double pi0_used = 0.0;          // sc only
    std::optional<NRTrace> trace;   // nr only
};

AnalyzeResult run_analyze(const ZMatrix& z, const AnalyzeOptions& options);

}  // namespace nrfdr
