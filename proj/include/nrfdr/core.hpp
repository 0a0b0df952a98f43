#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace nrfdr {

// Bad arguments or malformed caller input.
struct InputError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Malformed data files (CSV, config, trace).
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Numerical failure (singular matrix, non-finite intermediate).
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// n x d matrix of test statistics, one row per hypothesis.
/// Entries must be finite; n >= 1, d >= 1.
class ZMatrix {
  public:
    explicit ZMatrix(Eigen::MatrixXd values);

    const Eigen::MatrixXd& values() const { return values_; }
    Eigen::Index n() const { return values_.rows(); }
    Eigen::Index d() const { return values_.cols(); }

  private:
    Eigen::MatrixXd values_;
};

/// Per-hypothesis significance indicators: 0 = null true, 1 = non-null.
struct HypothesisLabels {
    std::vector<std::uint8_t> theta;

    std::size_t size() const { return theta.size(); }
    std::size_t null_count() const;
};

/// Decisions of one procedure run plus its estimated-FDR trace.
struct RejectionOutcome {
    std::string method;
    std::vector<std::uint8_t> rejected;
    std::vector<std::pair<std::size_t, double>> estimated_fdr_trace;

    std::size_t size() const { return rejected.size(); }
    std::size_t rejection_count() const;
};

/// U/V/T/S classification counts: U+V = #nulls, T+S = #non-nulls.
struct ConfusionCounts {
    std::size_t u = 0;  // null, not rejected
    std::size_t v = 0;  // null, rejected (false discoveries)
    std::size_t t = 0;  // non-null, not rejected (misses)
    std::size_t s = 0;  // non-null, rejected

    std::size_t total() const { return u + v + t + s; }
    std::size_t rejections() const { return v + s; }
};

ConfusionCounts confusion_counts(const HypothesisLabels& labels,
                                 const RejectionOutcome& outcome);

/// False discovery proportion V / max(V+S, 1).
double fdp(const ConfusionCounts& counts);

/// False non-discovery proportion T / max(n - (V+S), 1).
double fnp(const ConfusionCounts& counts, std::size_t n);

}  // namespace nrfdr
