#include "nrfdr/core.hpp"

#include <algorithm>

namespace nrfdr {

ZMatrix::ZMatrix(Eigen::MatrixXd values) : values_(std::move(values)) {
    if (values_.rows() < 1 || values_.cols() < 1) {
        throw InputError("ZMatrix: need at least one row and one column");
    }
    if (!values_.allFinite()) {
        throw InputError("ZMatrix: entries must be finite");
    }
}

std::size_t HypothesisLabels::null_count() const {
    return static_cast<std::size_t>(
        std::count(theta.begin(), theta.end(), std::uint8_t{0}));
}

std::size_t RejectionOutcome::rejection_count() const {
    return static_cast<std::size_t>(
        std::count_if(rejected.begin(), rejected.end(),
                      [](std::uint8_t r) { return r != 0; }));
}

ConfusionCounts confusion_counts(const HypothesisLabels& labels,
                                 const RejectionOutcome& outcome) {
    if (labels.size() != outcome.size()) {
        throw InputError("confusion_counts: labels and outcome lengths differ");
    }
    ConfusionCounts c;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const bool non_null = labels.theta[i] != 0;
        const bool rej = outcome.rejected[i] != 0;
        if (non_null) {
            rej ? ++c.s : ++c.t;
        } else {
            rej ? ++c.v : ++c.u;
        }
    }
    return c;
}

double fdp(const ConfusionCounts& counts) {
    const std::size_t r = counts.rejections();
    return static_cast<double>(counts.v) / static_cast<double>(std::max<std::size_t>(r, 1));
}

double fnp(const ConfusionCounts& counts, std::size_t n) {
    if (counts.total() != n) {
        throw InputError("fnp: counts do not sum to n");
    }
    const std::size_t accepted = n - counts.rejections();
    return static_cast<double>(counts.t) /
           static_cast<double>(std::max<std::size_t>(accepted, 1));
}

}  // namespace nrfdr
