#pragma once

#include "nrfdr/core.hpp"

#include <Eigen/Dense>

namespace nrfdr {

/// Estimated local false discovery rates, clamped to [0,1].
struct LfdrVector {
    Eigen::VectorXd values;
    double pi0_used = 1.0;
};

/// Lfdr_i = min(1, pi0 f0(z_i) / f-hat(z_i)) with f-hat a full-data KDE
/// (bandwidth rule, normalizer n). pi0 in [0,1]; pi0 = 0 gives all zeros.
LfdrVector lfdr_estimate(const ZMatrix& z, double pi0);

/// SC baseline: sort estimated Lfdr ascending and reject the largest
/// prefix whose running mean stays at or below q.
RejectionOutcome sc_procedure(const ZMatrix& z, double q, double pi0);

/// Threshold rule alone, for callers that already hold Lfdr values.
RejectionOutcome sc_threshold(const LfdrVector& lfdr, double q);

}  // namespace nrfdr
