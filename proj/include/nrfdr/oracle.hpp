#pragma once

#include "nrfdr/core.hpp"
#include "nrfdr/null_model.hpp"
#include "nrfdr/region.hpp"

#include <Eigen/Dense>

namespace nrfdr {

/// Known two-group mixture: nulls are standard normal, non-nulls are
/// N(mu1, sigma1) with weight 1 - pi0.
struct MixtureSpec {
    double pi0;
    Eigen::VectorXd mu1;
    Eigen::MatrixXd sigma1;

    void validate() const;
    int d() const { return static_cast<int>(mu1.size()); }
};

/// Posterior null probability pi0 f0(z) / (pi0 f0(z) + (1-pi0) f1(z)),
/// computed in log space.
double true_lfdr(const MixtureSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& z);

/// Oracle rule: sort hypotheses by true Lfdr ascending; each prefix k is
/// realized as the likelihood-ratio level set through the k-th point, its
/// null mass estimated on the shared Monte-Carlo pool; reject the largest
/// prefix with pi0 F0(Omega_k) / (k/n) <= q.
RejectionOutcome oracle_procedure(const ZMatrix& z, double q,
                                  const MixtureSpec& spec,
                                  const NullSamplePool& pool);

/// The level-set region selected by the oracle run (empty if it rejected
/// nothing): useful for membership checks and plots.
Region oracle_region(const ZMatrix& z, double q, const MixtureSpec& spec,
                     const NullSamplePool& pool);

}  // namespace nrfdr
