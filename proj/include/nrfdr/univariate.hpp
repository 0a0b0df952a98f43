#pragma once

#include "nrfdr/core.hpp"

#include <Eigen/Dense>

#include <cstddef>

namespace nrfdr {

/// Vector of p-values, all entries in [0,1].
struct PValueVector {
    Eigen::VectorXd values;

    std::size_t size() const { return static_cast<std::size_t>(values.size()); }
};

/// Two-sided p-value of a standard normal z-score: 2 (1 - Phi(|z|)).
double z_to_p_two_sided(double z);

/// Step-down BH at level q: rejects the largest prefix of sorted p-values
/// with p_(j) <= j q / n for every j in the prefix. Ties broken by
/// original index.
RejectionOutcome bh_step_down(const PValueVector& p, double q);

/// Fisher combination across the columns of an n x d p-value matrix:
/// T_i = -2 sum_j log p_ij, combined p = chi-squared(2d) survival at T_i.
/// Zero entries are clamped to 1e-300; the clamp count is reported through
/// `clamped` when non-null.
PValueVector fisher_combine(const Eigen::Ref<const Eigen::MatrixXd>& p,
                            std::size_t* clamped = nullptr);

/// Lowest-slope estimate of the null proportion. With p sorted ascending
/// and slopes S_i = (1 - p_(i)) / (n + 1 - i), stops at the first i with
/// S_i >= S_(i-1) and returns min(n, floor(1/S_i) + 1) / n.
double pi0_lowest_slope(const PValueVector& p);

}  // namespace nrfdr
