#pragma once

#include "nrfdr/density.hpp"

#include <Eigen/Dense>

namespace nrfdr {

/// Per-dimension bandwidths h_j = sd_j * (4 / ((d+2) m))^(1/(d+4)).
/// Requires m >= 2 and positive sample standard deviation in every column.
Eigen::VectorXd kde_bandwidths(const Eigen::Ref<const Eigen::MatrixXd>& points);

/// Gaussian product-kernel density over a fixed support set.
///
/// eval(y) = (n_ref * prod_j h_j)^-1 * sum_i prod_j phi((y_j - x_ij) / h_j),
/// where n_ref is the normalizing count (it need not equal the support size;
/// procedures that fit on a subset of the data pass the total count).
class ProductKernelDensity : public Density {
  public:
    ProductKernelDensity(Eigen::MatrixXd support, Eigen::VectorXd bandwidths,
                         double n_ref);

    int dim() const override { return static_cast<int>(support_.cols()); }
    Eigen::Index support_size() const { return support_.rows(); }
    const Eigen::MatrixXd& support() const { return support_; }
    const Eigen::VectorXd& bandwidths() const { return bandwidths_; }
    double n_ref() const { return n_ref_; }

    double log_eval(const Eigen::Ref<const Eigen::VectorXd>& z) const override;
    double eval(const Eigen::Ref<const Eigen::VectorXd>& z) const;
    Eigen::VectorXd batch_eval(const Eigen::Ref<const Eigen::MatrixXd>& points) const;

    /// Workspace variant used by the hot loops; `scaled` is z scaled by the
    /// inverse bandwidths (see scale_query) and `work` is resized as needed.
    double log_eval_scaled(const Eigen::RowVectorXd& scaled,
                           Eigen::ArrayXd& work) const;
    Eigen::RowVectorXd scale_query(const Eigen::Ref<const Eigen::VectorXd>& z) const;

  private:
    Eigen::MatrixXd support_;
    Eigen::MatrixXd scaled_support_;  // support with columns divided by h_j
    Eigen::VectorXd bandwidths_;
    double n_ref_;
    double log_norm_const_;
};

}  // namespace nrfdr
