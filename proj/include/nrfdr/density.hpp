#pragma once

#include <Eigen/Dense>

#include <memory>

namespace nrfdr {

/// Log density of the standard d-variate normal at z.
double log_standard_normal(const Eigen::Ref<const Eigen::VectorXd>& z);

/// A probability density on R^d evaluated in log space.
class Density {
  public:
    virtual ~Density() = default;
    virtual int dim() const = 0;
    virtual double log_eval(const Eigen::Ref<const Eigen::VectorXd>& z) const = 0;
};

/// Multivariate normal N(mean, cov), cov symmetric positive definite.
class GaussianDensity : public Density {
  public:
    GaussianDensity(Eigen::VectorXd mean, const Eigen::MatrixXd& cov);

    int dim() const override { return static_cast<int>(mean_.size()); }
    double log_eval(const Eigen::Ref<const Eigen::VectorXd>& z) const override;

    const Eigen::VectorXd& mean() const { return mean_; }
    const Eigen::MatrixXd& chol_factor() const { return chol_; }

  private:
    Eigen::VectorXd mean_;
    Eigen::MatrixXd chol_;  // lower triangular
    double log_norm_const_;
};

}  // namespace nrfdr
