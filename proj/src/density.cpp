#include "nrfdr/density.hpp"

#include "nrfdr/core.hpp"

#include <cmath>

namespace nrfdr {

namespace {
constexpr double kLogTwoPi = 1.8378770664093454835606594728112;
}

double log_standard_normal(const Eigen::Ref<const Eigen::VectorXd>& z) {
    return -0.5 * static_cast<double>(z.size()) * kLogTwoPi - 0.5 * z.squaredNorm();
}

GaussianDensity::GaussianDensity(Eigen::VectorXd mean, const Eigen::MatrixXd& cov)
    : mean_(std::move(mean)) {
    if (cov.rows() != cov.cols() || cov.rows() != mean_.size()) {
        throw InputError("GaussianDensity: covariance shape does not match mean");
    }
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success) {
        throw NumericalError("GaussianDensity: covariance is not positive definite");
    }
    chol_ = llt.matrixL();
    double log_det_half = 0.0;
    for (Eigen::Index i = 0; i < chol_.rows(); ++i) {
        log_det_half += std::log(chol_(i, i));
    }
    log_norm_const_ =
        -0.5 * static_cast<double>(mean_.size()) * kLogTwoPi - log_det_half;
}

double GaussianDensity::log_eval(const Eigen::Ref<const Eigen::VectorXd>& z) const {
    if (z.size() != mean_.size()) {
        throw InputError("GaussianDensity::log_eval: dimension mismatch");
    }
    const Eigen::VectorXd w =
        chol_.triangularView<Eigen::Lower>().solve(z - mean_);
    return log_norm_const_ - 0.5 * w.squaredNorm();
}

}  // namespace nrfdr
