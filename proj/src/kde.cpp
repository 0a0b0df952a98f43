#include "nrfdr/kde.hpp"

#include "nrfdr/core.hpp"

#include <cmath>
#include <string>

namespace nrfdr {

namespace {
constexpr double kLogTwoPi = 1.8378770664093454835606594728112;
}

Eigen::VectorXd kde_bandwidths(const Eigen::Ref<const Eigen::MatrixXd>& points) {
    const Eigen::Index m = points.rows();
    const Eigen::Index d = points.cols();
    if (m < 2) throw InputError("kde_bandwidths: need at least two points");

    const double factor = std::pow(
        4.0 / (static_cast<double>(d + 2) * static_cast<double>(m)),
        1.0 / static_cast<double>(d + 4));

    Eigen::VectorXd h(d);
    const Eigen::RowVectorXd mean = points.colwise().mean();
    for (Eigen::Index j = 0; j < d; ++j) {
        const double ss = (points.col(j).array() - mean(j)).square().sum();
        const double sd = std::sqrt(ss / static_cast<double>(m - 1));
        if (!(sd > 0.0)) {
            throw InputError("kde_bandwidths: column " + std::to_string(j) +
                             " has zero sample variance");
        }
        h(j) = sd * factor;
    }
    return h;
}

ProductKernelDensity::ProductKernelDensity(Eigen::MatrixXd support,
                                           Eigen::VectorXd bandwidths,
                                           double n_ref)
    : support_(std::move(support)),
      bandwidths_(std::move(bandwidths)),
      n_ref_(n_ref) {
    if (support_.rows() < 1) {
        throw InputError("ProductKernelDensity: empty support");
    }
    if (bandwidths_.size() != support_.cols()) {
        throw InputError("ProductKernelDensity: bandwidth dimension mismatch");
    }
    if (!(bandwidths_.array() > 0.0).all()) {
        throw InputError("ProductKernelDensity: bandwidths must be positive");
    }
    if (!(n_ref_ > 0.0)) {
        throw InputError("ProductKernelDensity: n_ref must be positive");
    }
    scaled_support_ = support_.array().rowwise() /
                      bandwidths_.transpose().array();
    const double log_h_prod = bandwidths_.array().log().sum();
    log_norm_const_ = -std::log(n_ref_) - log_h_prod -
                      0.5 * static_cast<double>(support_.cols()) * kLogTwoPi;
}

Eigen::RowVectorXd ProductKernelDensity::scale_query(
    const Eigen::Ref<const Eigen::VectorXd>& z) const {
    if (z.size() != support_.cols()) {
        throw InputError("ProductKernelDensity: query dimension mismatch");
    }
    return (z.array() / bandwidths_.array()).transpose();
}

double ProductKernelDensity::log_eval_scaled(const Eigen::RowVectorXd& scaled,
                                             Eigen::ArrayXd& work) const {
    work = (scaled_support_.rowwise() - scaled).rowwise().squaredNorm().array();
    // Exponents are all <= 0, so the plain sum cannot overflow.
    const double sum = (work * -0.5).exp().sum();
    return std::log(sum) + log_norm_const_;
}

double ProductKernelDensity::log_eval(
    const Eigen::Ref<const Eigen::VectorXd>& z) const {
    Eigen::ArrayXd work;
    return log_eval_scaled(scale_query(z), work);
}

double ProductKernelDensity::eval(
    const Eigen::Ref<const Eigen::VectorXd>& z) const {
    return std::exp(log_eval(z));
}

Eigen::VectorXd ProductKernelDensity::batch_eval(
    const Eigen::Ref<const Eigen::MatrixXd>& points) const {
    if (points.cols() != support_.cols()) {
        throw InputError("ProductKernelDensity: batch dimension mismatch");
    }
    Eigen::VectorXd out(points.rows());
    Eigen::ArrayXd work;
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
        out(i) = std::exp(log_eval_scaled(scale_query(points.row(i).transpose()), work));
    }
    return out;
}

}  // namespace nrfdr
