#include "nrfdr/null_model.hpp"

#include "nrfdr/kde.hpp"
#include "nrfdr/rng.hpp"
#include "nrfdr/special.hpp"

#include <cmath>
#include <numeric>

namespace nrfdr {

double ball_radius_for_tail(int d, double q_prime) {
    if (d < 1) throw InputError("ball_radius_for_tail: d must be >= 1");
    if (!(q_prime > 0.0 && q_prime < 1.0)) {
        throw InputError("ball_radius_for_tail: q_prime must lie in (0,1)");
    }
    return std::sqrt(chi_squared_isf(q_prime, d));
}

NullSamplePool::NullSamplePool(int d, std::size_t size, std::uint64_t seed)
    : seed_(seed) {
    if (d < 1) throw InputError("NullSamplePool: d must be >= 1");
    if (size < 1) throw InputError("NullSamplePool: size must be >= 1");
    Rng rng(seed);
    samples_.resize(static_cast<Eigen::Index>(size), d);
    for (Eigen::Index i = 0; i < samples_.rows(); ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            samples_(i, j) = rng.normal();
        }
    }
}

double estimate_f0(const NullSamplePool& pool, const Region& region) {
    if (pool.d() != region.d()) {
        throw InputError("estimate_f0: pool and region dimensions differ");
    }
    std::size_t inside = 0;
    for (Eigen::Index i = 0; i < pool.samples().rows(); ++i) {
        if (region.contains(pool.samples().row(i).transpose())) ++inside;
    }
    return static_cast<double>(inside) / static_cast<double>(pool.size());
}

RegionF0Tracker::RegionF0Tracker(const NullSamplePool& pool) : pool_(&pool) {
    const std::size_t m = pool.size();
    outside_.resize(m);
    std::iota(outside_.begin(), outside_.end(), 0u);
    norm2_.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        norm2_[i] = pool.samples()
                        .row(static_cast<Eigen::Index>(i))
                        .squaredNorm();
    }
}

double RegionF0Tracker::update(const Region& region) {
    if (pool_->d() != region.d()) {
        throw InputError("RegionF0Tracker: pool and region dimensions differ");
    }
    const auto& stages = region.stages();
    if (stages.size() < stages_seen_) {
        throw InputError("RegionF0Tracker: region lost stages; regions must be nested");
    }
    const Eigen::MatrixXd& samples = pool_->samples();

    for (std::size_t si = stages_seen_; si < stages.size(); ++si) {
        const Stage& stage = stages[si];
        std::size_t kept = 0;
        if (const auto* ball = std::get_if<BallComplement>(&stage)) {
            const double lambda2 = ball->lambda * ball->lambda;
            for (std::size_t k = 0; k < outside_.size(); ++k) {
                const std::uint32_t idx = outside_[k];
                if (norm2_[idx] > lambda2) continue;  // captured
                outside_[kept] = idx;
                if (cached_density_ != nullptr) {
                    cached_log_ratio_[kept] = cached_log_ratio_[k];
                }
                ++kept;
            }
        } else {
            const auto& level = std::get<LikelihoodLevelSet>(stage);
            if (cached_density_ != level.density.get()) {
                cached_log_ratio_.resize(outside_.size());
                Eigen::ArrayXd work;
                const auto* kde =
                    dynamic_cast<const ProductKernelDensity*>(level.density.get());
                for (std::size_t k = 0; k < outside_.size(); ++k) {
                    const auto row = samples.row(outside_[k]).transpose();
                    const double log_dens =
                        kde ? kde->log_eval_scaled(kde->scale_query(row), work)
                            : level.density->log_eval(row);
                    cached_log_ratio_[k] = log_dens - log_standard_normal(row);
                }
                cached_density_ = level.density.get();
            }
            for (std::size_t k = 0; k < outside_.size(); ++k) {
                if (cached_log_ratio_[k] > level.log_threshold) continue;  // captured
                outside_[kept] = outside_[k];
                cached_log_ratio_[kept] = cached_log_ratio_[k];
                ++kept;
            }
        }
        outside_.resize(kept);
        if (cached_density_ != nullptr) cached_log_ratio_.resize(kept);
    }
    stages_seen_ = stages.size();
    inside_count_ = pool_->size() - outside_.size();
    return fraction();
}

double RegionF0Tracker::fraction() const {
    return static_cast<double>(inside_count_) / static_cast<double>(pool_->size());
}

ZMatrix whiten(const ZMatrix& z) {
    const Eigen::Index n = z.n();
    const Eigen::Index d = z.d();
    if (n <= d) throw InputError("whiten: need more rows than columns");

    const Eigen::MatrixXd& x = z.values();
    const Eigen::RowVectorXd mean = x.colwise().mean();
    const Eigen::MatrixXd centered = x.rowwise() - mean;
    const Eigen::MatrixXd cov =
        centered.transpose() * centered / static_cast<double>(n - 1);

    Eigen::VectorXd inv_sd(d);
    for (Eigen::Index j = 0; j < d; ++j) {
        const double var = cov(j, j);
        if (!(var > 0.0)) {
            throw NumericalError("whiten: column " + std::to_string(j) +
                                 " has zero variance");
        }
        inv_sd(j) = 1.0 / std::sqrt(var);
    }
    const Eigen::MatrixXd corr =
        inv_sd.asDiagonal() * cov * inv_sd.asDiagonal();

    Eigen::LLT<Eigen::MatrixXd> llt(corr);
    if (llt.info() != Eigen::Success) {
        throw NumericalError("whiten: sample correlation matrix is singular");
    }
    const Eigen::MatrixXd chol = llt.matrixL();
    if (chol.diagonal().minCoeff() < 1e-8) {
        throw NumericalError(
            "whiten: sample correlation matrix is numerically singular");
    }

    // y_i = L^(-1) D^(-1/2) x_i per row.
    Eigen::MatrixXd scaled = x * inv_sd.asDiagonal();
    Eigen::MatrixXd out =
        chol.triangularView<Eigen::Lower>().solve(scaled.transpose()).transpose();
    return ZMatrix(std::move(out));
}

}  // namespace nrfdr
