#include "nrfdr/region.hpp"

#include "nrfdr/core.hpp"

#include <cmath>

namespace nrfdr {

LikelihoodLevelSet::LikelihoodLevelSet(std::shared_ptr<const Density> density_in,
                                       double threshold_in)
    : density(std::move(density_in)),
      threshold(threshold_in),
      log_threshold(std::log(threshold_in)) {
    if (!density) {
        throw InputError("LikelihoodLevelSet: null density");
    }
    if (!(threshold > 0.0) || !std::isfinite(threshold)) {
        throw InputError("LikelihoodLevelSet: threshold must be positive and finite");
    }
}

LikelihoodLevelSet LikelihoodLevelSet::from_log_threshold(
    std::shared_ptr<const Density> density_in, double log_threshold_in) {
    if (!std::isfinite(log_threshold_in)) {
        throw InputError("LikelihoodLevelSet: log threshold must be finite");
    }
    LikelihoodLevelSet out(std::move(density_in), 1.0);
    out.threshold = std::exp(log_threshold_in);
    out.log_threshold = log_threshold_in;
    return out;
}

bool stage_contains(const Stage& stage,
                    const Eigen::Ref<const Eigen::VectorXd>& z) {
    return std::visit(
        [&](const auto& s) -> bool {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, BallComplement>) {
                return z.squaredNorm() > s.lambda * s.lambda;
            } else {
                return s.density->log_eval(z) - log_standard_normal(z) >
                       s.log_threshold;
            }
        },
        stage);
}

Region::Region(int d) : d_(d) {
    if (d < 1) throw InputError("Region: dimension must be >= 1");
}

bool Region::contains(const Eigen::Ref<const Eigen::VectorXd>& z) const {
    if (z.size() != d_) {
        throw InputError("Region::contains: dimension mismatch");
    }
    for (const Stage& stage : stages_) {
        if (stage_contains(stage, z)) return true;
    }
    return false;
}

Region Region::extended(Stage stage) const {
    if (const auto* ball = std::get_if<BallComplement>(&stage)) {
        if (!(ball->lambda >= 0.0)) {
            throw InputError("Region::extended: lambda must be >= 0");
        }
    } else {
        const auto& level = std::get<LikelihoodLevelSet>(stage);
        if (level.density->dim() != d_) {
            throw InputError("Region::extended: stage dimension mismatch");
        }
    }
    Region out = *this;
    out.stages_.push_back(std::move(stage));
    return out;
}

}  // namespace nrfdr
