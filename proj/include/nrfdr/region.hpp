#pragma once

#include "nrfdr/density.hpp"

#include <Eigen/Dense>

#include <memory>
#include <variant>
#include <vector>

namespace nrfdr {

/// Stage predicate: ||z|| > lambda.
struct BallComplement {
    double lambda;
};

/// Stage predicate: density(z) / f0(z) > threshold, with f0 the standard
/// normal. The defining density is snapshotted; later refits never alter
/// the member set of an existing stage.
struct LikelihoodLevelSet {
    std::shared_ptr<const Density> density;
    double threshold;
    double log_threshold;

    LikelihoodLevelSet(std::shared_ptr<const Density> density_in,
                       double threshold_in);

    /// Builds the stage directly from a log-scale threshold, keeping the
    /// membership comparison bit-exact for thresholds produced in log space.
    static LikelihoodLevelSet from_log_threshold(
        std::shared_ptr<const Density> density_in, double log_threshold_in);
};

using Stage = std::variant<BallComplement, LikelihoodLevelSet>;

bool stage_contains(const Stage& stage, const Eigen::Ref<const Eigen::VectorXd>& z);

/// A monotone union of stages. Membership is the OR over stage predicates,
/// so appending a stage never removes members.
class Region {
  public:
    explicit Region(int d);

    int d() const { return d_; }
    const std::vector<Stage>& stages() const { return stages_; }
    bool empty() const { return stages_.empty(); }

    bool contains(const Eigen::Ref<const Eigen::VectorXd>& z) const;

    /// Returns a new region with the extra stage; this region is unchanged.
    Region extended(Stage stage) const;

  private:
    int d_;
    std::vector<Stage> stages_;
};

}  // namespace nrfdr
