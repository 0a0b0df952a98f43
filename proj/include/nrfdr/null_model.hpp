#pragma once

#include "nrfdr/core.hpp"
#include "nrfdr/region.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace nrfdr {

/// Radius lambda with P(||Z|| > lambda) = q_prime under the standard
/// d-variate normal (chi-squared inverse survival).
double ball_radius_for_tail(int d, double q_prime);

/// Fixed pool of i.i.d. standard normal d-vectors used as a shared
/// Monte-Carlo estimator of F0 over arbitrary regions. Immutable after
/// construction; per-run membership state lives in RegionF0Tracker.
class NullSamplePool {
  public:
    NullSamplePool(int d, std::size_t size, std::uint64_t seed);

    int d() const { return static_cast<int>(samples_.cols()); }
    std::size_t size() const { return static_cast<std::size_t>(samples_.rows()); }
    std::uint64_t seed() const { return seed_; }
    const Eigen::MatrixXd& samples() const { return samples_; }

  private:
    Eigen::MatrixXd samples_;
    std::uint64_t seed_;
};

/// Fraction of pool samples inside the region, recomputed from scratch.
double estimate_f0(const NullSamplePool& pool, const Region& region);

/// Monotone membership cache over one pool for one procedure run.
/// Successive update() calls must pass regions that only grow (each new
/// region extends the previous one by appending stages); samples flip
/// outside -> inside at most once and only not-yet-member samples are
/// retested against the newly appended stages.
class RegionF0Tracker {
  public:
    explicit RegionF0Tracker(const NullSamplePool& pool);

    /// Processes stages appended since the last call; returns the estimate.
    double update(const Region& region);

    double fraction() const;
    std::size_t inside_count() const { return inside_count_; }

  private:
    const NullSamplePool* pool_;
    std::size_t stages_seen_ = 0;
    std::size_t inside_count_ = 0;
    std::vector<std::uint32_t> outside_;       // indices of samples not yet inside
    std::vector<double> norm2_;                // per-sample squared norms
    std::vector<double> cached_log_ratio_;     // parallel to outside_
    const Density* cached_density_ = nullptr;  // density the cache was built for
};

/// Linear transform making the sample correlation of the columns the
/// identity: right-multiplication by D^(-1/2) L^(-T), where the sample
/// correlation factors as L L^T and D holds the column variances.
/// Requires n > d and a nonsingular sample correlation.
ZMatrix whiten(const ZMatrix& z);

}  // namespace nrfdr
