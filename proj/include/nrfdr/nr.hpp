#pragma once

#include "nrfdr/core.hpp"
#include "nrfdr/null_model.hpp"
#include "nrfdr/region.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace nrfdr {

struct NRConfig {
    double q = 0.1;
    double q_prime = 0.0;         // <= 0 means q / 10
    std::size_t pool_size = 100000;
    std::size_t refit_batch = 1;  // rejections between KDE refits
    std::uint64_t seed = 0;
    std::size_t max_steps = 0;    // 0 means n
};

struct NRStepRecord {
    std::size_t step = 0;
    std::ptrdiff_t rejected_index = -1;  // -1 for the initialization record
    double threshold = 0.0;              // f-hat(z*)/f0(z*) defining the stage
    double estimated_fdr = 0.0;
    double f0_estimate = 0.0;
    std::size_t rejected_total = 0;
    std::vector<std::uint32_t> also_rejected;  // extra points swept past the
                                               // threshold (ties); rarely used
};

/// Support set of one KDE refit, recorded for the adaptivity audit.
struct NRRefitRecord {
    std::size_t before_step = 0;  // refit happened before this step index
    std::vector<std::uint32_t> support_indices;
};

struct NRTrace {
    std::vector<NRStepRecord> steps;
    std::vector<NRRefitRecord> refits;
    Region final_region;           // every visited stage, including a violating one
    double lambda0 = 0.0;
    double q_prime_used = 0.0;
    bool empty_initial = false;    // no z-value inside the initial ball complement
    bool stopped_at_initial = false;  // initial estimated FDR already above q
    bool hit_max_steps = false;
    std::size_t kde_fallbacks = 0;  // refits that used the isotropic fallback

    explicit NRTrace(int d) : final_region(d) {}
};

/// Nested-rejection-region procedure. Starting from the ball complement
/// with null mass q', repeatedly fits a KDE to the rejected z-values,
/// extends the region with the likelihood-ratio level set through the best
/// unrejected point, and stops at the first step whose estimated FDR
/// (F0 estimate over rejected fraction) exceeds q. The returned set is the
/// last one whose estimate was still <= q.
std::pair<RejectionOutcome, NRTrace> nr_procedure(const ZMatrix& z,
                                                  const NRConfig& config,
                                                  const NullSamplePool& pool);

/// Same, with a pool built from config.pool_size and config.seed.
std::pair<RejectionOutcome, NRTrace> nr_procedure(const ZMatrix& z,
                                                  const NRConfig& config);

/// Replays the trace and checks that every KDE refit used exactly the
/// z-values rejected before it: the adaptivity discipline of the procedure.
bool verify_adaptivity(const ZMatrix& z, const NRTrace& trace);

}  // namespace nrfdr
