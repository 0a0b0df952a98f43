#include "nrfdr/nr.hpp"

#include "nrfdr/kde.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <set>

namespace nrfdr {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void validate(const NRConfig& config, double q_prime) {
    if (!(config.q > 0.0 && config.q < 1.0)) {
        throw InputError("nr_procedure: q must lie in (0,1)");
    }
    if (!(q_prime > 0.0 && q_prime < config.q)) {
        throw InputError("nr_procedure: need 0 < q_prime < q");
    }
    if (config.pool_size < 1) {
        throw InputError("nr_procedure: pool_size must be >= 1");
    }
    if (config.refit_batch < 1) {
        throw InputError("nr_procedure: refit_batch must be >= 1");
    }
}

}  // namespace

std::pair<RejectionOutcome, NRTrace> nr_procedure(const ZMatrix& z,
                                                  const NRConfig& config,
                                                  const NullSamplePool& pool) {
    const Eigen::Index n = z.n();
    const int d = static_cast<int>(z.d());
    const double q = config.q;
    const double q_prime = config.q_prime > 0.0 ? config.q_prime : q / 10.0;
    validate(config, q_prime);
    if (pool.d() != d) {
        throw InputError("nr_procedure: pool dimension does not match data");
    }
    const std::size_t max_steps =
        config.max_steps > 0 ? config.max_steps : static_cast<std::size_t>(n);

    NRTrace trace(d);
    trace.q_prime_used = q_prime;
    trace.lambda0 = ball_radius_for_tail(d, q_prime);

    RejectionOutcome outcome;
    outcome.method = "nr";
    outcome.rejected.assign(static_cast<std::size_t>(n), 0);

    // Initial region: the complement of the ball with null mass q'.
    std::vector<std::uint8_t> rejected(static_cast<std::size_t>(n), 0);
    std::size_t rejected_count = 0;
    const double lambda2 = trace.lambda0 * trace.lambda0;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (z.values().row(i).squaredNorm() > lambda2) {
            rejected[static_cast<std::size_t>(i)] = 1;
            ++rejected_count;
        }
    }

    Region region = Region(d).extended(BallComplement{trace.lambda0});
    RegionF0Tracker tracker(pool);
    const double f0_initial = tracker.update(region);
    trace.final_region = region;

    if (rejected_count == 0) {
        trace.empty_initial = true;
        return {outcome, trace};
    }

    const double est_initial =
        f0_initial * static_cast<double>(n) / static_cast<double>(rejected_count);
    trace.steps.push_back({0, -1, std::numeric_limits<double>::quiet_NaN(),
                           est_initial, f0_initial, rejected_count, {}});
    outcome.estimated_fdr_trace.emplace_back(0, est_initial);
    if (est_initial > q) {
        trace.stopped_at_initial = true;
        return {outcome, trace};
    }

    std::vector<std::uint8_t> last_good = rejected;

    // Per-point log likelihood ratios under the current KDE; refreshed at
    // every refit, consumed between refits.
    std::vector<double> log_ratio(static_cast<std::size_t>(n), kNegInf);
    std::vector<double> log_f0_data(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        log_f0_data[static_cast<std::size_t>(i)] =
            log_standard_normal(z.values().row(i).transpose());
    }

    std::shared_ptr<const ProductKernelDensity> density;
    std::size_t rejections_since_fit = config.refit_batch;  // force initial fit
    std::size_t step = 0;
    Eigen::ArrayXd work;

    while (step < max_steps && rejected_count < static_cast<std::size_t>(n)) {
        if (rejections_since_fit >= config.refit_batch) {
            NRRefitRecord refit;
            refit.before_step = step + 1;
            refit.support_indices.reserve(rejected_count);
            Eigen::MatrixXd support(static_cast<Eigen::Index>(rejected_count), d);
            Eigen::Index row = 0;
            for (Eigen::Index i = 0; i < n; ++i) {
                if (rejected[static_cast<std::size_t>(i)]) {
                    refit.support_indices.push_back(static_cast<std::uint32_t>(i));
                    support.row(row++) = z.values().row(i);
                }
            }
            Eigen::VectorXd bw;
            try {
                bw = kde_bandwidths(support);
            } catch (const InputError&) {
                const double h = std::pow(static_cast<double>(rejected_count),
                                          -1.0 / static_cast<double>(d + 4));
                bw = Eigen::VectorXd::Constant(d, h);
                ++trace.kde_fallbacks;
            }
            density = std::make_shared<ProductKernelDensity>(
                std::move(support), std::move(bw), static_cast<double>(n));
            trace.refits.push_back(std::move(refit));
            for (Eigen::Index i = 0; i < n; ++i) {
                const std::size_t idx = static_cast<std::size_t>(i);
                if (rejected[idx]) continue;
                log_ratio[idx] = density->log_eval_scaled(
                                     density->scale_query(z.values().row(i).transpose()),
                                     work) -
                                 log_f0_data[idx];
            }
            rejections_since_fit = 0;
        }

        // Best unrejected point; ties broken by lowest index.
        Eigen::Index best = -1;
        double best_lr = kNegInf;
        for (Eigen::Index i = 0; i < n; ++i) {
            const std::size_t idx = static_cast<std::size_t>(i);
            if (rejected[idx]) continue;
            if (best < 0 || log_ratio[idx] > best_lr) {
                best = i;
                best_lr = log_ratio[idx];
            }
        }
        if (best < 0) break;
        if (!std::isfinite(best_lr)) break;  // KDE underflow everywhere

        region = region.extended(
            LikelihoodLevelSet::from_log_threshold(density, best_lr));
        rejected[static_cast<std::size_t>(best)] = 1;
        ++rejected_count;
        ++rejections_since_fit;
        // The level set is strict, so no other unrejected point can pass it;
        // the sweep guards against floating-point ties only.
        std::vector<std::uint32_t> also;
        for (Eigen::Index i = 0; i < n; ++i) {
            const std::size_t idx = static_cast<std::size_t>(i);
            if (rejected[idx] || log_ratio[idx] <= best_lr) continue;
            rejected[idx] = 1;
            also.push_back(static_cast<std::uint32_t>(i));
            ++rejected_count;
            ++rejections_since_fit;
        }

        const double f0 = tracker.update(region);
        const double est =
            f0 * static_cast<double>(n) / static_cast<double>(rejected_count);
        ++step;
        trace.steps.push_back({step, static_cast<std::ptrdiff_t>(best),
                               std::exp(best_lr), est, f0, rejected_count,
                               std::move(also)});
        outcome.estimated_fdr_trace.emplace_back(step, est);
        trace.final_region = region;

        if (est > q) break;
        last_good = rejected;
        if (step >= max_steps) {
            trace.hit_max_steps = rejected_count < static_cast<std::size_t>(n);
            break;
        }
    }

    outcome.rejected = std::move(last_good);
    return {outcome, trace};
}

std::pair<RejectionOutcome, NRTrace> nr_procedure(const ZMatrix& z,
                                                  const NRConfig& config) {
    const NullSamplePool pool(static_cast<int>(z.d()), config.pool_size,
                              config.seed);
    return nr_procedure(z, config, pool);
}

bool verify_adaptivity(const ZMatrix& z, const NRTrace& trace) {
    // Replay the rejection order independently of the procedure internals.
    std::set<std::uint32_t> rejected_so_far;
    const double lambda2 = trace.lambda0 * trace.lambda0;
    for (Eigen::Index i = 0; i < z.n(); ++i) {
        if (z.values().row(i).squaredNorm() > lambda2) {
            rejected_so_far.insert(static_cast<std::uint32_t>(i));
        }
    }

    const auto audit_refit = [&](const NRRefitRecord& refit) {
        if (refit.support_indices.size() != rejected_so_far.size()) return false;
        for (std::uint32_t idx : refit.support_indices) {
            if (rejected_so_far.count(idx) == 0) return false;
        }
        return true;
    };

    std::size_t next_refit = 0;
    for (const NRStepRecord& rec : trace.steps) {
        while (next_refit < trace.refits.size() &&
               trace.refits[next_refit].before_step <= rec.step) {
            if (!audit_refit(trace.refits[next_refit])) return false;
            ++next_refit;
        }
        if (rec.rejected_index >= 0) {
            rejected_so_far.insert(static_cast<std::uint32_t>(rec.rejected_index));
        }
        for (std::uint32_t idx : rec.also_rejected) {
            rejected_so_far.insert(idx);
        }
    }
    // A refit may trail the last step when the loop stopped before selecting.
    for (; next_refit < trace.refits.size(); ++next_refit) {
        if (!audit_refit(trace.refits[next_refit])) return false;
    }
    return true;
}

}  // namespace nrfdr
