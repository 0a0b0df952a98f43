#include "nrfdr/oracle.hpp"

#include "nrfdr/density.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <vector>

namespace nrfdr {

void MixtureSpec::validate() const {
    if (!(pi0 > 0.0 && pi0 < 1.0)) {
        throw InputError("MixtureSpec: pi0 must lie in (0,1)");
    }
    if (mu1.size() < 1) throw InputError("MixtureSpec: empty mean");
    if (sigma1.rows() != mu1.size() || sigma1.cols() != mu1.size()) {
        throw InputError("MixtureSpec: covariance shape mismatch");
    }
}

double true_lfdr(const MixtureSpec& spec,
                 const Eigen::Ref<const Eigen::VectorXd>& z) {
    spec.validate();
    const GaussianDensity f1(spec.mu1, spec.sigma1);
    const double log_null = std::log(spec.pi0) + log_standard_normal(z);
    const double log_alt = std::log(1.0 - spec.pi0) + f1.log_eval(z);
    // 1 / (1 + exp(log_alt - log_null)), stable in both directions.
    const double diff = log_alt - log_null;
    if (diff > 0.0) {
        const double e = std::exp(-diff);
        return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(diff));
}

namespace {

struct OracleScan {
    std::vector<Eigen::Index> order;   // data indices, log-ratio descending
    std::vector<double> data_ratio;    // log f1/f0 per data point, in order
    std::vector<double> pool_ratio;    // sorted ascending
    std::vector<double> statistic;     // pi0 F0(Omega_k) / (k/n) for k = 1..n
    std::size_t k_star = 0;            // largest prefix passing the rule
    std::shared_ptr<const GaussianDensity> f1;
};

OracleScan oracle_scan(const ZMatrix& z, double q, const MixtureSpec& spec,
                       const NullSamplePool& pool) {
    spec.validate();
    if (!(q > 0.0 && q < 1.0)) {
        throw InputError("oracle_procedure: q must lie in (0,1)");
    }
    if (pool.d() != z.d() || spec.d() != z.d()) {
        throw InputError("oracle_procedure: dimension mismatch");
    }
    const Eigen::Index n = z.n();

    OracleScan scan;
    scan.f1 = std::make_shared<GaussianDensity>(spec.mu1, spec.sigma1);

    std::vector<double> lr(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto row = z.values().row(i).transpose();
        lr[static_cast<std::size_t>(i)] =
            scan.f1->log_eval(row) - log_standard_normal(row);
    }
    scan.order.resize(static_cast<std::size_t>(n));
    std::iota(scan.order.begin(), scan.order.end(), 0);
    std::stable_sort(scan.order.begin(), scan.order.end(),
                     [&](Eigen::Index a, Eigen::Index b) {
                         return lr[static_cast<std::size_t>(a)] >
                                lr[static_cast<std::size_t>(b)];
                     });
    scan.data_ratio.resize(scan.order.size());
    for (std::size_t k = 0; k < scan.order.size(); ++k) {
        scan.data_ratio[k] = lr[static_cast<std::size_t>(scan.order[k])];
    }

    scan.pool_ratio.resize(pool.size());
    for (Eigen::Index i = 0; i < pool.samples().rows(); ++i) {
        const auto row = pool.samples().row(i).transpose();
        scan.pool_ratio[static_cast<std::size_t>(i)] =
            scan.f1->log_eval(row) - log_standard_normal(row);
    }
    std::sort(scan.pool_ratio.begin(), scan.pool_ratio.end());

    // Omega_k = { ratio > c_k } with c_k the ratio of the (k+1)-th point,
    // the level set just past the k-th rejected point; Omega_n is the whole
    // space. F0 on the pool is the fraction of pool ratios above c_k.
    const double m = static_cast<double>(pool.size());
    scan.statistic.resize(scan.order.size());
    for (std::size_t k = 1; k <= scan.order.size(); ++k) {
        double f0;
        if (k == scan.order.size()) {
            f0 = 1.0;
        } else {
            const double c = scan.data_ratio[k];
            const auto it = std::upper_bound(scan.pool_ratio.begin(),
                                             scan.pool_ratio.end(), c);
            f0 = static_cast<double>(scan.pool_ratio.end() - it) / m;
        }
        const double stat = spec.pi0 * f0 * static_cast<double>(n) /
                            static_cast<double>(k);
        scan.statistic[k - 1] = stat;
        if (stat <= q) scan.k_star = k;
    }
    return scan;
}

}  // namespace

RejectionOutcome oracle_procedure(const ZMatrix& z, double q,
                                  const MixtureSpec& spec,
                                  const NullSamplePool& pool) {
    const OracleScan scan = oracle_scan(z, q, spec, pool);

    RejectionOutcome out;
    out.method = "oracle";
    out.rejected.assign(static_cast<std::size_t>(z.n()), 0);
    out.estimated_fdr_trace.reserve(scan.statistic.size());
    for (std::size_t k = 0; k < scan.statistic.size(); ++k) {
        out.estimated_fdr_trace.emplace_back(k + 1, scan.statistic[k]);
    }
    for (std::size_t k = 0; k < scan.k_star; ++k) {
        out.rejected[static_cast<std::size_t>(scan.order[k])] = 1;
    }
    return out;
}

Region oracle_region(const ZMatrix& z, double q, const MixtureSpec& spec,
                     const NullSamplePool& pool) {
    const OracleScan scan = oracle_scan(z, q, spec, pool);
    Region region(static_cast<int>(z.d()));
    if (scan.k_star == 0) return region;
    if (scan.k_star == scan.data_ratio.size()) {
        // Everything rejected; Omega_n is the whole space.
        return region.extended(BallComplement{0.0});
    }
    return region.extended(LikelihoodLevelSet::from_log_threshold(
        scan.f1, scan.data_ratio[scan.k_star]));
}

}  // namespace nrfdr
