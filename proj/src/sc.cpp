#include "nrfdr/sc.hpp"

#include "nrfdr/density.hpp"
#include "nrfdr/kde.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace nrfdr {

LfdrVector lfdr_estimate(const ZMatrix& z, double pi0) {
    if (!(pi0 >= 0.0 && pi0 <= 1.0)) {
        throw InputError("lfdr_estimate: pi0 must lie in [0,1]");
    }
    LfdrVector out;
    out.pi0_used = pi0;
    out.values.resize(z.n());
    if (pi0 == 0.0) {
        out.values.setZero();
        return out;
    }

    const Eigen::VectorXd bw = kde_bandwidths(z.values());
    const ProductKernelDensity density(z.values(), bw,
                                       static_cast<double>(z.n()));
    const double log_pi0 = std::log(pi0);
    Eigen::ArrayXd work;
    for (Eigen::Index i = 0; i < z.n(); ++i) {
        const auto row = z.values().row(i).transpose();
        const double log_fhat =
            density.log_eval_scaled(density.scale_query(row), work);
        const double lfdr =
            std::exp(log_pi0 + log_standard_normal(row) - log_fhat);
        out.values(i) = std::min(1.0, lfdr);
    }
    return out;
}

RejectionOutcome sc_threshold(const LfdrVector& lfdr, double q) {
    if (!(q > 0.0 && q < 1.0)) {
        throw InputError("sc_threshold: q must lie in (0,1)");
    }
    const Eigen::Index n = lfdr.values.size();
    if (n < 1) throw InputError("sc_threshold: empty Lfdr vector");

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        return lfdr.values(a) < lfdr.values(b);
    });

    RejectionOutcome out;
    out.method = "sc";
    out.rejected.assign(static_cast<std::size_t>(n), 0);
    out.estimated_fdr_trace.reserve(static_cast<std::size_t>(n));

    double running_sum = 0.0;
    std::size_t k = 0;
    for (std::size_t j = 0; j < order.size(); ++j) {
        running_sum += lfdr.values(order[j]);
        const double mean = running_sum / static_cast<double>(j + 1);
        out.estimated_fdr_trace.emplace_back(j + 1, mean);
        if (mean <= q) k = j + 1;
    }
    for (std::size_t j = 0; j < k; ++j) {
        out.rejected[static_cast<std::size_t>(order[j])] = 1;
    }
    return out;
}

RejectionOutcome sc_procedure(const ZMatrix& z, double q, double pi0) {
    return sc_threshold(lfdr_estimate(z, pi0), q);
}

}  // namespace nrfdr
