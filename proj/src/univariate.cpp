#include "nrfdr/univariate.hpp"

#include "nrfdr/special.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace nrfdr {

double z_to_p_two_sided(double z) {
    if (!std::isfinite(z)) throw InputError("z_to_p_two_sided: z must be finite");
    return std::erfc(std::abs(z) * M_SQRT1_2);
}

RejectionOutcome bh_step_down(const PValueVector& p, double q) {
    if (!(q > 0.0 && q < 1.0)) {
        throw InputError("bh_step_down: q must lie in (0,1)");
    }
    const Eigen::Index n = p.values.size();
    if (n < 1) throw InputError("bh_step_down: empty p-value vector");
    if ((p.values.array() < 0.0).any() || (p.values.array() > 1.0).any()) {
        throw InputError("bh_step_down: p-values must lie in [0,1]");
    }

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        return p.values(a) < p.values(b);
    });

    std::size_t k = 0;
    for (std::size_t i = 0; i < order.size(); ++i) {
        const double line = static_cast<double>(i + 1) * q / static_cast<double>(n);
        if (p.values(order[i]) <= line) {
            k = i + 1;
        } else {
            break;
        }
    }

    RejectionOutcome out;
    out.method = "bh_sd";
    out.rejected.assign(static_cast<std::size_t>(n), 0);
    for (std::size_t i = 0; i < k; ++i) {
        out.rejected[static_cast<std::size_t>(order[i])] = 1;
    }
    return out;
}

PValueVector fisher_combine(const Eigen::Ref<const Eigen::MatrixXd>& p,
                            std::size_t* clamped) {
    const Eigen::Index n = p.rows();
    const Eigen::Index d = p.cols();
    if (n < 1 || d < 1) throw InputError("fisher_combine: empty matrix");
    if ((p.array() < 0.0).any() || (p.array() > 1.0).any()) {
        throw InputError("fisher_combine: entries must lie in [0,1]");
    }

    std::size_t clamp_count = 0;
    PValueVector out;
    out.values.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double stat = 0.0;
        for (Eigen::Index j = 0; j < d; ++j) {
            double pij = p(i, j);
            if (pij <= 0.0) {
                pij = 1e-300;
                ++clamp_count;
            }
            stat += -2.0 * std::log(pij);
        }
        out.values(i) = chi_squared_sf(stat, static_cast<int>(2 * d));
    }
    if (clamped != nullptr) *clamped = clamp_count;
    return out;
}

// Lowest-slope null-proportion estimate: walk the slopes
// S_i = (1 - p_(i)) / (n + 1 - i) while they keep rising and stop at the
// first decrease; the stopping slope fixes m0-hat = floor(1/S) + 1.
double pi0_lowest_slope(const PValueVector& p) {
    const Eigen::Index n = p.values.size();
    if (n < 2) throw InputError("pi0_lowest_slope: need at least two p-values");

    std::vector<double> sorted(p.values.data(), p.values.data() + n);
    std::sort(sorted.begin(), sorted.end());

    double prev_slope =
        (1.0 - sorted[0]) / static_cast<double>(n);  // i = 1: n + 1 - i = n
    double chosen = prev_slope;
    bool stopped = false;
    for (Eigen::Index i = 2; i <= n; ++i) {
        const double slope = (1.0 - sorted[static_cast<std::size_t>(i - 1)]) /
                             static_cast<double>(n + 1 - i);
        if (slope < prev_slope) {
            chosen = slope;
            stopped = true;
            break;
        }
        prev_slope = slope;
    }
    if (!stopped) chosen = prev_slope;  // slopes never decreased

    if (!(chosen > 0.0)) return 1.0;
    const double m0 = std::floor(1.0 / chosen) + 1.0;
    return std::min(1.0, m0 / static_cast<double>(n));
}

}  // namespace nrfdr
