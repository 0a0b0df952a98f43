#include "nrfdr/analyze.hpp"

#include "nrfdr/null_model.hpp"
#include "nrfdr/sc.hpp"
#include "nrfdr/univariate.hpp"

#include <algorithm>
#include <limits>

namespace nrfdr {

AnalyzeMethod parse_analyze_method(const std::string& name) {
    if (name == "nr") return AnalyzeMethod::Nr;
    if (name == "sc") return AnalyzeMethod::Sc;
    if (name == "fisher") return AnalyzeMethod::Fisher;
    if (name == "bh1d") return AnalyzeMethod::Bh1d;
    throw InputError("unknown analyze method '" + name + "'");
}

std::string analyze_method_name(AnalyzeMethod method) {
    switch (method) {
        case AnalyzeMethod::Nr: return "nr";
        case AnalyzeMethod::Sc: return "sc";
        case AnalyzeMethod::Fisher: return "fisher";
        case AnalyzeMethod::Bh1d: return "bh1d";
    }
    throw InputError("unknown analyze method");
}

namespace {

Eigen::MatrixXd column_p_values(const ZMatrix& z) {
    Eigen::MatrixXd p(z.n(), z.d());
    for (Eigen::Index i = 0; i < z.n(); ++i) {
        for (Eigen::Index j = 0; j < z.d(); ++j) {
            p(i, j) = z_to_p_two_sided(z.values()(i, j));
        }
    }
    return p;
}

}  // namespace

AnalyzeResult run_analyze(const ZMatrix& z_in, const AnalyzeOptions& options) {
    if (!(options.q > 0.0 && options.q < 1.0)) {
        throw InputError("analyze: q must lie in (0,1)");
    }
    const ZMatrix z = options.whiten ? whiten(z_in) : z_in;

    AnalyzeResult result;
    switch (options.method) {
        case AnalyzeMethod::Fisher: {
            const PValueVector combined = fisher_combine(column_p_values(z));
            result.outcome = bh_step_down(combined, options.q);
            result.outcome.method = "fisher";
            result.scores = combined.values;
            break;
        }
        case AnalyzeMethod::Bh1d: {
            Eigen::Index column = 0;
            if (z.d() > 1) {
                if (options.column < 0 || options.column >= z.d()) {
                    throw InputError(
                        "analyze: bh1d on multi-column data needs --column");
                }
                column = options.column;
            }
            PValueVector p;
            p.values.resize(z.n());
            for (Eigen::Index i = 0; i < z.n(); ++i) {
                p.values(i) = z_to_p_two_sided(z.values()(i, column));
            }
            result.outcome = bh_step_down(p, options.q);
            result.outcome.method = "bh1d";
            result.scores = p.values;
            break;
        }
        case AnalyzeMethod::Sc: {
            double pi0;
            if (options.pi0.has_value()) {
                pi0 = *options.pi0;
            } else if (options.pi0_lowest_slope) {
                const Eigen::MatrixXd p = column_p_values(z);
                pi0 = 1.0;
                for (Eigen::Index j = 0; j < p.cols(); ++j) {
                    PValueVector column{p.col(j)};
                    pi0 = std::min(pi0, pi0_lowest_slope(column));
                }
            } else {
                throw InputError(
                    "analyze: sc needs --pi0 <value> or --pi0 lowest-slope");
            }
            const LfdrVector lfdr = lfdr_estimate(z, pi0);
            result.outcome = sc_threshold(lfdr, options.q);
            result.scores = lfdr.values;
            result.pi0_used = pi0;
            break;
        }
        case AnalyzeMethod::Nr: {
            NRConfig config;
            config.q = options.q;
            config.q_prime = options.q_prime;
            config.pool_size = options.pool_size;
            config.seed = options.seed;
            auto [outcome, trace] = nr_procedure(z, config);
            result.scores = Eigen::VectorXd::Constant(z.n(), -1.0);
            // Score = the step at which the row was rejected.
            const double lambda2 = trace.lambda0 * trace.lambda0;
            for (Eigen::Index i = 0; i < z.n(); ++i) {
                if (z.values().row(i).squaredNorm() > lambda2) {
                    result.scores(i) = 0.0;
                }
            }
            for (const NRStepRecord& rec : trace.steps) {
                if (rec.rejected_index >= 0) {
                    result.scores(rec.rejected_index) =
                        static_cast<double>(rec.step);
                }
                for (std::uint32_t idx : rec.also_rejected) {
                    result.scores(idx) = static_cast<double>(rec.step);
                }
            }
            for (Eigen::Index i = 0; i < z.n(); ++i) {
                if (!outcome.rejected[static_cast<std::size_t>(i)]) {
                    result.scores(i) = -1.0;  // walked past the stop
                }
            }
            result.outcome = std::move(outcome);
            result.trace = std::move(trace);
            break;
        }
    }
    return result;
}

}  // namespace nrfdr
