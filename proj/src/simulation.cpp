#include "nrfdr/simulation.hpp"

#include "nrfdr/nr.hpp"
#include "nrfdr/sc.hpp"
#include "nrfdr/univariate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <optional>
#include <thread>

namespace nrfdr {

void ScenarioConfig::validate() const {
    if (scenario != 1 && scenario != 2) {
        throw InputError("ScenarioConfig: scenario must be 1 or 2");
    }
    if (n < 1) throw InputError("ScenarioConfig: n must be >= 1");
    if (d < 1) throw InputError("ScenarioConfig: d must be >= 1");
    if (!(pi0 > 0.0 && pi0 <= 1.0)) {
        throw InputError("ScenarioConfig: pi0 must lie in (0,1]");
    }
    if (!(q > 0.0 && q < 1.0)) throw InputError("ScenarioConfig: q must lie in (0,1)");
    if (replicates < 1) throw InputError("ScenarioConfig: replicates must be >= 1");
    if (pool_size < 1) throw InputError("ScenarioConfig: pool_size must be >= 1");
    if (refit_batch < 1) throw InputError("ScenarioConfig: refit_batch must be >= 1");
    if (table2_alternatives && scenario != 2) {
        throw InputError("ScenarioConfig: table2_alternatives requires scenario 2");
    }
}

Eigen::MatrixXd random_correlation(int d, Rng& rng) {
    if (d < 2) throw InputError("random_correlation: d must be >= 2");
    Eigen::MatrixXd r = Eigen::MatrixXd::Identity(d, d);

    // Partial correlations by lag, composed through the conditioning block.
    for (int lag = 1; lag <= d - 1; ++lag) {
        const double beta_par =
            1.0 + 0.5 * static_cast<double>(d - 1 - lag);
        for (int j = 0; j + lag < d; ++j) {
            const int k = j + lag;
            const double pc = 2.0 * rng.beta(beta_par, beta_par) - 1.0;
            double rho = pc;
            if (lag > 1) {
                const int m = lag - 1;  // conditioning indices j+1 .. k-1
                const Eigen::MatrixXd cond =
                    r.block(j + 1, j + 1, m, m);
                const Eigen::VectorXd r1 =
                    r.block(j, j + 1, 1, m).transpose();
                const Eigen::VectorXd r3 =
                    r.block(k, j + 1, 1, m).transpose();
                const Eigen::LLT<Eigen::MatrixXd> llt(cond);
                const Eigen::VectorXd w1 = llt.solve(r1);
                const Eigen::VectorXd w3 = llt.solve(r3);
                const double t11 = r1.dot(w1);
                const double t33 = r3.dot(w3);
                const double t13 = r1.dot(w3);
                rho = t13 + pc * std::sqrt(std::max(0.0, (1.0 - t11)) *
                                           std::max(0.0, (1.0 - t33)));
            }
            r(j, k) = rho;
            r(k, j) = rho;
        }
    }
    return r;
}

Eigen::MatrixXd random_correlation(int d, std::uint64_t seed) {
    Rng rng(seed);
    return random_correlation(d, rng);
}

GeneratedReplicate generate(const ScenarioConfig& config,
                            std::size_t replicate_index) {
    config.validate();
    const int d = config.d;
    const std::size_t n = config.n;
    Rng rng(derive_seed(config.seed, 2 * replicate_index));

    // Covariance of the correlated component, drawn once per replicate.
    Eigen::MatrixXd sigma = Eigen::MatrixXd::Identity(d, d);
    bool correlated = false;
    if (config.scenario == 2) {
        if (config.table2_alternatives) {
            // Random covariance: scaled Wishart with expectation 3 I.
            Eigen::MatrixXd a(d, d);
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) a(i, j) = rng.normal();
            sigma = 3.0 * (a * a.transpose()) / static_cast<double>(d);
            correlated = true;
        } else if (d >= 2) {
            sigma = random_correlation(d, rng);
            correlated = true;
        }
    }
    const Eigen::MatrixXd chol = Eigen::LLT<Eigen::MatrixXd>(sigma).matrixL();

    const double coord_mean = config.mu_scale / std::sqrt(static_cast<double>(d));
    const Eigen::VectorXd mu = Eigen::VectorXd::Constant(d, coord_mean);

    Eigen::MatrixXd values(static_cast<Eigen::Index>(n), d);
    HypothesisLabels labels;
    labels.theta.resize(n);
    Eigen::VectorXd eps(d);
    for (std::size_t i = 0; i < n; ++i) {
        const bool non_null = rng.bernoulli(1.0 - config.pi0);
        labels.theta[i] = non_null ? 1 : 0;
        for (int j = 0; j < d; ++j) eps(j) = rng.normal();
        // Nulls stay standard normal in the table2 variant.
        const bool use_chol =
            correlated && (non_null || !config.table2_alternatives);
        Eigen::VectorXd row = use_chol ? (chol * eps).eval() : eps;
        if (non_null) row += mu;
        values.row(static_cast<Eigen::Index>(i)) = row.transpose();
    }

    MixtureSpec mixture;
    mixture.pi0 = config.pi0;
    mixture.mu1 = mu;
    mixture.sigma1 = correlated ? sigma : Eigen::MatrixXd::Identity(d, d);
    return GeneratedReplicate{ZMatrix(std::move(values)), std::move(labels),
                              std::move(mixture)};
}

std::string method_name(Method m) {
    switch (m) {
        case Method::BhFisher: return "fisher";
        case Method::Sc: return "sc";
        case Method::Nr: return "nr";
        case Method::Oracle: return "oracle";
    }
    throw InputError("method_name: unknown method");
}

Method parse_method(const std::string& name) {
    if (name == "fisher") return Method::BhFisher;
    if (name == "sc") return Method::Sc;
    if (name == "nr") return Method::Nr;
    if (name == "oracle") return Method::Oracle;
    throw InputError("unknown method '" + name + "'");
}

namespace {

RejectionOutcome run_fisher(const GeneratedReplicate& rep, double q) {
    const Eigen::MatrixXd& z = rep.z.values();
    Eigen::MatrixXd p(z.rows(), z.cols());
    for (Eigen::Index i = 0; i < z.rows(); ++i) {
        for (Eigen::Index j = 0; j < z.cols(); ++j) {
            p(i, j) = z_to_p_two_sided(z(i, j));
        }
    }
    RejectionOutcome out = bh_step_down(fisher_combine(p), q);
    out.method = "fisher";
    return out;
}

struct MethodScore {
    bool ok = false;
    double fdp = 0.0;
    double fnp = 0.0;
};

struct Accumulated {
    std::vector<double> fdp;
    std::vector<double> fnp;
    std::size_t failures = 0;
};

}  // namespace

std::vector<MetricsRow> run_replicates_with(
    const ScenarioConfig& config, const std::vector<NamedProcedure>& procedures) {
    config.validate();
    if (procedures.empty()) {
        throw InputError("run_replicates: no methods requested");
    }
    const std::size_t reps = config.replicates;
    const bool any_pool = std::any_of(procedures.begin(), procedures.end(),
                                      [](const auto& p) { return p.needs_pool; });
    const bool any_decorrelate =
        config.scenario == 2 && !config.table2_alternatives &&
        std::any_of(procedures.begin(), procedures.end(),
                    [](const auto& p) { return p.decorrelate; });

    std::vector<std::vector<MethodScore>> scores(
        reps, std::vector<MethodScore>(procedures.size()));

    const auto run_one = [&](std::size_t b) {
        const GeneratedReplicate rep = generate(config, b);
        std::optional<GeneratedReplicate> decorrelated;
        if (any_decorrelate) {
            // Transform by the inverse Cholesky factor of the true
            // covariance; nulls become exactly standard normal.
            const Eigen::MatrixXd chol =
                Eigen::LLT<Eigen::MatrixXd>(rep.mixture.sigma1).matrixL();
            const auto lower = chol.triangularView<Eigen::Lower>();
            MixtureSpec mixture;
            mixture.pi0 = rep.mixture.pi0;
            mixture.mu1 = lower.solve(rep.mixture.mu1);
            mixture.sigma1 =
                Eigen::MatrixXd::Identity(config.d, config.d);
            decorrelated.emplace(GeneratedReplicate{
                ZMatrix(lower.solve(rep.z.values().transpose()).transpose()),
                rep.labels, std::move(mixture)});
        }
        std::optional<NullSamplePool> pool;
        if (any_pool) {
            pool.emplace(config.d, config.pool_size,
                         derive_seed(config.seed, 2 * b + 1));
        }
        for (std::size_t mi = 0; mi < procedures.size(); ++mi) {
            const GeneratedReplicate& input =
                (procedures[mi].decorrelate && decorrelated) ? *decorrelated
                                                             : rep;
            try {
                const RejectionOutcome outcome =
                    procedures[mi].run(input, pool ? &*pool : nullptr);
                const ConfusionCounts counts =
                    confusion_counts(rep.labels, outcome);
                scores[b][mi].fdp = fdp(counts);
                scores[b][mi].fnp = fnp(counts, config.n);
                scores[b][mi].ok = true;
            } catch (const std::exception&) {
                scores[b][mi].ok = false;
            }
        }
    };

    unsigned hw = std::thread::hardware_concurrency();
    std::size_t threads = config.threads > 0
                              ? static_cast<std::size_t>(config.threads)
                              : static_cast<std::size_t>(hw > 0 ? hw : 1);
    threads = std::min(threads, reps);
    if (threads <= 1) {
        for (std::size_t b = 0; b < reps; ++b) run_one(b);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> workers;
        workers.reserve(threads);
        for (std::size_t t = 0; t < threads; ++t) {
            workers.emplace_back([&] {
                for (;;) {
                    const std::size_t b = next.fetch_add(1);
                    if (b >= reps) break;
                    run_one(b);
                }
            });
        }
        for (auto& w : workers) w.join();
    }

    // Sequential reduction in replicate order keeps results independent of
    // the thread schedule.
    std::vector<MetricsRow> rows;
    rows.reserve(procedures.size());
    for (std::size_t mi = 0; mi < procedures.size(); ++mi) {
        Accumulated acc;
        for (std::size_t b = 0; b < reps; ++b) {
            if (!scores[b][mi].ok) {
                ++acc.failures;
                continue;
            }
            acc.fdp.push_back(scores[b][mi].fdp);
            acc.fnp.push_back(scores[b][mi].fnp);
        }
        MetricsRow row;
        row.method = procedures[mi].name;
        row.n = config.n;
        row.d = config.d;
        row.scenario = config.scenario;
        row.replicates = reps;
        row.failures = acc.failures;
        const std::size_t m = acc.fdp.size();
        if (m > 0) {
            const auto mean_of = [&](const std::vector<double>& v) {
                double s = 0.0;
                for (double x : v) s += x;
                return s / static_cast<double>(v.size());
            };
            row.fdr = mean_of(acc.fdp);
            row.fnr = mean_of(acc.fnp);
            if (m > 1) {
                const auto se_of = [&](const std::vector<double>& v, double mean) {
                    double ss = 0.0;
                    for (double x : v) ss += (x - mean) * (x - mean);
                    return std::sqrt(ss / static_cast<double>(v.size() - 1) /
                                     static_cast<double>(v.size()));
                };
                row.fdr_se = se_of(acc.fdp, row.fdr);
                row.fnr_se = se_of(acc.fnp, row.fnr);
            } else {
                row.degenerate_se = true;
            }
        } else {
            row.degenerate_se = true;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<MetricsRow> run_replicates(const ScenarioConfig& config,
                                       const std::vector<Method>& methods) {
    std::vector<NamedProcedure> procedures;
    procedures.reserve(methods.size());
    for (Method m : methods) {
        NamedProcedure proc;
        proc.name = method_name(m);
        switch (m) {
            case Method::BhFisher:
                proc.run = [q = config.q](const GeneratedReplicate& rep,
                                          const NullSamplePool*) {
                    return run_fisher(rep, q);
                };
                break;
            case Method::Sc:
                proc.decorrelate = true;
                proc.run = [q = config.q, pi0 = config.pi0](
                               const GeneratedReplicate& rep,
                               const NullSamplePool*) {
                    return sc_procedure(rep.z, q, pi0);
                };
                break;
            case Method::Nr: {
                proc.needs_pool = true;
                proc.decorrelate = true;
                NRConfig nr;
                nr.q = config.q;
                nr.q_prime = config.effective_q_prime();
                nr.pool_size = config.pool_size;
                nr.refit_batch = config.refit_batch;
                proc.run = [nr](const GeneratedReplicate& rep,
                                const NullSamplePool* pool) {
                    return nr_procedure(rep.z, nr, *pool).first;
                };
                break;
            }
            case Method::Oracle:
                proc.needs_pool = true;
                proc.decorrelate = true;
                proc.run = [q = config.q](const GeneratedReplicate& rep,
                                          const NullSamplePool* pool) {
                    return oracle_procedure(rep.z, q, rep.mixture, *pool);
                };
                break;
        }
        procedures.push_back(std::move(proc));
    }
    return run_replicates_with(config, procedures);
}

double StepFunction::operator()(double t) const {
    double value = 0.0;
    for (const auto& [time, v] : jumps) {
        if (time <= t) value = v;
        else break;
    }
    return value;
}

void StepFunction::validate() const {
    double prev_t = 0.0;
    double prev_v = 0.0;
    for (const auto& [time, v] : jumps) {
        if (!(time > prev_t) || !(time <= 1.0)) {
            throw InputError("StepFunction: jump times must be ascending in (0,1]");
        }
        if (v < prev_v) {
            throw InputError("StepFunction: values must be non-decreasing");
        }
        prev_t = time;
        prev_v = v;
    }
}

Lemma1Result lemma1_harness(std::size_t n0, double q, const StepFunction& b,
                            std::size_t sims, std::uint64_t seed) {
    if (!(q > 0.0 && q < 1.0)) {
        throw InputError("lemma1_harness: q must lie in (0,1)");
    }
    if (sims < 1) throw InputError("lemma1_harness: sims must be >= 1");
    b.validate();

    const double n_total = static_cast<double>(n0) + b.final_value();
    Lemma1Result result;
    result.sims = sims;

    double sum = 0.0;
    double sum_sq = 0.0;
    std::vector<double> p(n0);
    Rng rng(seed);

    for (std::size_t s = 0; s < sims; ++s) {
        for (std::size_t i = 0; i < n0; ++i) p[i] = rng.uniform();
        std::sort(p.begin(), p.end());

        // Continuous-time shadow of the step-down walk. The excess
        // h(t) = a_t + b_t - n t / q drifts down between events and jumps up
        // at them; tau is the first closed-form crossing h = 0 after an
        // excursion strictly above the boundary. When the count never rises
        // above the boundary the stopped ratio is the t -> 0+ limit -n0
        // (reject-nothing branch).
        double ratio = -static_cast<double>(n0);
        bool stopped = false;
        bool excursion = false;
        double a = 0.0;
        double b_val = 0.0;
        std::size_t pi = 0;
        std::size_t bi = 0;
        while (pi < n0 || bi < b.jumps.size()) {
            const double pt = pi < n0 ? p[pi] : 2.0;
            const double bt = bi < b.jumps.size() ? b.jumps[bi].first : 2.0;
            const double t_event = std::min(pt, bt);
            if (excursion) {
                const double t_cross = (a + b_val) * q / n_total;
                if (t_cross <= t_event) {
                    ratio = (a - static_cast<double>(n0) * t_cross) / t_cross;
                    stopped = true;
                    break;
                }
            }
            if (bt <= pt) {
                b_val = b.jumps[bi].second;
                ++bi;
            } else {
                a += 1.0;
                ++pi;
            }
            if (!excursion && a + b_val - n_total * t_event / q > 0.0) {
                excursion = true;  // the count moved strictly above the line
            }
        }
        if (!stopped && excursion) {
            // Events exhausted with the count still above the boundary; the
            // line catches the constant count before t = 1.
            const double t_cross = (a + b_val) * q / n_total;
            ratio = (a - static_cast<double>(n0) * t_cross) / t_cross;
        }
        sum += ratio;
        sum_sq += ratio * ratio;
    }

    const double mean = sum / static_cast<double>(sims);
    result.mean = mean;
    if (sims > 1) {
        const double var =
            (sum_sq - static_cast<double>(sims) * mean * mean) /
            static_cast<double>(sims - 1);
        result.se = std::sqrt(std::max(0.0, var) / static_cast<double>(sims));
    }
    return result;
}

}  // namespace nrfdr
