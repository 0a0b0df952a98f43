#include "nrfdr/trace_io.hpp"

#include "nrfdr/csv.hpp"
#include "nrfdr/density.hpp"
#include "nrfdr/kde.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>

namespace nrfdr {

namespace {

constexpr const char* kHeader = "# nrfdr region trace v1";

void write_vector(std::ostream& out, const Eigen::VectorXd& v) {
    for (Eigen::Index j = 0; j < v.size(); ++j) {
        out << (j ? " " : "") << format_double(v(j));
    }
}

[[noreturn]] void fail(const std::string& name, std::size_t line_no,
                       const std::string& what) {
    throw DataError(name + ": line " + std::to_string(line_no) + ": " + what);
}

}  // namespace

void write_region_trace(std::ostream& out, const NRTrace& trace,
                        const RejectionOutcome& outcome) {
    out << kHeader << '\n';
    out << "dim " << trace.final_region.d() << '\n';
    out << "lambda0 " << format_double(trace.lambda0) << '\n';
    out << "qprime " << format_double(trace.q_prime_used) << '\n';

    // Assign ids to distinct density snapshots in stage order.
    std::map<const Density*, int> ids;
    for (const Stage& stage : trace.final_region.stages()) {
        const auto* level = std::get_if<LikelihoodLevelSet>(&stage);
        if (level == nullptr) continue;
        const Density* ptr = level->density.get();
        if (ids.count(ptr)) continue;
        const int id = static_cast<int>(ids.size());
        ids[ptr] = id;
        if (const auto* kde = dynamic_cast<const ProductKernelDensity*>(ptr)) {
            out << "density " << id << " kde nref "
                << format_double(kde->n_ref()) << " m " << kde->support_size()
                << " bw ";
            write_vector(out, kde->bandwidths());
            out << '\n';
            for (Eigen::Index i = 0; i < kde->support_size(); ++i) {
                write_vector(out, kde->support().row(i).transpose());
                out << '\n';
            }
        } else if (const auto* gauss = dynamic_cast<const GaussianDensity*>(ptr)) {
            out << "density " << id << " gaussian mean ";
            write_vector(out, gauss->mean());
            out << '\n';
            const Eigen::MatrixXd cov =
                gauss->chol_factor() * gauss->chol_factor().transpose();
            for (Eigen::Index i = 0; i < cov.rows(); ++i) {
                write_vector(out, cov.row(i).transpose());
                out << '\n';
            }
        } else {
            throw InputError("write_region_trace: unserializable density kind");
        }
    }

    for (const Stage& stage : trace.final_region.stages()) {
        if (const auto* ball = std::get_if<BallComplement>(&stage)) {
            out << "stage ball " << format_double(ball->lambda) << '\n';
        } else {
            const auto& level = std::get<LikelihoodLevelSet>(stage);
            out << "stage level " << ids.at(level.density.get()) << ' '
                << format_double(level.log_threshold) << '\n';
        }
    }

    for (const NRStepRecord& rec : trace.steps) {
        out << "step " << rec.step << ' ' << rec.rejected_index << ' '
            << format_double(rec.threshold) << ' '
            << format_double(rec.estimated_fdr) << ' '
            << format_double(rec.f0_estimate) << ' ' << rec.rejected_total;
        for (std::uint32_t idx : rec.also_rejected) out << ' ' << idx;
        out << '\n';
    }

    out << "rejected";
    for (std::size_t i = 0; i < outcome.rejected.size(); ++i) {
        if (outcome.rejected[i]) out << ' ' << i;
    }
    out << '\n';
}

void write_region_trace_file(const std::string& path, const NRTrace& trace,
                             const RejectionOutcome& outcome) {
    std::ofstream out(path);
    if (!out) throw DataError(path + ": cannot open trace for writing");
    write_region_trace(out, trace, outcome);
    if (!out) throw DataError(path + ": failed writing trace");
}

RegionTraceFile read_region_trace(std::istream& in, const std::string& name) {
    std::string line;
    std::size_t line_no = 1;
    if (!std::getline(in, line) || line != kHeader) {
        throw DataError(name + ": not a region trace file");
    }

    RegionTraceFile out;
    std::map<int, std::shared_ptr<const Density>> densities;
    bool have_dim = false;

    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string tag;
        ss >> tag;
        if (tag == "dim") {
            if (!(ss >> out.d) || out.d < 1) fail(name, line_no, "bad dim");
            out.region = Region(out.d);
            have_dim = true;
        } else if (tag == "lambda0") {
            ss >> out.lambda0;
        } else if (tag == "qprime") {
            ss >> out.q_prime;
        } else if (tag == "density") {
            if (!have_dim) fail(name, line_no, "density before dim");
            int id;
            std::string kind;
            if (!(ss >> id >> kind)) fail(name, line_no, "bad density record");
            if (kind == "kde") {
                std::string tok;
                double nref;
                Eigen::Index m;
                if (!(ss >> tok >> nref) || tok != "nref") {
                    fail(name, line_no, "bad kde record");
                }
                if (!(ss >> tok >> m) || tok != "m" || m < 1) {
                    fail(name, line_no, "bad kde record");
                }
                if (!(ss >> tok) || tok != "bw") fail(name, line_no, "bad kde record");
                Eigen::VectorXd bw(out.d);
                for (int j = 0; j < out.d; ++j) {
                    if (!(ss >> bw(j))) fail(name, line_no, "bad bandwidths");
                }
                Eigen::MatrixXd support(m, out.d);
                for (Eigen::Index i = 0; i < m; ++i) {
                    if (!std::getline(in, line)) {
                        fail(name, line_no, "truncated kde support");
                    }
                    ++line_no;
                    std::istringstream row(line);
                    for (int j = 0; j < out.d; ++j) {
                        if (!(row >> support(i, j))) {
                            fail(name, line_no, "bad support row");
                        }
                    }
                }
                densities[id] = std::make_shared<ProductKernelDensity>(
                    std::move(support), std::move(bw), nref);
            } else if (kind == "gaussian") {
                std::string tok;
                if (!(ss >> tok) || tok != "mean") {
                    fail(name, line_no, "bad gaussian record");
                }
                Eigen::VectorXd mean(out.d);
                for (int j = 0; j < out.d; ++j) {
                    if (!(ss >> mean(j))) fail(name, line_no, "bad gaussian mean");
                }
                Eigen::MatrixXd cov(out.d, out.d);
                for (int i = 0; i < out.d; ++i) {
                    if (!std::getline(in, line)) {
                        fail(name, line_no, "truncated gaussian covariance");
                    }
                    ++line_no;
                    std::istringstream row(line);
                    for (int j = 0; j < out.d; ++j) {
                        if (!(row >> cov(i, j))) {
                            fail(name, line_no, "bad covariance row");
                        }
                    }
                }
                densities[id] =
                    std::make_shared<GaussianDensity>(std::move(mean), cov);
            } else {
                fail(name, line_no, "unknown density kind '" + kind + "'");
            }
        } else if (tag == "stage") {
            if (!have_dim) fail(name, line_no, "stage before dim");
            std::string kind;
            if (!(ss >> kind)) fail(name, line_no, "bad stage record");
            if (kind == "ball") {
                double lambda;
                if (!(ss >> lambda)) fail(name, line_no, "bad ball stage");
                out.region = out.region.extended(BallComplement{lambda});
            } else if (kind == "level") {
                int id;
                double log_threshold;
                if (!(ss >> id >> log_threshold)) {
                    fail(name, line_no, "bad level stage");
                }
                const auto it = densities.find(id);
                if (it == densities.end()) {
                    fail(name, line_no, "stage references unknown density");
                }
                out.region = out.region.extended(
                    LikelihoodLevelSet::from_log_threshold(it->second,
                                                           log_threshold));
            } else {
                fail(name, line_no, "unknown stage kind '" + kind + "'");
            }
        } else if (tag == "step") {
            NRStepRecord rec;
            std::string threshold_tok;  // may be "nan" on the init record
            if (!(ss >> rec.step >> rec.rejected_index >> threshold_tok >>
                  rec.estimated_fdr >> rec.f0_estimate >> rec.rejected_total)) {
                fail(name, line_no, "bad step record");
            }
            char* endp = nullptr;
            rec.threshold = std::strtod(threshold_tok.c_str(), &endp);
            if (endp == threshold_tok.c_str() || *endp != '\0') {
                fail(name, line_no, "bad step threshold");
            }
            std::uint32_t idx;
            while (ss >> idx) rec.also_rejected.push_back(idx);
            out.steps.push_back(std::move(rec));
        } else if (tag == "rejected") {
            std::size_t idx;
            while (ss >> idx) out.rejected.push_back(idx);
        } else {
            fail(name, line_no, "unknown record '" + tag + "'");
        }
    }
    if (!have_dim) throw DataError(name + ": missing dim record");
    return out;
}

RegionTraceFile read_region_trace_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError(path + ": cannot open trace file");
    return read_region_trace(in, path);
}

}  // namespace nrfdr
