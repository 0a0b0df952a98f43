#include "nrfdr/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace nrfdr {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(trim(field));
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

bool parse_double(const std::string& s, double& out) {
    if (s.empty()) return false;
    const char* begin = s.data();
    const char* end = begin + s.size();
    const auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc{} && ptr == end;
}

}  // namespace

ZMatrix ingest_csv_stream(std::istream& in, const std::string& name) {
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    std::size_t width = 0;
    bool header_checked = false;

    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        const std::vector<std::string> fields = split_csv_line(stripped);

        if (!header_checked) {
            header_checked = true;
            bool all_numeric = true;
            double tmp;
            for (const auto& f : fields) {
                if (!parse_double(f, tmp)) {
                    all_numeric = false;
                    break;
                }
            }
            if (!all_numeric) {
                width = fields.size();
                continue;  // header row
            }
        }

        if (width == 0) {
            width = fields.size();
        } else if (fields.size() != width) {
            throw DataError(name + ": line " + std::to_string(line_no) +
                            ": expected " + std::to_string(width) +
                            " fields, got " + std::to_string(fields.size()));
        }
        std::vector<double> row(fields.size());
        for (std::size_t j = 0; j < fields.size(); ++j) {
            if (!parse_double(fields[j], row[j])) {
                throw DataError(name + ": line " + std::to_string(line_no) +
                                ", column " + std::to_string(j + 1) +
                                ": not numeric: '" + fields[j] + "'");
            }
        }
        rows.push_back(std::move(row));
    }

    if (rows.empty()) {
        throw DataError(name + ": no numeric rows");
    }
    Eigen::MatrixXd values(static_cast<Eigen::Index>(rows.size()),
                           static_cast<Eigen::Index>(rows[0].size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < rows[i].size(); ++j) {
            values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                rows[i][j];
        }
    }
    try {
        return ZMatrix(std::move(values));
    } catch (const InputError& e) {
        throw DataError(name + ": " + e.what());
    }
}

ZMatrix ingest_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError(path + ": cannot open file");
    return ingest_csv_stream(in, path);
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    // Prefer the shortest representation that still round-trips.
    for (int prec = 1; prec <= 16; ++prec) {
        char shorter[40];
        std::snprintf(shorter, sizeof(shorter), "%.*g", prec, v);
        double back;
        if (parse_double(shorter, back) && back == v) return shorter;
    }
    return buf;
}

void write_rejections_csv(std::ostream& out, const RejectionOutcome& outcome,
                          const Eigen::VectorXd& scores) {
    if (static_cast<std::size_t>(scores.size()) != outcome.rejected.size()) {
        throw InputError("write_rejections_csv: score length mismatch");
    }
    out << "row_index,rejected,score\n";
    for (std::size_t i = 0; i < outcome.rejected.size(); ++i) {
        out << i << ',' << (outcome.rejected[i] ? 1 : 0) << ','
            << format_double(scores(static_cast<Eigen::Index>(i))) << '\n';
    }
}

void write_metrics_csv(std::ostream& out, const std::vector<MetricsRow>& rows) {
    out << "method,n,d,scenario,fdr,fdr_se,fnr,fnr_se,B\n";
    for (const MetricsRow& r : rows) {
        out << r.method << ',' << r.n << ',' << r.d << ',' << r.scenario << ','
            << format_double(r.fdr) << ',' << format_double(r.fdr_se) << ','
            << format_double(r.fnr) << ',' << format_double(r.fnr_se) << ','
            << r.replicates << '\n';
    }
}

}  // namespace nrfdr
