#pragma once

#include "nrfdr/core.hpp"
#include "nrfdr/simulation.hpp"

#include <Eigen/Dense>

#include <iosfwd>
#include <string>
#include <vector>

namespace nrfdr {

/// Reads a rectangular numeric CSV into a ZMatrix. A non-numeric first row
/// is treated as a header and skipped. Ragged rows and non-numeric cells
/// raise DataError with the offending line (and column).
ZMatrix ingest_csv(const std::string& path);
ZMatrix ingest_csv_stream(std::istream& in, const std::string& name);

/// Rejection table: row_index,rejected,score.
void write_rejections_csv(std::ostream& out,
                          const RejectionOutcome& outcome,
                          const Eigen::VectorXd& scores);

/// Metrics table with the fixed column set
/// method,n,d,scenario,fdr,fdr_se,fnr,fnr_se,B.
void write_metrics_csv(std::ostream& out, const std::vector<MetricsRow>& rows);

/// Deterministic shortest-roundtrip formatting used by all writers.
std::string format_double(double v);

}  // namespace nrfdr
