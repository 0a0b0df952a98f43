#pragma once

#include "nrfdr/core.hpp"
#include "nrfdr/nr.hpp"
#include "nrfdr/region.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace nrfdr {

/// Parsed region trace: the stage list with density snapshots, the step
/// records, and the final rejected index set.
struct RegionTraceFile {
    int d = 1;
    double lambda0 = 0.0;
    double q_prime = 0.0;
    Region region{1};
    std::vector<NRStepRecord> steps;
    std::vector<std::size_t> rejected;
};

/// Line-delimited text format: density snapshot blocks, one stage record
/// per line (kind, lambda or threshold, density id), step records, and the
/// rejected index list. Doubles round-trip exactly.
void write_region_trace(std::ostream& out, const NRTrace& trace,
                        const RejectionOutcome& outcome);
void write_region_trace_file(const std::string& path, const NRTrace& trace,
                             const RejectionOutcome& outcome);

RegionTraceFile read_region_trace(std::istream& in, const std::string& name);
RegionTraceFile read_region_trace_file(const std::string& path);

}  // namespace nrfdr
