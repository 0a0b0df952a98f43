#pragma once

#include "nrfdr/core.hpp"
#include "nrfdr/trace_io.hpp"

#include <iosfwd>
#include <string>

namespace nrfdr {

struct PlotOptions {
    int grid = 200;       // samples per axis for boundary tracing
    double pad = 0.10;    // bounding-box padding fraction
    int width = 760;      // drawing area in pixels (square)
    int margin = 20;
};

/// Scatter of the d=2 z-values with one traced boundary per region stage.
/// Rejected points (per the trace's rejected list) are drawn distinctly.
/// Deterministic for fixed inputs.
void plot_regions(std::ostream& out, const RegionTraceFile& trace,
                  const ZMatrix& data, const PlotOptions& options = {});

void plot_regions_file(const std::string& path, const RegionTraceFile& trace,
                       const ZMatrix& data, const PlotOptions& options = {});

}  // namespace nrfdr
