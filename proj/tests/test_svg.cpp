#include "nrfdr/svg_plot.hpp"

#include "nrfdr/core.hpp"
#include "nrfdr/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace nrfdr;

namespace {

std::size_t count_occurrences(const std::string& text, const std::string& what) {
    std::size_t count = 0;
    for (std::size_t pos = text.find(what); pos != std::string::npos;
         pos = text.find(what, pos + what.size())) {
        ++count;
    }
    return count;
}

ZMatrix grid_cloud(int n, double span, std::uint64_t seed) {
    Rng rng(seed);
    Eigen::MatrixXd z(n, 2);
    for (int i = 0; i < n; ++i) {
        z(i, 0) = span * (rng.uniform() - 0.5);
        z(i, 1) = span * (rng.uniform() - 0.5);
    }
    return ZMatrix(std::move(z));
}

}  // namespace

TEST_CASE("empty trace plots points only") {
    RegionTraceFile trace;
    trace.d = 2;
    trace.region = Region(2);
    const ZMatrix data = grid_cloud(25, 6.0, 1);
    std::ostringstream out;
    plot_regions(out, trace, data);
    const std::string svg = out.str();
    CHECK(count_occurrences(svg, "class=\"stage\"") == 0);
    CHECK(count_occurrences(svg, "<circle") == 25);
    CHECK(count_occurrences(svg, "class=\"rej\"") == 0);
}

TEST_CASE("ball stage traces a circle within grid resolution") {
    RegionTraceFile trace;
    trace.d = 2;
    trace.region = Region(2).extended(BallComplement{2.0});
    // Symmetric data so the bounding box is [-4,4]^2 padded by 10%.
    Eigen::MatrixXd corners(4, 2);
    corners << -4, -4, 4, -4, -4, 4, 4, 4;
    const ZMatrix data{corners};

    PlotOptions options;
    options.grid = 200;
    std::ostringstream out;
    plot_regions(out, trace, data, options);
    const std::string svg = out.str();
    REQUIRE(count_occurrences(svg, "class=\"stage\"") == 1);

    // Every boundary segment endpoint must sit near radius 2 after mapping
    // back from pixels to data coordinates.
    const double lo = -4.0 - 0.8, hi = 4.0 + 0.8;
    const double side = 760.0, margin = 20.0;
    const double cell = (hi - lo) / options.grid;
    const auto d_pos = svg.find("d=\"");
    REQUIRE(d_pos != std::string::npos);
    const auto d_end = svg.find('"', d_pos + 3);
    const std::string path = svg.substr(d_pos + 3, d_end - d_pos - 3);
    std::istringstream ss(path);
    char command;
    double px, py;
    std::size_t checked = 0;
    while (ss >> command >> px >> py) {
        const double x = lo + (px - margin) / side * (hi - lo);
        const double y = hi - (py - margin) / side * (hi - lo);
        const double radius = std::hypot(x, y);
        REQUIRE(std::abs(radius - 2.0) <= 2.0 * cell * std::sqrt(2.0));
        ++checked;
    }
    CHECK(checked > 100);
}

TEST_CASE("rejected markers match the trace's rejected list") {
    RegionTraceFile trace;
    trace.d = 2;
    trace.region = Region(2).extended(BallComplement{1.5});
    trace.rejected = {0, 3, 7};
    const ZMatrix data = grid_cloud(10, 5.0, 2);
    std::ostringstream out;
    plot_regions(out, trace, data);
    const std::string svg = out.str();
    CHECK(count_occurrences(svg, "class=\"rej\"") == 3);
    CHECK(count_occurrences(svg, "class=\"pt\"") == 7);
}

TEST_CASE("plot output is deterministic") {
    RegionTraceFile trace;
    trace.d = 2;
    trace.region = Region(2).extended(BallComplement{1.0});
    const ZMatrix data = grid_cloud(30, 4.0, 3);
    std::ostringstream a, b;
    plot_regions(a, trace, data);
    plot_regions(b, trace, data);
    CHECK(a.str() == b.str());
}

TEST_CASE("non-planar input is rejected") {
    RegionTraceFile trace;
    trace.d = 3;
    trace.region = Region(3);
    const ZMatrix data = grid_cloud(5, 2.0, 4);
    std::ostringstream out;
    CHECK_THROWS_AS(plot_regions(out, trace, data), InputError);
}
