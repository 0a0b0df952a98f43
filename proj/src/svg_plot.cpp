#include "nrfdr/svg_plot.hpp"

#include "nrfdr/csv.hpp"
#include "nrfdr/region.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <vector>

namespace nrfdr {

namespace {

const char* kStageColors[] = {"#d62728", "#1f77b4", "#2ca02c", "#9467bd",
                              "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

std::string px(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

}  // namespace

void plot_regions(std::ostream& out, const RegionTraceFile& trace,
                  const ZMatrix& data, const PlotOptions& options) {
    if (trace.d != 2 || data.d() != 2) {
        throw InputError("plot_regions: only d=2 traces and data are supported");
    }
    if (options.grid < 2) throw InputError("plot_regions: grid must be >= 2");

    const Eigen::MatrixXd& z = data.values();
    double x_min = z.col(0).minCoeff();
    double x_max = z.col(0).maxCoeff();
    double y_min = z.col(1).minCoeff();
    double y_max = z.col(1).maxCoeff();
    const double x_pad = std::max(1e-9, (x_max - x_min)) * options.pad;
    const double y_pad = std::max(1e-9, (y_max - y_min)) * options.pad;
    x_min -= x_pad;
    x_max += x_pad;
    y_min -= y_pad;
    y_max += y_pad;

    const double side = static_cast<double>(options.width);
    const double m = static_cast<double>(options.margin);
    const double total = side + 2.0 * m;
    const auto to_px_x = [&](double x) {
        return m + (x - x_min) / (x_max - x_min) * side;
    };
    const auto to_px_y = [&](double y) {
        return m + (y_max - y) / (y_max - y_min) * side;  // y grows downward
    };

    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << total
        << "\" height=\"" << total << "\" viewBox=\"0 0 " << total << ' '
        << total << "\">\n";
    out << "<rect x=\"0\" y=\"0\" width=\"" << total << "\" height=\"" << total
        << "\" fill=\"white\"/>\n";

    // Stage boundaries: sample each stage predicate on a grid of cell
    // centers and draw the edges separating inside from outside cells.
    const int g = options.grid;
    const double cell_x = (x_max - x_min) / g;
    const double cell_y = (y_max - y_min) / g;
    std::vector<std::uint8_t> mask(static_cast<std::size_t>(g) * g);
    Eigen::Vector2d point;

    const auto& stages = trace.region.stages();
    for (std::size_t si = 0; si < stages.size(); ++si) {
        for (int iy = 0; iy < g; ++iy) {
            point(1) = y_min + (iy + 0.5) * cell_y;
            for (int ix = 0; ix < g; ++ix) {
                point(0) = x_min + (ix + 0.5) * cell_x;
                mask[static_cast<std::size_t>(iy) * g + ix] =
                    stage_contains(stages[si], point) ? 1 : 0;
            }
        }
        std::string path;
        const auto emit = [&](double ax, double ay, double bx, double by) {
            path += "M" + px(to_px_x(ax)) + " " + px(to_px_y(ay)) + "L" +
                    px(to_px_x(bx)) + " " + px(to_px_y(by));
        };
        for (int iy = 0; iy < g; ++iy) {
            for (int ix = 0; ix < g; ++ix) {
                const bool here = mask[static_cast<std::size_t>(iy) * g + ix];
                if (ix + 1 < g) {
                    const bool right =
                        mask[static_cast<std::size_t>(iy) * g + ix + 1];
                    if (here != right) {
                        const double bx = x_min + (ix + 1) * cell_x;
                        emit(bx, y_min + iy * cell_y, bx, y_min + (iy + 1) * cell_y);
                    }
                }
                if (iy + 1 < g) {
                    const bool up =
                        mask[(static_cast<std::size_t>(iy) + 1) * g + ix];
                    if (here != up) {
                        const double by = y_min + (iy + 1) * cell_y;
                        emit(x_min + ix * cell_x, by, x_min + (ix + 1) * cell_x, by);
                    }
                }
            }
        }
        if (!path.empty()) {
            const char* color = kStageColors[si % (sizeof(kStageColors) /
                                                   sizeof(kStageColors[0]))];
            out << "<path class=\"stage\" d=\"" << path << "\" stroke=\""
                << color << "\" stroke-width=\"1\" fill=\"none\"/>\n";
        }
    }

    const std::set<std::size_t> rejected(trace.rejected.begin(),
                                         trace.rejected.end());
    for (Eigen::Index i = 0; i < z.rows(); ++i) {
        const double cx = to_px_x(z(i, 0));
        const double cy = to_px_y(z(i, 1));
        if (rejected.count(static_cast<std::size_t>(i))) {
            out << "<circle class=\"rej\" cx=\"" << px(cx) << "\" cy=\""
                << px(cy) << "\" r=\"2.5\" fill=\"#d62728\"/>\n";
        } else {
            out << "<circle class=\"pt\" cx=\"" << px(cx) << "\" cy=\""
                << px(cy) << "\" r=\"1.5\" fill=\"#7f7f7f\"/>\n";
        }
    }
    out << "</svg>\n";
}

void plot_regions_file(const std::string& path, const RegionTraceFile& trace,
                       const ZMatrix& data, const PlotOptions& options) {
    std::ofstream out(path);
    if (!out) throw DataError(path + ": cannot open output for writing");
    plot_regions(out, trace, data, options);
    if (!out) throw DataError(path + ": failed writing SVG");
}

}  // namespace nrfdr
