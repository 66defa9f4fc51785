#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace fluxlattice {

/// One polyline of an SVG plot. Points with non-finite coordinates split the
/// line (used for null perturbative values near the divergence).
struct PlotSeries {
    std::string label;
    std::string color = "#1f77b4";
    bool dashed = false;
    std::vector<std::pair<double, double>> points;
};

struct PlotOptions {
    std::string title, x_label, y_label;
    bool log_y = false;
    int width = 820, height = 520;
};

/// Minimal built-in line plotter: axes, ticks, series, legend. Figures are a
/// convenience; the CSV next to them is the contract.
void write_svg_line_plot(const std::filesystem::path& path,
                         const std::vector<PlotSeries>& series,
                         const PlotOptions& opts);

} // namespace fluxlattice
