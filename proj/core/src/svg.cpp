#include "fluxlattice/svg.hpp"
#include "fluxlattice/csv.hpp"
#include "fluxlattice/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace fluxlattice {

namespace {

struct Range {
    double lo = 0.0, hi = 1.0;
};

Range nice_range(double lo, double hi) {
    if (!(hi > lo)) {
        lo -= 0.5;
        hi += 0.5;
    }
    const double pad = 0.05 * (hi - lo);
    return {lo - pad, hi + pad};
}

std::vector<double> linear_ticks(const Range& r, int want = 6) {
    const double span = r.hi - r.lo;
    double step = std::pow(10.0, std::floor(std::log10(span / want)));
    for (double mult : {1.0, 2.0, 5.0, 10.0}) {
        if (span / (step * mult) <= want) {
            step *= mult;
            break;
        }
    }
    std::vector<double> ticks;
    for (double t = std::ceil(r.lo / step) * step; t <= r.hi + 1e-12 * span; t += step)
        ticks.push_back(t);
    return ticks;
}

} // namespace

void write_svg_line_plot(const std::filesystem::path& path,
                         const std::vector<PlotSeries>& series,
                         const PlotOptions& opts) {
    namespace fs = std::filesystem;

    const double ml = 70, mr = 20, mt = 36, mb = 48;
    const double pw = opts.width - ml - mr;
    const double ph = opts.height - mt - mb;

    bool any = false;
    double xlo = 0, xhi = 1, ylo = 0, yhi = 1;
    for (const PlotSeries& s : series) {
        for (const auto& [x, y] : s.points) {
            if (!std::isfinite(x) || !std::isfinite(y))
                continue;
            if (opts.log_y && y <= 0.0)
                continue;
            const double yy = opts.log_y ? std::log10(y) : y;
            if (!any) {
                xlo = xhi = x;
                ylo = yhi = yy;
                any = true;
            } else {
                xlo = std::min(xlo, x);
                xhi = std::max(xhi, x);
                ylo = std::min(ylo, yy);
                yhi = std::max(yhi, yy);
            }
        }
    }
    const Range xr = nice_range(xlo, xhi);
    const Range yr = nice_range(ylo, yhi);

    auto px = [&](double x) { return ml + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
    auto py = [&](double y) {
        const double yy = opts.log_y ? std::log10(y) : y;
        return mt + ph - (yy - yr.lo) / (yr.hi - yr.lo) * ph;
    };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opts.width
        << "\" height=\"" << opts.height << "\" viewBox=\"0 0 " << opts.width << " "
        << opts.height << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << opts.width / 2 << "\" y=\"20\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"14\">" << opts.title << "</text>\n";

    for (double t : linear_ticks(xr)) {
        const double x = px(t);
        svg << "<line x1=\"" << x << "\" y1=\"" << mt << "\" x2=\"" << x << "\" y2=\""
            << mt + ph << "\" stroke=\"#dddddd\"/>\n";
        svg << "<text x=\"" << x << "\" y=\"" << mt + ph + 16
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
            << format_double(t) << "</text>\n";
    }
    for (double t : linear_ticks(yr)) {
        const double y = mt + ph - (t - yr.lo) / (yr.hi - yr.lo) * ph;
        svg << "<line x1=\"" << ml << "\" y1=\"" << y << "\" x2=\"" << ml + pw
            << "\" y2=\"" << y << "\" stroke=\"#dddddd\"/>\n";
        svg << "<text x=\"" << ml - 6 << "\" y=\"" << y + 4
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
            << (opts.log_y ? "1e" + format_double(t) : format_double(t)) << "</text>\n";
    }
    svg << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw
        << "\" height=\"" << ph << "\" fill=\"none\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << ml + pw / 2 << "\" y=\"" << opts.height - 10
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
        << opts.x_label << "</text>\n";
    svg << "<text x=\"16\" y=\"" << mt + ph / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
        << "transform=\"rotate(-90 16 " << mt + ph / 2 << ")\">" << opts.y_label
        << "</text>\n";

    for (const PlotSeries& s : series) {
        std::ostringstream pts;
        bool open = false;
        auto flush = [&]() {
            if (open) {
                svg << "<polyline fill=\"none\" stroke=\"" << s.color
                    << "\" stroke-width=\"1.6\""
                    << (s.dashed ? " stroke-dasharray=\"6 4\"" : "") << " points=\""
                    << pts.str() << "\"/>\n";
            }
            pts.str("");
            open = false;
        };
        for (const auto& [x, y] : s.points) {
            const bool bad = !std::isfinite(x) || !std::isfinite(y) ||
                             (opts.log_y && y <= 0.0);
            if (bad) {
                flush();
                continue;
            }
            pts << px(x) << "," << py(y) << " ";
            open = true;
        }
        flush();
    }

    double ly = mt + 14;
    for (const PlotSeries& s : series) {
        svg << "<line x1=\"" << ml + pw - 150 << "\" y1=\"" << ly - 4 << "\" x2=\""
            << ml + pw - 120 << "\" y2=\"" << ly - 4 << "\" stroke=\"" << s.color
            << "\" stroke-width=\"2\"" << (s.dashed ? " stroke-dasharray=\"6 4\"" : "")
            << "/>\n";
        svg << "<text x=\"" << ml + pw - 114 << "\" y=\"" << ly
            << "\" font-family=\"sans-serif\" font-size=\"11\">" << s.label
            << "</text>\n";
        ly += 16;
    }
    svg << "</svg>\n";

    if (path.has_parent_path())
        fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out)
            throw InputError("svg: cannot write '" + tmp.string() + "'");
        out << svg.str();
    }
    fs::rename(tmp, path);
}

} // namespace fluxlattice
