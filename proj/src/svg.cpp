#include "mlab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "mlab/geometry.hpp"

namespace mlab {

namespace {

struct Mapper {
    double x0, x1, y0, y1;  // log10 data range
    double px0, px1, py0, py1;  // pixel frame (py0 = top)

    double x(double lx) const { return px0 + (lx - x0) / (x1 - x0) * (px1 - px0); }
    double y(double ly) const { return py1 - (ly - y0) / (y1 - y0) * (py1 - py0); }
};

}  // namespace

void write_loglog_svg(const std::string& path, const std::string& title,
                      const std::string& x_label, const std::string& y_label,
                      const std::vector<SvgSeries>& series,
                      const std::vector<SvgRefLine>& lines, double annotated_slope) {
    double lx_min = 0, lx_max = 0, ly_min = 0, ly_max = 0;
    bool first = true;
    for (const SvgSeries& s : series) {
        for (const auto& pt : s.points) {
            if (!(pt.first > 0) || !(pt.second > 0))
                throw ConfigError("log-log plot needs strictly positive coordinates");
            double lx = std::log10(pt.first), ly = std::log10(pt.second);
            if (first) {
                lx_min = lx_max = lx;
                ly_min = ly_max = ly;
                first = false;
            } else {
                lx_min = std::min(lx_min, lx);
                lx_max = std::max(lx_max, lx);
                ly_min = std::min(ly_min, ly);
                ly_max = std::max(ly_max, ly);
            }
        }
    }
    if (first) throw ConfigError("log-log plot needs at least one point");
    // pad the data range; degenerate ranges get a fixed half-decade
    double pad_x = (lx_max - lx_min) > 0 ? 0.08 * (lx_max - lx_min) : 0.5;
    double pad_y = (ly_max - ly_min) > 0 ? 0.15 * (ly_max - ly_min) : 0.5;
    Mapper map{lx_min - pad_x, lx_max + pad_x, ly_min - pad_y, ly_max + pad_y,
               70.0, 600.0, 40.0, 420.0};

    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw ConfigError("cannot open file for writing: " + path);
    std::fprintf(f, "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 660 480\" "
                    "font-family=\"monospace\" font-size=\"12\">\n");
    std::fprintf(f, "<rect x=\"0\" y=\"0\" width=\"660\" height=\"480\" fill=\"white\"/>\n");
    std::fprintf(f, "<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" fill=\"none\" "
                    "stroke=\"black\"/>\n",
                 map.px0, map.py0, map.px1 - map.px0, map.py1 - map.py0);
    std::fprintf(f, "<text x=\"%.2f\" y=\"20\" text-anchor=\"middle\">%s</text>\n",
                 0.5 * (map.px0 + map.px1), title.c_str());
    std::fprintf(f, "<text x=\"%.2f\" y=\"460\" text-anchor=\"middle\">%s (log scale)</text>\n",
                 0.5 * (map.px0 + map.px1), x_label.c_str());
    std::fprintf(f, "<text x=\"18\" y=\"%.2f\" text-anchor=\"middle\" "
                    "transform=\"rotate(-90 18 %.2f)\">%s (log scale)</text>\n",
                 0.5 * (map.py0 + map.py1), 0.5 * (map.py0 + map.py1), y_label.c_str());

    // decade tick marks
    for (int e = static_cast<int>(std::ceil(map.x0)); e <= static_cast<int>(std::floor(map.x1)); ++e) {
        double px = map.x(e);
        std::fprintf(f, "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"#cccccc\"/>\n",
                     px, map.py0, px, map.py1);
        std::fprintf(f, "<text x=\"%.2f\" y=\"%.2f\" text-anchor=\"middle\">1e%d</text>\n",
                     px, map.py1 + 16.0, e);
    }
    for (int e = static_cast<int>(std::ceil(map.y0)); e <= static_cast<int>(std::floor(map.y1)); ++e) {
        double py = map.y(e);
        std::fprintf(f, "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"#cccccc\"/>\n",
                     map.px0, py, map.px1, py);
        std::fprintf(f, "<text x=\"%.2f\" y=\"%.2f\" text-anchor=\"end\">1e%d</text>\n",
                     map.px0 - 6.0, py + 4.0, e);
    }

    // reference / fitted lines clipped to the frame
    for (const SvgRefLine& ln : lines) {
        double ly_at_x0 = ln.slope * map.x0 + ln.intercept;
        double ly_at_x1 = ln.slope * map.x1 + ln.intercept;
        std::fprintf(f, "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"%s\"%s "
                        "clip-path=\"url(#frame)\"/>\n",
                     map.x(map.x0), map.y(ly_at_x0), map.x(map.x1), map.y(ly_at_x1),
                     ln.color.c_str(), ln.dashed ? " stroke-dasharray=\"6 4\"" : "");
    }
    std::fprintf(f, "<clipPath id=\"frame\"><rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" "
                    "height=\"%.2f\"/></clipPath>\n",
                 map.px0, map.py0, map.px1 - map.px0, map.py1 - map.py0);

    for (const SvgSeries& s : series) {
        for (const auto& pt : s.points) {
            std::fprintf(f, "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"3.5\" fill=\"%s\"/>\n",
                         map.x(std::log10(pt.first)), map.y(std::log10(pt.second)), s.color.c_str());
        }
    }

    // legend and the machine-readable slope annotation
    double legend_y = map.py0 + 16.0;
    for (const SvgSeries& s : series) {
        std::fprintf(f, "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"3.5\" fill=\"%s\"/>\n",
                     map.px0 + 12.0, legend_y - 4.0, s.color.c_str());
        std::fprintf(f, "<text x=\"%.2f\" y=\"%.2f\">%s</text>\n", map.px0 + 22.0, legend_y,
                     s.label.c_str());
        legend_y += 16.0;
    }
    for (const SvgRefLine& ln : lines) {
        std::fprintf(f, "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"%s\"%s/>\n",
                     map.px0 + 6.0, legend_y - 4.0, map.px0 + 18.0, legend_y - 4.0, ln.color.c_str(),
                     ln.dashed ? " stroke-dasharray=\"6 4\"" : "");
        std::fprintf(f, "<text x=\"%.2f\" y=\"%.2f\">%s</text>\n", map.px0 + 22.0, legend_y,
                     ln.label.c_str());
        legend_y += 16.0;
    }
    std::fprintf(f, "<text x=\"%.2f\" y=\"%.2f\">fitted slope = %.9f</text>\n", map.px0 + 6.0,
                 map.py1 - 8.0, annotated_slope);
    std::fprintf(f, "</svg>\n");
    std::fclose(f);
}

}  // namespace mlab
