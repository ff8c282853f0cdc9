#ifndef MLAB_SVG_HPP
#define MLAB_SVG_HPP

#include <string>
#include <utility>
#include <vector>

namespace mlab {

// scatter series drawn as circles on log-log axes
struct SvgSeries {
    std::vector<std::pair<double, double>> points;  // raw (x, y), all > 0
    std::string label;
    std::string color = "#1f6feb";
};

// straight line in log10 space: log10(y) = slope_log10 * log10(x) + intercept_log10
struct SvgRefLine {
    double slope = 0.0;      // d log10 y / d log10 x (equals the natural-log slope)
    double intercept = 0.0;  // log10 y at log10 x = 0
    std::string label;
    std::string color = "#888888";
    bool dashed = true;
};

// deterministic log-log plot; annotated_slope is printed with 9 decimals in a
// machine-readable "fitted slope = ..." text element
void write_loglog_svg(const std::string& path, const std::string& title,
                      const std::string& x_label, const std::string& y_label,
                      const std::vector<SvgSeries>& series,
                      const std::vector<SvgRefLine>& lines, double annotated_slope);

}  // namespace mlab

#endif
