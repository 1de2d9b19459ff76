#pragma once
// Minimal SVG line charts for eyeballing CSV outputs. The CSV files are the
// contract; these charts are convenience only.

#include <string>
#include <vector>

namespace sml {

struct SvgSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

// Polyline chart; y may be plotted on a log10 scale (nonpositive values are
// dropped from log-scale series).
void write_svg_lines(const std::string& path, const std::string& title,
                     const std::vector<SvgSeries>& series, bool log_y = false);

}  // namespace sml
