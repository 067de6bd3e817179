#pragma once

#include <string>
#include <vector>

namespace autoreg::cli {

struct Series {
    std::vector<double> x;
    std::vector<double> y;
    std::string color = "#1f77b4";
    double width = 0.6;
    bool dashed = false;
    double opacity = 0.35;
    std::string label;  // legend entry when non-empty
};

struct Chart {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = false;
    bool log_y = false;
    std::vector<Series> series;
};

/// Static SVG line chart. Output depends only on the chart contents.
std::string render_svg(const Chart& chart);

/// Categorical palette, cycled.
const std::string& palette(std::size_t i);

}  // namespace autoreg::cli
