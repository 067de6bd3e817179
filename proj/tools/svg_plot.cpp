#include "svg_plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace autoreg::cli {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 460.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 150.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 55.0;

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

struct Axis {
    double lo = 0.0;
    double hi = 1.0;
    bool log = false;

    double map(double v) const { return log ? std::log10(v) : v; }
};

Axis fit_axis(const std::vector<Series>& series, bool use_x, bool log) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& s : series) {
        for (double v : use_x ? s.x : s.y) {
            if (!std::isfinite(v) || (log && v <= 0.0)) continue;
            const double m = log ? std::log10(v) : v;
            lo = std::min(lo, m);
            hi = std::max(hi, m);
        }
    }
    if (!std::isfinite(lo)) {
        lo = 0.0;
        hi = 1.0;
    }
    if (hi - lo < 1e-12) {
        lo -= 0.5;
        hi += 0.5;
    }
    const double pad = use_x ? 0.0 : 0.05 * (hi - lo);
    return Axis{lo - pad, hi + pad, log};
}

std::vector<double> ticks(double lo, double hi, bool integer_only) {
    const double span = hi - lo;
    double step = std::pow(10.0, std::floor(std::log10(span / 5.0)));
    for (double mult : {2.0, 5.0, 10.0}) {
        if (span / step <= 7.0) break;
        step = std::pow(10.0, std::floor(std::log10(span / 5.0))) * mult;
    }
    if (integer_only) step = std::max(step, 1.0);
    std::vector<double> out;
    for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * span; t += step) {
        out.push_back(std::abs(t) < 1e-12 * step ? 0.0 : t);
    }
    return out;
}

std::string tick_label(double t, bool log) {
    if (log) return fmt::format("1e{}", static_cast<int>(std::lround(t)));
    return fmt::format("{:g}", t);
}

}  // namespace

const std::string& palette(std::size_t i) {
    static const std::array<std::string, 8> colors = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                                      "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};
    return colors[i % colors.size()];
}

std::string render_svg(const Chart& chart) {
    const Axis ax = fit_axis(chart.series, true, chart.log_x);
    const Axis ay = fit_axis(chart.series, false, chart.log_y);
    const double pw = kWidth - kLeft - kRight;
    const double ph = kHeight - kTop - kBottom;
    const auto px = [&](double v) { return kLeft + (ax.map(v) - ax.lo) / (ax.hi - ax.lo) * pw; };
    const auto py = [&](double v) { return kTop + ph - (ay.map(v) - ay.lo) / (ay.hi - ay.lo) * ph; };

    std::string svg = fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0f}\" height=\"{:.0f}\" "
        "viewBox=\"0 0 {:.0f} {:.0f}\" font-family=\"sans-serif\" font-size=\"12\">\n",
        kWidth, kHeight, kWidth, kHeight);
    svg += fmt::format("<rect width=\"{:.0f}\" height=\"{:.0f}\" fill=\"white\"/>\n", kWidth, kHeight);
    svg += fmt::format("<text x=\"{:.1f}\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n",
                       kLeft + pw / 2, escape(chart.title));

    // grid and tick labels
    for (double t : ticks(ax.lo, ax.hi, ax.log)) {
        const double x = kLeft + (t - ax.lo) / (ax.hi - ax.lo) * pw;
        svg += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"#ddd\"/>\n",
                           x, kTop, x, kTop + ph);
        svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{}</text>\n", x,
                           kTop + ph + 18, tick_label(t, ax.log));
    }
    for (double t : ticks(ay.lo, ay.hi, ay.log)) {
        const double y = kTop + ph - (t - ay.lo) / (ay.hi - ay.lo) * ph;
        svg += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"#ddd\"/>\n",
                           kLeft, y, kLeft + pw, y);
        svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"end\">{}</text>\n", kLeft - 6,
                           y + 4, tick_label(t, ay.log));
    }
    svg += fmt::format("<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"none\" stroke=\"black\"/>\n",
                       kLeft, kTop, pw, ph);
    svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{}</text>\n", kLeft + pw / 2,
                       kHeight - 12, escape(chart.x_label));
    svg += fmt::format("<text x=\"16\" y=\"{:.2f}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {:.2f})\">{}</text>\n",
                       kTop + ph / 2, kTop + ph / 2, escape(chart.y_label));

    for (const auto& s : chart.series) {
        std::string points;
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            if ((ax.log && s.x[i] <= 0.0) || (ay.log && s.y[i] <= 0.0)) continue;
            points += fmt::format("{}{:.2f},{:.2f}", points.empty() ? "" : " ", px(s.x[i]), py(s.y[i]));
        }
        if (points.empty()) continue;
        svg += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"{:.2f}\" stroke-opacity=\"{:.2f}\"{} points=\"{}\"/>\n",
                           s.color, s.width, s.opacity, s.dashed ? " stroke-dasharray=\"6 4\"" : "", points);
    }

    double ly = kTop + 10;
    for (const auto& s : chart.series) {
        if (s.label.empty()) continue;
        const double lx = kLeft + pw + 12;
        svg += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"{}\" stroke-width=\"2.5\"{}/>\n",
                           lx, ly, lx + 24, ly, s.color, s.dashed ? " stroke-dasharray=\"6 4\"" : "");
        svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\">{}</text>\n", lx + 30, ly + 4, escape(s.label));
        ly += 18;
    }
    svg += "</svg>\n";
    return svg;
}

}  // namespace autoreg::cli
