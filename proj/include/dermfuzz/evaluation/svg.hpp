#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "dermfuzz/core/error.hpp"

namespace dermfuzz {

struct ChartSeries {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

struct LineChart {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<ChartSeries> series;
};

namespace detail {

inline std::string svg_escape(const std::string& s) {
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

inline std::string svg_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

inline std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

}  // namespace detail

/// Renders a plain SVG line chart. Non-finite points are skipped.
inline std::string render_svg(const LineChart& chart) {
    constexpr double W = 640, H = 420, left = 70, right = 150, top = 40, bottom = 60;
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf"};

    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const auto& s : chart.series)
        for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            x0 = std::min(x0, s.x[i]), x1 = std::max(x1, s.x[i]);
            y0 = std::min(y0, s.y[i]), y1 = std::max(y1, s.y[i]);
        }
    if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    if (x1 == x0) x0 -= 0.5, x1 += 0.5;
    if (y1 == y0) y0 -= 0.5, y1 += 0.5;
    const double pw = W - left - right, ph = H - top - bottom;
    auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
    auto py = [&](double y) { return top + (1.0 - (y - y0) / (y1 - y0)) * ph; };

    using detail::svg_num;
    std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + svg_num(W) + "\" height=\"" + svg_num(H) +
                      "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out += "<text x=\"" + svg_num(W / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" +
           detail::svg_escape(chart.title) + "</text>\n";
    out += "<line x1=\"" + svg_num(left) + "\" y1=\"" + svg_num(top + ph) + "\" x2=\"" + svg_num(left + pw) + "\" y2=\"" +
           svg_num(top + ph) + "\" stroke=\"black\"/>\n";
    out += "<line x1=\"" + svg_num(left) + "\" y1=\"" + svg_num(top) + "\" x2=\"" + svg_num(left) + "\" y2=\"" +
           svg_num(top + ph) + "\" stroke=\"black\"/>\n";
    for (int t = 0; t <= 4; ++t) {
        const double xv = x0 + (x1 - x0) * t / 4.0;
        const double yv = y0 + (y1 - y0) * t / 4.0;
        out += "<text x=\"" + svg_num(px(xv)) + "\" y=\"" + svg_num(top + ph + 18) + "\" text-anchor=\"middle\">" +
               detail::tick_label(xv) + "</text>\n";
        out += "<text x=\"" + svg_num(left - 8) + "\" y=\"" + svg_num(py(yv) + 4) + "\" text-anchor=\"end\">" +
               detail::tick_label(yv) + "</text>\n";
    }
    out += "<text x=\"" + svg_num(left + pw / 2) + "\" y=\"" + svg_num(H - 15) + "\" text-anchor=\"middle\">" +
           detail::svg_escape(chart.x_label) + "</text>\n";
    out += "<text transform=\"translate(18," + svg_num(top + ph / 2) + ") rotate(-90)\" text-anchor=\"middle\">" +
           detail::svg_escape(chart.y_label) + "</text>\n";

    for (std::size_t k = 0; k < chart.series.size(); ++k) {
        const auto& s = chart.series[k];
        const char* colour = palette[k % (sizeof palette / sizeof *palette)];
        std::string points;
        for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            points += svg_num(px(s.x[i])) + "," + svg_num(py(s.y[i])) + " ";
        }
        out += "<polyline fill=\"none\" stroke=\"" + std::string(colour) + "\" stroke-width=\"2\" points=\"" + points +
               "\"/>\n";
        const double ly = top + 14 + 18.0 * static_cast<double>(k);
        out += "<line x1=\"" + svg_num(W - right + 12) + "\" y1=\"" + svg_num(ly) + "\" x2=\"" + svg_num(W - right + 32) +
               "\" y2=\"" + svg_num(ly) + "\" stroke=\"" + colour + "\" stroke-width=\"2\"/>\n";
        out += "<text x=\"" + svg_num(W - right + 38) + "\" y=\"" + svg_num(ly + 4) + "\">" + detail::svg_escape(s.name) +
               "</text>\n";
    }
    out += "</svg>\n";
    return out;
}

inline void write_svg(const LineChart& chart, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write chart: " + path.string());
    out << render_svg(chart);
}

}  // namespace dermfuzz
