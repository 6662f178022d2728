#pragma once

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "dwell/errors.hpp"
#include "dwell/io/csv.hpp"

namespace dwell::io {

namespace detail {

inline std::string px(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

inline std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

/// Round tick spacing to 1, 2 or 5 times a power of ten.
inline double nice_step(double span, int target_ticks) {
    if (!(span > 0.0)) return 1.0;
    const double raw = span / target_ticks;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double r = raw / mag;
    double step;
    if (r <= 1.0)
        step = 1.0;
    else if (r <= 2.0)
        step = 2.0;
    else if (r <= 5.0)
        step = 5.0;
    else
        step = 10.0;
    return step * mag;
}

struct Range {
    double lo = 0.0;
    double hi = 1.0;

    void include(double v) {
        if (!std::isfinite(v)) return;
        if (v < lo) lo = v;
        if (v > hi) hi = v;
    }
};

}  // namespace detail

/// Line chart of the named CSV columns against the CSV's first column.
/// Output depends only on the CSV contents and the column list, so identical
/// inputs give identical bytes.
inline std::string render_plot_svg(const CsvTable& table, const std::vector<std::string>& columns) {
    if (table.header.empty()) throw ConfigError("render_plot: CSV has no columns");
    if (columns.empty()) throw ConfigError("render_plot: no columns requested");
    const std::vector<double>& x = table.columns.front();
    std::vector<const std::vector<double>*> series;
    series.reserve(columns.size());
    for (const std::string& name : columns) series.push_back(&table.column(name));

    constexpr double width = 960, height = 600;
    constexpr double ml = 74, mr = 24, mt = 46, mb = 58;
    const double pw = width - ml - mr, ph = height - mt - mb;

    double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
    double y_lo = x_lo, y_hi = -x_lo;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!std::isfinite(x[i])) continue;
        for (const auto* s : series) {
            if (!std::isfinite((*s)[i])) continue;
            x_lo = std::min(x_lo, x[i]);
            x_hi = std::max(x_hi, x[i]);
            y_lo = std::min(y_lo, (*s)[i]);
            y_hi = std::max(y_hi, (*s)[i]);
        }
    }
    if (!std::isfinite(x_lo)) {
        x_lo = 0.0;
        x_hi = 1.0;
        y_lo = 0.0;
        y_hi = 1.0;
    }
    if (x_hi - x_lo <= 0.0) {
        x_lo -= 1.0;
        x_hi += 1.0;
    }
    if (y_hi - y_lo <= 0.0) {
        y_lo -= 1.0;
        y_hi += 1.0;
    }
    const double y_pad = 0.05 * (y_hi - y_lo);
    y_lo -= y_pad;
    y_hi += y_pad;

    const auto map_x = [&](double v) { return ml + (v - x_lo) / (x_hi - x_lo) * pw; };
    const auto map_y = [&](double v) { return mt + (1.0 - (v - y_lo) / (y_hi - y_lo)) * ph; };

    static constexpr std::array<const char*, 6> palette = {"#1f77b4", "#d62728", "#2ca02c",
                                                           "#9467bd", "#ff7f0e", "#8c564b"};

    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"960\" height=\"600\" "
           "viewBox=\"0 0 960 600\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    // Grid lines and tick labels.
    const double x_step = detail::nice_step(x_hi - x_lo, 8);
    const double y_step = detail::nice_step(y_hi - y_lo, 6);
    svg += "<g stroke=\"#dddddd\" stroke-width=\"1\">\n";
    for (double t = std::ceil(x_lo / x_step) * x_step; t <= x_hi + 1e-12 * x_step; t += x_step) {
        const std::string sx = detail::px(map_x(t));
        svg += "<line x1=\"" + sx + "\" y1=\"" + detail::px(mt) + "\" x2=\"" + sx + "\" y2=\"" +
               detail::px(mt + ph) + "\"/>\n";
    }
    for (double t = std::ceil(y_lo / y_step) * y_step; t <= y_hi + 1e-12 * y_step; t += y_step) {
        const std::string sy = detail::px(map_y(t));
        svg += "<line x1=\"" + detail::px(ml) + "\" y1=\"" + sy + "\" x2=\"" + detail::px(ml + pw) +
               "\" y2=\"" + sy + "\"/>\n";
    }
    svg += "</g>\n";
    svg += "<g font-family=\"sans-serif\" font-size=\"12\" fill=\"#333333\">\n";
    for (double t = std::ceil(x_lo / x_step) * x_step; t <= x_hi + 1e-12 * x_step; t += x_step) {
        svg += "<text x=\"" + detail::px(map_x(t)) + "\" y=\"" + detail::px(mt + ph + 18) +
               "\" text-anchor=\"middle\">" + detail::tick_label(t) + "</text>\n";
    }
    for (double t = std::ceil(y_lo / y_step) * y_step; t <= y_hi + 1e-12 * y_step; t += y_step) {
        svg += "<text x=\"" + detail::px(ml - 8) + "\" y=\"" + detail::px(map_y(t) + 4) +
               "\" text-anchor=\"end\">" + detail::tick_label(t) + "</text>\n";
    }
    svg += "</g>\n";

    // Frame and axis labels.
    svg += "<rect x=\"" + detail::px(ml) + "\" y=\"" + detail::px(mt) + "\" width=\"" +
           detail::px(pw) + "\" height=\"" + detail::px(ph) +
           "\" fill=\"none\" stroke=\"#000000\"/>\n";
    svg += "<text x=\"" + detail::px(ml + pw / 2) + "\" y=\"" + detail::px(height - 14) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">" +
           table.header.front() + "</text>\n";
    std::string title;
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i > 0) title += ", ";
        title += columns[i];
    }
    svg += "<text x=\"" + detail::px(ml + pw / 2) + "\" y=\"28\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"15\">" +
           title + " vs " + table.header.front() + "</text>\n";

    // One polyline per requested column; NaN cells break the line.
    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = palette[s % palette.size()];
        std::string points;
        const auto flush = [&]() {
            if (points.empty()) return;
            svg += "<polyline fill=\"none\" stroke=\"";
            svg += color;
            svg += "\" stroke-width=\"1.5\" points=\"" + points + "\"/>\n";
            points.clear();
        };
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double yv = (*series[s])[i];
            if (!std::isfinite(x[i]) || !std::isfinite(yv)) {
                flush();
                continue;
            }
            if (!points.empty()) points += ' ';
            points += detail::px(map_x(x[i])) + "," + detail::px(map_y(yv));
        }
        flush();
    }

    // Legend.
    svg += "<g font-family=\"sans-serif\" font-size=\"12\">\n";
    const double lx = ml + pw - 180, ly = mt + 12;
    svg += "<rect x=\"" + detail::px(lx - 8) + "\" y=\"" + detail::px(ly - 10) +
           "\" width=\"186\" height=\"" + detail::px(columns.size() * 18 + 8.0) +
           "\" fill=\"white\" fill-opacity=\"0.85\" stroke=\"#cccccc\"/>\n";
    for (std::size_t s = 0; s < columns.size(); ++s) {
        const double ey = ly + 18.0 * static_cast<double>(s) + 4;
        svg += "<line x1=\"" + detail::px(lx) + "\" y1=\"" + detail::px(ey - 4) + "\" x2=\"" +
               detail::px(lx + 22) + "\" y2=\"" + detail::px(ey - 4) + "\" stroke=\"";
        svg += palette[s % palette.size()];
        svg += "\" stroke-width=\"2\"/>\n";
        svg += "<text x=\"" + detail::px(lx + 28) + "\" y=\"" + detail::px(ey) + "\">" +
               columns[s] + "</text>\n";
    }
    svg += "</g>\n</svg>\n";
    return svg;
}

inline void render_plot(const std::filesystem::path& csv_path,
                        const std::vector<std::string>& columns,
                        const std::filesystem::path& out_path, bool overwrite = false) {
    const CsvTable table = read_csv(csv_path);
    write_text_atomic(out_path, render_plot_svg(table, columns), overwrite);
}

}  // namespace dwell::io
