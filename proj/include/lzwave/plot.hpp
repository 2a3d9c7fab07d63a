#pragma once

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

namespace lzwave {

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

namespace plot_detail {

inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

inline const char* series_color(std::size_t i) {
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                    "#9467bd", "#ff7f0e", "#8c564b"};
    return palette[i % 6];
}

struct Panel {
    double x0, y0, w, h;  // drawing area in svg coordinates
    double xmin, xmax, ymin, ymax;

    double px(double x) const { return x0 + (x - xmin) / (xmax - xmin) * w; }
    double py(double y) const { return y0 + h - (y - ymin) / (ymax - ymin) * h; }
};

inline Panel fit_panel(double x0, double y0, double w, double h,
                       const std::vector<PlotSeries>& series) {
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, s.y[i]);
            ymax = std::max(ymax, s.y[i]);
        }
    if (xmin > xmax) { xmin = 0.0; xmax = 1.0; }
    if (ymin > ymax) { ymin = 0.0; ymax = 1.0; }
    if (xmax - xmin < 1e-12) { xmin -= 1.0; xmax += 1.0; }
    const double ypad = (ymax - ymin < 1e-12) ? 1.0 : 0.05 * (ymax - ymin);
    return Panel{x0, y0, w, h, xmin, xmax, ymin - ypad, ymax + ypad};
}

inline void draw_panel(std::ostream& os, const std::string& title,
                       const std::string& xlabel, const std::string& ylabel,
                       double x0, double y0, double w, double h,
                       const std::vector<PlotSeries>& series) {
    const Panel p = fit_panel(x0, y0, w, h, series);
    os << "<rect x=\"" << fmt(x0) << "\" y=\"" << fmt(y0) << "\" width=\"" << fmt(w)
       << "\" height=\"" << fmt(h) << "\" fill=\"none\" stroke=\"#444\"/>\n";
    os << "<text x=\"" << fmt(x0 + w / 2) << "\" y=\"" << fmt(y0 - 10)
       << "\" text-anchor=\"middle\" font-size=\"14\">" << title << "</text>\n";
    os << "<text x=\"" << fmt(x0 + w / 2) << "\" y=\"" << fmt(y0 + h + 32)
       << "\" text-anchor=\"middle\" font-size=\"12\">" << xlabel << "</text>\n";
    os << "<text x=\"" << fmt(x0 - 42) << "\" y=\"" << fmt(y0 + h / 2)
       << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 "
       << fmt(x0 - 42) << " " << fmt(y0 + h / 2) << ")\">" << ylabel << "</text>\n";

    for (int t = 0; t <= 4; ++t) {
        const double xv = p.xmin + (p.xmax - p.xmin) * t / 4.0;
        const double yv = p.ymin + (p.ymax - p.ymin) * t / 4.0;
        os << "<line x1=\"" << fmt(p.px(xv)) << "\" y1=\"" << fmt(y0 + h) << "\" x2=\""
           << fmt(p.px(xv)) << "\" y2=\"" << fmt(y0 + h + 4) << "\" stroke=\"#444\"/>\n";
        os << "<text x=\"" << fmt(p.px(xv)) << "\" y=\"" << fmt(y0 + h + 16)
           << "\" text-anchor=\"middle\" font-size=\"10\">" << fmt(xv) << "</text>\n";
        os << "<line x1=\"" << fmt(x0 - 4) << "\" y1=\"" << fmt(p.py(yv)) << "\" x2=\""
           << fmt(x0) << "\" y2=\"" << fmt(p.py(yv)) << "\" stroke=\"#444\"/>\n";
        os << "<text x=\"" << fmt(x0 - 6) << "\" y=\"" << fmt(p.py(yv) + 3)
           << "\" text-anchor=\"end\" font-size=\"10\">" << fmt(yv) << "</text>\n";
    }

    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto& s = series[i];
        if (s.x.empty()) continue;
        os << "<polyline fill=\"none\" stroke=\"" << series_color(i)
           << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t k = 0; k < s.x.size(); ++k)
            os << (k ? " " : "") << fmt(p.px(s.x[k])) << "," << fmt(p.py(s.y[k]));
        os << "\"/>\n";
        const double ly = y0 + 14 + 14 * static_cast<double>(i);
        os << "<line x1=\"" << fmt(x0 + w - 86) << "\" y1=\"" << fmt(ly - 4) << "\" x2=\""
           << fmt(x0 + w - 66) << "\" y2=\"" << fmt(ly - 4) << "\" stroke=\""
           << series_color(i) << "\" stroke-width=\"2\"/>\n";
        os << "<text x=\"" << fmt(x0 + w - 62) << "\" y=\"" << fmt(ly)
           << "\" font-size=\"11\">" << s.label << "</text>\n";
    }
}

}  // namespace plot_detail

/// Two line charts side by side in one SVG document.
inline void write_two_panel_svg(std::ostream& os,
                                const std::string& left_title,
                                const std::string& left_ylabel,
                                const std::vector<PlotSeries>& left,
                                const std::string& right_title,
                                const std::string& right_ylabel,
                                const std::vector<PlotSeries>& right,
                                const std::string& xlabel) {
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"1120\" height=\"420\" "
          "font-family=\"sans-serif\">\n";
    os << "<rect width=\"1120\" height=\"420\" fill=\"white\"/>\n";
    plot_detail::draw_panel(os, left_title, xlabel, left_ylabel, 70, 40, 430, 310, left);
    plot_detail::draw_panel(os, right_title, xlabel, right_ylabel, 640, 40, 430, 310, right);
    os << "</svg>\n";
}

}  // namespace lzwave
