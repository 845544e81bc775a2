#include "plot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace resci::cli {

namespace {

bool is_resample(const simulation::BenchRecord& r) { return r.method == "resample"; }

std::optional<double> x_of(const simulation::BenchRecord& r, const std::string& axis) {
    if (axis == "c_star") return r.c_star;
    if (axis == "n") return static_cast<double>(r.n);
    if (r.M > 0) return static_cast<double>(r.M);
    return std::nullopt;
}

// Everything that identifies a curve apart from the x value.
std::string series_of(const simulation::BenchRecord& r, const std::string& axis) {
    std::ostringstream s;
    s << r.scenario << '/' << r.method;
    if (axis != "M" && r.M > 0) s << "/M=" << r.M;
    if (axis != "c_star" && r.c_star) s << "/c=" << *r.c_star;
    return s.str();
}

std::string fmt(double v) {
    std::ostringstream s;
    s.precision(4);
    s << v;
    return s.str();
}

}  // namespace

std::string choose_x_axis(const std::vector<simulation::BenchRecord>& records, const std::string& requested) {
    if (requested == "c_star" || requested == "n" || requested == "M") return requested;
    if (requested != "auto") throw std::invalid_argument("x axis must be auto, c_star, n or M");
    for (const std::string axis : {"c_star", "n", "M"}) {
        std::set<double> values;
        for (const auto& r : records)
            if (is_resample(r))
                if (auto x = x_of(r, axis)) values.insert(*x);
        if (values.size() > 1) return axis;
    }
    return "c_star";
}

std::vector<PlotPoint> plot_points(const std::vector<simulation::BenchRecord>& records, const std::string& x_axis) {
    std::vector<PlotPoint> out;
    for (const auto& r : records) {
        // Resample rows share an x axis; everything else is a reference level.
        const std::optional<double> x = is_resample(r) ? x_of(r, x_axis) : std::nullopt;
        const std::string series = series_of(r, x_axis);
        const bool has_interval = r.no_interval_pct < 100.0;
        if (has_interval) {
            out.push_back({"coverage", series, x_axis, x, r.coverage});
            out.push_back({"length_union", series, x_axis, x, r.avg_length_union});
            out.push_back({"length_hull", series, x_axis, x, r.avg_length_hull});
        }
        if (r.method.rfind("resample", 0) == 0) out.push_back({"kept_pct", series, x_axis, x, r.kept_pct});
        out.push_back({"no_interval_pct", series, x_axis, x, r.no_interval_pct});
    }
    return out;
}

void write_plot_csv(std::ostream& out, const std::vector<PlotPoint>& points) {
    out << kPlotCsvHeader << '\n';
    const auto old = out.precision(std::numeric_limits<double>::max_digits10);
    for (const auto& p : points) {
        out << p.panel << ',' << p.series << ',' << p.x_name << ',';
        if (p.x) out << *p.x;
        out << ',' << p.y << '\n';
    }
    out.precision(old);
}

std::string render_svg(const std::vector<PlotPoint>& points, const std::string& title) {
    static const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                          "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
    std::vector<std::string> panels;
    std::vector<std::string> series;
    for (const auto& p : points) {
        if (std::find(panels.begin(), panels.end(), p.panel) == panels.end()) panels.push_back(p.panel);
        if (std::find(series.begin(), series.end(), p.series) == series.end()) series.push_back(p.series);
    }
    const double width = 640, panel_h = 220, left = 60, right = 220, top = 40, gap = 50;
    const double height = top + panels.size() * (panel_h + gap);
    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width + right << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    s << "<text x=\"" << left << "\" y=\"20\" font-size=\"14\">" << title << "</text>\n";

    for (std::size_t k = 0; k < panels.size(); ++k) {
        const double y0 = top + k * (panel_h + gap);
        double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
        double ymin = xmin, ymax = -xmin;
        for (const auto& p : points) {
            if (p.panel != panels[k]) continue;
            if (p.x) {
                xmin = std::min(xmin, *p.x);
                xmax = std::max(xmax, *p.x);
            }
            ymin = std::min(ymin, p.y);
            ymax = std::max(ymax, p.y);
        }
        if (!std::isfinite(xmin)) xmin = 0, xmax = 1;
        if (xmax == xmin) xmax = xmin + 1;
        if (!std::isfinite(ymin)) ymin = 0, ymax = 1;
        if (ymax == ymin) ymax = ymin + 1;
        const double pad = 0.05 * (ymax - ymin);
        ymin -= pad;
        ymax += pad;
        auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * (width - left - 20); };
        auto py = [&](double y) { return y0 + panel_h - (y - ymin) / (ymax - ymin) * panel_h; };

        s << "<rect x=\"" << left << "\" y=\"" << y0 << "\" width=\"" << width - left - 20 << "\" height=\"" << panel_h
          << "\" fill=\"none\" stroke=\"#444\"/>\n";
        s << "<text x=\"" << left << "\" y=\"" << y0 - 6 << "\">" << panels[k] << "</text>\n";
        s << "<text x=\"4\" y=\"" << py(ymax - pad) + 4 << "\">" << fmt(ymax - pad) << "</text>\n";
        s << "<text x=\"4\" y=\"" << py(ymin + pad) + 4 << "\">" << fmt(ymin + pad) << "</text>\n";
        s << "<text x=\"" << left << "\" y=\"" << y0 + panel_h + 14 << "\">" << fmt(xmin) << "</text>\n";
        s << "<text x=\"" << width - 60 << "\" y=\"" << y0 + panel_h + 14 << "\">" << fmt(xmax) << "</text>\n";

        for (std::size_t c = 0; c < series.size(); ++c) {
            const char* color = kColors[c % std::size(kColors)];
            std::vector<std::pair<double, double>> line;
            for (const auto& p : points) {
                if (p.panel != panels[k] || p.series != series[c]) continue;
                if (p.x) {
                    line.push_back({*p.x, p.y});
                } else {
                    s << "<line x1=\"" << px(xmin) << "\" x2=\"" << px(xmax) << "\" y1=\"" << py(p.y) << "\" y2=\""
                      << py(p.y) << "\" stroke=\"" << color << "\" stroke-dasharray=\"4 3\"/>\n";
                }
            }
            std::sort(line.begin(), line.end());
            if (!line.empty()) {
                s << "<polyline fill=\"none\" stroke=\"" << color << "\" points=\"";
                for (auto [x, y] : line) s << px(x) << ',' << py(y) << ' ';
                s << "\"/>\n";
                for (auto [x, y] : line) s << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"2.5\" fill=\"" << color << "\"/>\n";
            }
        }
    }
    for (std::size_t c = 0; c < series.size(); ++c) {
        const double y = top + 14 * c;
        s << "<rect x=\"" << width << "\" y=\"" << y << "\" width=\"10\" height=\"10\" fill=\""
          << kColors[c % std::size(kColors)] << "\"/>\n";
        s << "<text x=\"" << width + 14 << "\" y=\"" << y + 9 << "\">" << series[c] << "</text>\n";
    }
    s << "</svg>\n";
    return s.str();
}

}  // namespace resci::cli
