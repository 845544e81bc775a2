#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "resci/simulation/bench.hpp"

namespace resci::cli {

/// One plotted value. Rows without an x (naive, oracle, heuristic on a c*
/// axis) are reference levels drawn across the whole panel.
struct PlotPoint {
    std::string panel;
    std::string series;
    std::string x_name;
    std::optional<double> x;
    double y = 0.0;
};

/// x axis: "c_star", "n" or "M"; "auto" picks the first that varies among
/// the resample rows.
std::string choose_x_axis(const std::vector<simulation::BenchRecord>& records, const std::string& requested);

/// Panels coverage, length_union, length_hull, kept_pct and no_interval_pct.
std::vector<PlotPoint> plot_points(const std::vector<simulation::BenchRecord>& records, const std::string& x_axis);

inline constexpr const char* kPlotCsvHeader = "panel,series,x_name,x,y";
void write_plot_csv(std::ostream& out, const std::vector<PlotPoint>& points);

/// Static SVG with one stacked chart per panel.
std::string render_svg(const std::vector<PlotPoint>& points, const std::string& title);

}  // namespace resci::cli
