#pragma once

#include "wr/harness/table.hpp"

#include <string>

namespace wr {

enum class PlotKind { linear, semilogx, semilogy, loglog };

PlotKind parse_plot_kind(const std::string& s);

struct AxisRange {
    double lo;
    double hi;
};

/// Polyline plot of a table. With a text first column the rows are grouped
/// into one series per distinct value, x is the second and y the third
/// column; otherwise x is the first column and every other numeric column is
/// a series. Points that cannot be drawn on a log axis are skipped.
std::string render_svg(const Table& table, PlotKind kind, const std::string& title = "");

/// Data extent of the plotted x and y values after log filtering.
std::pair<AxisRange, AxisRange> plot_extent(const Table& table, PlotKind kind);

/// Reads `csv_path`, writes the SVG to `svg_path`. An empty table is an error
/// and leaves no file behind.
void emit_plot(const std::string& csv_path, PlotKind kind, const std::string& svg_path);

}  // namespace wr
