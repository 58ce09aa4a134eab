#include "wr/harness/plot.hpp"

#include "wr/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace wr {

PlotKind parse_plot_kind(const std::string& s) {
    if (s == "linear") return PlotKind::linear;
    if (s == "semilogx") return PlotKind::semilogx;
    if (s == "semilogy") return PlotKind::semilogy;
    if (s == "loglog") return PlotKind::loglog;
    throw ConfigError("plot kind must be linear, semilogx, semilogy or loglog, got '" + s + "'");
}

namespace {

struct Series {
    std::string name;
    std::vector<std::pair<double, double>> points;
};

bool log_x(PlotKind k) { return k == PlotKind::semilogx || k == PlotKind::loglog; }
bool log_y(PlotKind k) { return k == PlotKind::semilogy || k == PlotKind::loglog; }

bool drawable(double v, bool log) { return std::isfinite(v) && (!log || v > 0.0); }

std::vector<Series> collect(const Table& t, PlotKind kind) {
    if (t.empty()) throw ConfigError("nothing to plot: the table has no rows");
    if (t.columns().size() < 2) throw ConfigError("a plot needs at least two columns");
    std::vector<Series> out;
    const auto& first = t.rows().front().front();
    if (std::holds_alternative<std::string>(first)) {
        if (t.columns().size() < 3) throw ConfigError("grouped plots need group, x and y columns");
        std::map<std::string, std::size_t> index;
        for (std::size_t r = 0; r < t.size(); ++r) {
            const std::string group = t.text(r, t.columns()[0]);
            auto [it, fresh] = index.try_emplace(group, out.size());
            if (fresh) out.push_back({group, {}});
            const double x = t.number(r, t.columns()[1]);
            const double y = t.number(r, t.columns()[2]);
            if (drawable(x, log_x(kind)) && drawable(y, log_y(kind))) out[it->second].points.emplace_back(x, y);
        }
    } else {
        for (std::size_t c = 1; c < t.columns().size(); ++c) {
            Series s{t.columns()[c], {}};
            for (std::size_t r = 0; r < t.size(); ++r) {
                const Cell& cell = t.rows()[r][c];
                if (std::holds_alternative<std::string>(cell)) continue;
                const double x = t.number(r, t.columns()[0]);
                const double y = t.number(r, t.columns()[c]);
                if (drawable(x, log_x(kind)) && drawable(y, log_y(kind))) s.points.emplace_back(x, y);
            }
            out.push_back(std::move(s));
        }
    }
    bool any = false;
    for (const auto& s : out) any = any || !s.points.empty();
    if (!any) throw ConfigError("nothing to plot: no drawable points");
    return out;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

}  // namespace

std::pair<AxisRange, AxisRange> plot_extent(const Table& table, PlotKind kind) {
    const auto series = collect(table, kind);
    AxisRange x{HUGE_VAL, -HUGE_VAL}, y{HUGE_VAL, -HUGE_VAL};
    for (const auto& s : series) {
        for (const auto& [px, py] : s.points) {
            x.lo = std::min(x.lo, px);
            x.hi = std::max(x.hi, px);
            y.lo = std::min(y.lo, py);
            y.hi = std::max(y.hi, py);
        }
    }
    return {x, y};
}

std::string render_svg(const Table& table, PlotKind kind, const std::string& title) {
    const auto series = collect(table, kind);
    auto [xr, yr] = plot_extent(table, kind);
    const bool lx = log_x(kind);
    const bool ly = log_y(kind);
    auto tx = [&](double v) { return lx ? std::log10(v) : v; };
    auto ty = [&](double v) { return ly ? std::log10(v) : v; };
    double x0 = tx(xr.lo), x1 = tx(xr.hi), y0 = ty(yr.lo), y1 = ty(yr.hi);
    if (x1 == x0) { x0 -= 0.5; x1 += 0.5; }
    if (y1 == y0) { y0 -= 0.5; y1 += 0.5; }

    const double width = 640, height = 420, left = 70, right = 150, top = 40, bottom = 50;
    const double pw = width - left - right, ph = height - top - bottom;
    auto px = [&](double v) { return left + (tx(v) - x0) / (x1 - x0) * pw; };
    auto py = [&](double v) { return top + ph - (ty(v) - y0) / (y1 - y0) * ph; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    svg << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
    svg << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    if (!title.empty()) {
        svg << "<text x=\"" << fmt(left + pw / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">" << title
            << "</text>\n";
    }
    for (int i = 0; i <= 4; ++i) {
        const double fx = x0 + (x1 - x0) * i / 4.0;
        const double fy = y0 + (y1 - y0) * i / 4.0;
        const double sx = left + pw * i / 4.0;
        const double sy = top + ph - ph * i / 4.0;
        svg << "<text x=\"" << fmt(sx) << "\" y=\"" << fmt(top + ph + 18)
            << "\" text-anchor=\"middle\" font-size=\"11\">" << tick_label(lx ? std::pow(10.0, fx) : fx)
            << "</text>\n";
        svg << "<text x=\"" << fmt(left - 6) << "\" y=\"" << fmt(sy + 4) << "\" text-anchor=\"end\" font-size=\"11\">"
            << tick_label(ly ? std::pow(10.0, fy) : fy) << "</text>\n";
    }
    const std::size_t xcol = std::holds_alternative<std::string>(table.rows().front().front()) ? 1 : 0;
    svg << "<text x=\"" << fmt(left + pw / 2) << "\" y=\"" << fmt(height - 10)
        << "\" text-anchor=\"middle\" font-size=\"12\">" << table.columns()[xcol] << "</text>\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto& s = series[i];
        const char* colour = palette[i % (sizeof palette / sizeof palette[0])];
        if (!s.points.empty()) {
            svg << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
            for (std::size_t p = 0; p < s.points.size(); ++p) {
                svg << (p ? " " : "") << fmt(px(s.points[p].first)) << ',' << fmt(py(s.points[p].second));
            }
            svg << "\"/>\n";
            for (const auto& [vx, vy] : s.points) {
                svg << "<circle cx=\"" << fmt(px(vx)) << "\" cy=\"" << fmt(py(vy)) << "\" r=\"2.5\" fill=\"" << colour
                    << "\"/>\n";
            }
        }
        const double ly_pos = top + 14 + 18.0 * static_cast<double>(i);
        svg << "<line x1=\"" << fmt(left + pw + 10) << "\" y1=\"" << fmt(ly_pos - 4) << "\" x2=\"" << fmt(left + pw + 30)
            << "\" y2=\"" << fmt(ly_pos - 4) << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/>\n";
        svg << "<text x=\"" << fmt(left + pw + 34) << "\" y=\"" << fmt(ly_pos) << "\" font-size=\"11\">" << s.name
            << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

void emit_plot(const std::string& csv_path, PlotKind kind, const std::string& svg_path) {
    const Table table = Table::load(csv_path);
    const std::string svg = render_svg(table, kind, "");
    std::ofstream out(svg_path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + svg_path + "'");
    out << svg;
}

}  // namespace wr
