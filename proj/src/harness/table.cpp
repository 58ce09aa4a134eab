#include "wr/harness/table.hpp"

#include "wr/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace wr {

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

Table::Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void Table::add_row(std::vector<Cell> row) {
    if (row.size() != columns_.size()) throw ConfigError("row width does not match the table header");
    rows_.push_back(std::move(row));
}

void Table::set_meta(const std::string& key, const std::string& value) {
    for (auto& [k, v] : meta_) {
        if (k == key) {
            v = value;
            return;
        }
    }
    meta_.emplace_back(key, value);
}

void Table::set_meta(const std::string& key, double value) { set_meta(key, format_number(value)); }

std::size_t Table::column_index(const std::string& name) const {
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        if (columns_[i] == name) return i;
    }
    throw ConfigError("no column named '" + name + "'");
}

double Table::number(std::size_t row, const std::string& column) const {
    const Cell& c = rows_.at(row).at(column_index(column));
    if (const auto* d = std::get_if<double>(&c)) return *d;
    if (const auto* i = std::get_if<long long>(&c)) return static_cast<double>(*i);
    throw ConfigError("column '" + column + "' is not numeric");
}

std::string Table::text(std::size_t row, const std::string& column) const {
    const Cell& c = rows_.at(row).at(column_index(column));
    if (const auto* s = std::get_if<std::string>(&c)) return *s;
    if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
    return std::to_string(std::get<long long>(c));
}

std::vector<double> Table::numbers(const std::string& column) const {
    std::vector<double> out;
    out.reserve(rows_.size());
    for (std::size_t r = 0; r < rows_.size(); ++r) out.push_back(number(r, column));
    return out;
}

const std::string* Table::find_meta(const std::string& key) const {
    for (const auto& [k, v] : meta_) {
        if (k == key) return &v;
    }
    return nullptr;
}

void Table::write_csv(std::ostream& out) const {
    for (const auto& [k, v] : meta_) out << "# " << k << " = " << v << '\n';
    for (std::size_t i = 0; i < columns_.size(); ++i) out << (i ? "," : "") << columns_[i];
    out << '\n';
    for (const auto& row : rows_) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            std::visit(
                [&](const auto& v) {
                    using T = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<T, double>) {
                        out << format_number(v);
                    } else {
                        out << v;
                    }
                },
                row[i]);
        }
        out << '\n';
    }
}

void Table::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    write_csv(out);
}

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

Cell parse_cell(const std::string& s) {
    if (s == "nan") return std::nan("");
    if (s == "inf") return HUGE_VAL;
    if (s == "-inf") return -HUGE_VAL;
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec == std::errc() && res.ptr == s.data() + s.size() && !s.empty()) return v;
    return s;
}

}  // namespace

Table Table::read_csv(std::istream& in) {
    Table t;
    std::string line;
    bool header = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (!header && line.rfind("# ", 0) == 0) {
            const auto eq = line.find(" = ");
            if (eq != std::string::npos) t.meta_.emplace_back(line.substr(2, eq - 2), line.substr(eq + 3));
            continue;
        }
        if (!header) {
            t.columns_ = split(line);
            header = true;
            continue;
        }
        std::vector<Cell> row;
        for (const auto& s : split(line)) row.push_back(parse_cell(s));
        t.add_row(std::move(row));
    }
    if (!header) throw ConfigError("CSV has no header row");
    return t;
}

Table Table::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    return read_csv(in);
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw ConfigError("slope needs at least two points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0 && y[i] > 0.0)) throw ConfigError("log-log slope needs positive data");
        const double lx = std::log(x[i]);
        const double ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace wr
