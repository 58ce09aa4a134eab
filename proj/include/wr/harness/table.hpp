#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace wr {

using Cell = std::variant<double, long long, std::string>;

/// Column-named result table written as CSV. Metadata goes into leading
/// `# key = value` lines; numbers are printed with 17 significant digits so
/// identical runs give identical bytes.
class Table {
public:
    Table() = default;
    explicit Table(std::vector<std::string> columns);

    void add_row(std::vector<Cell> row);
    void set_meta(const std::string& key, const std::string& value);
    void set_meta(const std::string& key, double value);

    const std::vector<std::string>& columns() const { return columns_; }
    const std::vector<std::vector<Cell>>& rows() const { return rows_; }
    const std::vector<std::pair<std::string, std::string>>& meta() const { return meta_; }
    std::size_t size() const { return rows_.size(); }
    bool empty() const { return rows_.empty(); }

    std::size_t column_index(const std::string& name) const;
    double number(std::size_t row, const std::string& column) const;
    std::string text(std::size_t row, const std::string& column) const;
    std::vector<double> numbers(const std::string& column) const;
    const std::string* find_meta(const std::string& key) const;

    void write_csv(std::ostream& out) const;
    void save(const std::string& path) const;

    static Table read_csv(std::istream& in);
    static Table load(const std::string& path);

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<Cell>> rows_;
    std::vector<std::pair<std::string, std::string>> meta_;
};

std::string format_number(double v);

/// Least-squares slope of log(y) over log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace wr
