#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace powermix {

using Cell = std::variant<double, long long, std::string>;

/// Output table: `#`-prefixed key/value metadata, a header row, then records.
/// Doubles are written with 17 significant digits.
struct Table {
    std::vector<std::pair<std::string, std::string>> meta;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add_meta(std::string key, std::string value);
    /// Value of the first metadata entry with this key, or empty.
    std::string meta_value(const std::string& key) const;
};

void write_csv(std::ostream& out, const Table& t);
void write_json(std::ostream& out, const Table& t);

/// Reads what write_csv produced. Numeric-looking fields come back as doubles.
Table read_csv(std::istream& in);

std::string cell_text(const Cell& c);

}  // namespace powermix
