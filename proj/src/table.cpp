#include "powermix/table.hpp"

#include "powermix/errors.hpp"
#include "powermix/format.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <limits>
#include <istream>
#include <ostream>

namespace powermix {

void Table::add_meta(std::string key, std::string value) {
    meta.emplace_back(std::move(key), std::move(value));
}

std::string Table::meta_value(const std::string& key) const {
    for (const auto& [k, v] : meta) {
        if (k == key) return v;
    }
    return {};
}

std::string cell_text(const Cell& c) {
    if (const auto* d = std::get_if<double>(&c)) return digits17(*d);
    if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
    return std::get<std::string>(c);
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + '"';
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (ch == '"') {
                quoted = false;
            } else {
                cur += ch;
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(std::move(cur));
    return out;
}

Cell parse_cell(const std::string& s) {
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    double v = 0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec == std::errc{} && r.ptr == s.data() + s.size() && !s.empty()) return v;
    return s;
}

}  // namespace

void write_csv(std::ostream& out, const Table& t) {
    for (const auto& [k, v] : t.meta) out << "# " << k << ": " << v << '\n';
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
        out << (i ? "," : "") << csv_field(t.columns[i]);
    }
    out << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out << (i ? "," : "") << csv_field(cell_text(row[i]));
        }
        out << '\n';
    }
}

void write_json(std::ostream& out, const Table& t) {
    nlohmann::ordered_json j;
    nlohmann::ordered_json meta = nlohmann::ordered_json::object();
    for (const auto& [k, v] : t.meta) meta[k] = v;
    j["meta"] = meta;
    j["columns"] = t.columns;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
        nlohmann::ordered_json r = nlohmann::ordered_json::array();
        for (const auto& c : row) {
            if (const auto* d = std::get_if<double>(&c)) {
                // JSON has no inf/nan literals
                if (std::isfinite(*d)) {
                    r.push_back(*d);
                } else {
                    r.push_back(digits17(*d));
                }
            } else if (const auto* i = std::get_if<long long>(&c)) {
                r.push_back(*i);
            } else {
                r.push_back(std::get<std::string>(c));
            }
        }
        rows.push_back(std::move(r));
    }
    j["rows"] = rows;
    out << j.dump(1) << '\n';
}

Table read_csv(std::istream& in) {
    Table t;
    std::string line;
    bool header = false;
    while (std::getline(in, line)) {
        if (line.rfind("# ", 0) == 0) {
            const auto colon = line.find(": ", 2);
            if (colon == std::string::npos) {
                t.add_meta(line.substr(2), "");
            } else {
                t.add_meta(line.substr(2, colon - 2), line.substr(colon + 2));
            }
            continue;
        }
        if (!header) {
            t.columns = split_csv(line);
            header = true;
            continue;
        }
        std::vector<Cell> row;
        for (const auto& f : split_csv(line)) row.push_back(parse_cell(f));
        t.rows.push_back(std::move(row));
    }
    if (!header) throw ParseError(0, "header row", "empty table");
    return t;
}

}  // namespace powermix
