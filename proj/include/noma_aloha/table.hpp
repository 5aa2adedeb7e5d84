#ifndef NOMA_ALOHA_TABLE_HPP
#define NOMA_ALOHA_TABLE_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "format.hpp"

namespace noma_aloha {

using Cell = std::variant<std::int64_t, double, bool, std::string>;

/// Column-ordered record set rendered as CSV or a JSON array of records.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add_row(std::vector<Cell> row)
    {
        if (row.size() != columns.size())
            throw std::logic_error("Table: row width does not match header");
        rows.push_back(std::move(row));
    }

    std::size_t column(const std::string& name) const
    {
        for (std::size_t i = 0; i < columns.size(); ++i)
            if (columns[i] == name)
                return i;
        throw std::out_of_range("Table: no column '" + name + "'");
    }

    double real(std::size_t row, const std::string& name) const
    {
        const Cell& c = rows.at(row).at(column(name));
        if (const auto* d = std::get_if<double>(&c))
            return *d;
        if (const auto* i = std::get_if<std::int64_t>(&c))
            return static_cast<double>(*i);
        throw std::bad_variant_access();
    }

    bool flag(std::size_t row, const std::string& name) const { return std::get<bool>(rows.at(row).at(column(name))); }
};

namespace detail {

inline std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\r\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    out += '"';
    return out;
}

inline std::string csv_cell(const Cell& c)
{
    struct Visitor {
        std::string operator()(std::int64_t v) const { return std::to_string(v); }
        std::string operator()(double v) const { return format_real(v); }
        std::string operator()(bool v) const { return v ? "true" : "false"; }
        std::string operator()(const std::string& v) const { return csv_field(v); }
    };
    return std::visit(Visitor{}, c);
}

} // namespace detail

inline std::string to_csv(const Table& t)
{
    std::string out;
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
        if (i)
            out += ',';
        out += detail::csv_field(t.columns[i]);
    }
    out += '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i)
                out += ',';
            out += detail::csv_cell(row[i]);
        }
        out += '\n';
    }
    return out;
}

/// Non-finite reals become null.
inline std::string to_json(const Table& t)
{
    auto records = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
        nlohmann::ordered_json rec = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < row.size(); ++i) {
            std::visit(
                [&](const auto& v) {
                    using V = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<V, double>) {
                        if (std::isfinite(v))
                            rec[t.columns[i]] = v;
                        else
                            rec[t.columns[i]] = nullptr;
                    } else {
                        rec[t.columns[i]] = v;
                    }
                },
                row[i]);
        }
        records.push_back(std::move(rec));
    }
    return records.dump(2) + '\n';
}

} // namespace noma_aloha

#endif
