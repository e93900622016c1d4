#include "typematch/table.hpp"

#include <algorithm>

#include "typematch/error.hpp"
#include "typematch/kind.hpp"

namespace typematch {

std::string_view to_string(ColumnKind kind) {
    switch (kind) {
    case ColumnKind::numeric: return "numeric";
    case ColumnKind::date: return "date";
    case ColumnKind::text: return "text";
    }
    return "text";
}

ColumnKind column_kind_from_string(std::string_view s) {
    if (s == "numeric") return ColumnKind::numeric;
    if (s == "date") return ColumnKind::date;
    if (s == "text") return ColumnKind::text;
    throw UsageError("unknown column kind '" + std::string(s) + "'");
}

std::string_view trim(std::string_view s) {
    constexpr std::string_view ws = " \t\r\n\v\f";
    const auto first = s.find_first_not_of(ws);
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(ws);
    return s.substr(first, last - first + 1);
}

std::optional<std::string> normalize_header(std::string_view raw) {
    const auto t = trim(raw);
    if (t.empty()) return std::nullopt;
    return std::string(t);
}

Table Table::from_rows(std::string name,
                       std::vector<std::optional<std::string>> headers,
                       const std::vector<std::vector<Cell>>& rows,
                       std::optional<std::vector<ColumnKind>> kinds) {
    std::size_t width = headers.size();
    for (const auto& r : rows) width = std::max(width, r.size());
    if (kinds && kinds->size() != width)
        throw UsageError("kind list has " + std::to_string(kinds->size()) + " entries for " +
                         std::to_string(width) + " columns");

    Table t;
    t.name = std::move(name);
    t.row_count = rows.size();
    t.columns.resize(width);
    for (std::size_t c = 0; c < width; ++c) {
        auto& col = t.columns[c];
        col.position = c;
        if (c < headers.size() && headers[c] && !trim(*headers[c]).empty()) col.header = headers[c];
        col.cells.reserve(rows.size());
        for (const auto& r : rows) col.cells.push_back(c < r.size() ? r[c] : Cell{});
        col.kind = kinds ? (*kinds)[c] : infer_column_kind(col);
    }
    return t;
}

const Column& Table::column(std::size_t position) const {
    if (position >= columns.size())
        throw UsageError("column " + std::to_string(position) + " out of range (table '" + name +
                         "' has " + std::to_string(columns.size()) + " columns)");
    return columns[position];
}

std::vector<Cell> Table::row(std::size_t index) const {
    if (index >= row_count) throw UsageError("row " + std::to_string(index) + " out of range");
    std::vector<Cell> out;
    out.reserve(columns.size());
    for (const auto& c : columns) out.push_back(c.cells[index]);
    return out;
}

void Table::validate() const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        const auto& c = columns[i];
        if (c.position != i)
            throw UsageError("column at index " + std::to_string(i) + " has position " +
                             std::to_string(c.position));
        if (c.cells.size() != row_count)
            throw UsageError("column " + std::to_string(i) + " has " + std::to_string(c.cells.size()) +
                             " cells, expected " + std::to_string(row_count));
        if (c.header && trim(*c.header).empty())
            throw UsageError("column " + std::to_string(i) + " has a blank header");
    }
}

} // namespace typematch
