#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace typematch {

using Cell = std::string;

enum class ColumnKind { numeric, date, text };

std::string_view to_string(ColumnKind kind);
ColumnKind column_kind_from_string(std::string_view s);

struct Column {
    std::size_t position = 0;
    // Absent means unnamed. A present header is never blank.
    std::optional<std::string> header;
    std::vector<Cell> cells;
    ColumnKind kind = ColumnKind::text;

    bool named() const { return header.has_value(); }

    bool operator==(const Column&) const = default;
};

/// Rectangular dataset: every column holds exactly row_count cells and
/// positions run 0..n-1.
struct Table {
    std::string name;
    std::vector<Column> columns;
    std::size_t row_count = 0;

    /// Builds a table from row-major records. Short rows are padded with
    /// empty cells to the widest row (or header row). Column kinds are
    /// inferred unless given explicitly.
    static Table from_rows(std::string name,
                           std::vector<std::optional<std::string>> headers,
                           const std::vector<std::vector<Cell>>& rows,
                           std::optional<std::vector<ColumnKind>> kinds = std::nullopt);

    std::size_t column_count() const { return columns.size(); }
    const Column& column(std::size_t position) const;

    std::vector<Cell> row(std::size_t index) const;

    /// Throws UsageError when an invariant is broken.
    void validate() const;

    bool operator==(const Table&) const = default;
};

/// Trims surrounding whitespace; returns nullopt for blank input.
std::optional<std::string> normalize_header(std::string_view raw);

std::string_view trim(std::string_view s);

} // namespace typematch
