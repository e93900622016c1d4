#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "typematch/table.hpp"

namespace typematch {

/// Fraction of non-empty cells that must agree before a column is
/// classified as numeric or date.
inline constexpr double kKindSupermajority = 0.9;

/// Decimal number grammar: optional sign, digits with optional comma
/// thousands separators, at most one decimal point. Surrounding
/// whitespace is ignored.
std::optional<double> parse_number(std::string_view text);

/// ISO-8601 (yyyy-mm-dd) or dd/mm/yyyy or mm/dd/yyyy.
bool is_date(std::string_view text);

ColumnKind infer_column_kind(std::span<const Cell> cells);
ColumnKind infer_column_kind(const Column& column);

} // namespace typematch
