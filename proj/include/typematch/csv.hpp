#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "typematch/table.hpp"

namespace typematch {

/// RFC 4180 reader: comma delimiter, double-quote escaping, LF or CRLF
/// record separators. A leading UTF-8 BOM is dropped. Throws ParseError
/// (with the 1-based line where the open quote started) on an unbalanced
/// quote.
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

/// Parses CSV into a Table. Throws EmptyTableError for input with no
/// records.
Table load_table(std::string_view csv, bool has_header, std::string name);

Table load_table_file(const std::filesystem::path& path, bool has_header);

/// Writes the table in the same dialect load_table reads. Unnamed headers
/// become empty fields. Records end with "\n".
std::string to_csv(const Table& table, bool with_header = true);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

} // namespace typematch
