#include "typematch/csv.hpp"

#include <fstream>
#include <sstream>

#include "typematch/error.hpp"

namespace typematch {

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
    if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);

    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool in_quotes = false;
    bool field_was_quoted = false;
    bool record_started = false;
    std::size_t line = 1;
    std::size_t quote_line = 0;

    auto end_field = [&] {
        record.push_back(std::move(field));
        field.clear();
        field_was_quoted = false;
    };
    auto end_record = [&] {
        end_field();
        records.push_back(std::move(record));
        record.clear();
        record_started = false;
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++line;
                field.push_back(c);
            }
            continue;
        }
        switch (c) {
        case '"':
            if (!field.empty() || field_was_quoted)
                throw ParseError("quote inside unquoted field", line);
            in_quotes = true;
            field_was_quoted = true;
            record_started = true;
            quote_line = line;
            break;
        case ',':
            record_started = true;
            end_field();
            break;
        case '\r':
            if (i + 1 < text.size() && text[i + 1] == '\n') break;
            [[fallthrough]];
        case '\n':
            end_record();
            ++line;
            break;
        default:
            if (field_was_quoted) throw ParseError("text after closing quote", line);
            record_started = true;
            field.push_back(c);
        }
    }
    if (in_quotes) throw ParseError("unterminated quoted field", quote_line);
    if (record_started) end_record();
    return records;
}

Table load_table(std::string_view csv, bool has_header, std::string name) {
    auto records = parse_csv(csv);
    if (records.empty()) throw EmptyTableError("no records in input '" + name + "'");

    std::vector<std::optional<std::string>> headers;
    std::size_t first_row = 0;
    if (has_header) {
        for (auto& h : records[0]) headers.push_back(normalize_header(h));
        first_row = 1;
    }
    records.erase(records.begin(), records.begin() + static_cast<std::ptrdiff_t>(first_row));
    return Table::from_rows(std::move(name), std::move(headers), records);
}

Table load_table_file(const std::filesystem::path& path, bool has_header) {
    return load_table(read_file(path), has_header, path.stem().string());
}

namespace {

void append_field(std::string& out, std::string_view value) {
    if (value.find_first_of(",\"\r\n") == std::string_view::npos) {
        out.append(value);
        return;
    }
    out.push_back('"');
    for (char c : value) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
}

} // namespace

std::string to_csv(const Table& table, bool with_header) {
    std::string out;
    const auto emit = [&](auto&& field_at) {
        for (std::size_t c = 0; c < table.columns.size(); ++c) {
            if (c) out.push_back(',');
            append_field(out, field_at(c));
        }
        out.push_back('\n');
    };
    if (with_header) {
        emit([&](std::size_t c) -> std::string_view {
            const auto& h = table.columns[c].header;
            return h ? std::string_view(*h) : std::string_view{};
        });
    }
    for (std::size_t r = 0; r < table.row_count; ++r)
        emit([&](std::size_t c) -> std::string_view { return table.columns[c].cells[r]; });
    return out;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw NotFoundError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error("write failed for '" + path.string() + "'");
}

} // namespace typematch
