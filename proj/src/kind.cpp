#include "typematch/kind.hpp"

#include <charconv>
#include <regex>

namespace typematch {

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }

// Accepts "1234", "1,234,567" (groups of exactly three after the first).
bool valid_integer_part(std::string_view s) {
    if (s.find(',') == std::string_view::npos) {
        for (char c : s)
            if (!is_digit(c)) return false;
        return true;
    }
    std::size_t group_len = 0;
    bool first_group = true;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == ',') {
            if (first_group ? (group_len < 1 || group_len > 3) : group_len != 3) return false;
            first_group = false;
            group_len = 0;
        } else if (is_digit(s[i])) {
            ++group_len;
        } else {
            return false;
        }
    }
    return true;
}

bool in_range(int v, int lo, int hi) { return v >= lo && v <= hi; }

} // namespace

std::optional<double> parse_number(std::string_view text) {
    auto s = trim(text);
    if (s.empty()) return std::nullopt;

    bool negative = false;
    if (s.front() == '+' || s.front() == '-') {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    const auto dot = s.find('.');
    const auto int_part = s.substr(0, dot);
    const auto frac_part = dot == std::string_view::npos ? std::string_view{} : s.substr(dot + 1);
    if (int_part.empty() && frac_part.empty()) return std::nullopt;
    if (!valid_integer_part(int_part)) return std::nullopt;
    for (char c : frac_part)
        if (!is_digit(c)) return std::nullopt;

    std::string digits;
    digits.reserve(s.size() + 2);
    for (char c : int_part)
        if (c != ',') digits.push_back(c);
    if (digits.empty()) digits.push_back('0');
    if (!frac_part.empty()) {
        digits.push_back('.');
        digits.append(frac_part);
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
    if (ec != std::errc{} || ptr != digits.data() + digits.size()) return std::nullopt;
    return negative ? -value : value;
}

bool is_date(std::string_view text) {
    static const std::regex iso(R"((\d{4})-(\d{2})-(\d{2}))");
    static const std::regex slashed(R"((\d{1,2})/(\d{1,2})/(\d{4}))");

    const std::string s(trim(text));
    std::smatch m;
    if (std::regex_match(s, m, iso)) {
        return in_range(std::stoi(m[2]), 1, 12) && in_range(std::stoi(m[3]), 1, 31);
    }
    if (std::regex_match(s, m, slashed)) {
        const int a = std::stoi(m[1]);
        const int b = std::stoi(m[2]);
        const bool dmy = in_range(a, 1, 31) && in_range(b, 1, 12);
        const bool mdy = in_range(a, 1, 12) && in_range(b, 1, 31);
        return dmy || mdy;
    }
    return false;
}

ColumnKind infer_column_kind(std::span<const Cell> cells) {
    std::size_t non_empty = 0;
    std::size_t numeric = 0;
    std::size_t dates = 0;
    for (const auto& c : cells) {
        if (trim(c).empty()) continue;
        ++non_empty;
        if (parse_number(c)) ++numeric;
        else if (is_date(c)) ++dates;
    }
    if (non_empty == 0) return ColumnKind::text;
    const double need = kKindSupermajority * static_cast<double>(non_empty);
    if (static_cast<double>(numeric) >= need) return ColumnKind::numeric;
    if (static_cast<double>(dates) >= need) return ColumnKind::date;
    return ColumnKind::text;
}

ColumnKind infer_column_kind(const Column& column) { return infer_column_kind(column.cells); }

} // namespace typematch
