#include <doctest.h>

#include <random>

#include "test_support.hpp"
#include "typematch/csv.hpp"
#include "typematch/error.hpp"
#include "typematch/kind.hpp"
#include "typematch/project_store.hpp"

using namespace typematch;
using testing_support::data_path;
using testing_support::TempDir;

TEST_CASE("load_table reads the noisy source scenario") {
    const auto t = load_table_file(data_path("noisy_source.csv"), true);
    CHECK(t.row_count == 5);
    REQUIRE(t.column_count() == 4);
    CHECK(t.columns[0].header == "Airport Code");
    CHECK_FALSE(t.columns[1].named());
    CHECK(t.columns[2].header == "Organization");
    CHECK(t.columns[3].header == "Cost");
    CHECK(t.columns[3].kind == ColumnKind::numeric);
    CHECK(t.columns[0].kind == ColumnKind::text);
    CHECK(t.columns[1].cells[1] == "United States");
    CHECK_NOTHROW(t.validate());
}

TEST_CASE("load_table minimal and ragged input") {
    const auto t = load_table("a,b\n1,2\n", true, "min");
    CHECK(t.row_count == 1);
    CHECK(t.columns[0].header == "a");
    CHECK(t.columns[1].header == "b");

    const auto ragged = load_table("a,b\n1\n", true, "ragged");
    CHECK(ragged.row(0) == std::vector<Cell>{"1", ""});

    const auto wider = load_table("a\n1,2,3\n", true, "wider");
    CHECK(wider.column_count() == 3);
    CHECK_FALSE(wider.columns[2].named());
    CHECK(wider.columns[0].cells == std::vector<Cell>{"1"});
}

TEST_CASE("blank and whitespace headers are unnamed") {
    const auto t = load_table(" x ,   ,\n1,2,3\n", true, "h");
    CHECK(t.columns[0].header == "x");
    CHECK_FALSE(t.columns[1].named());
    CHECK_FALSE(t.columns[2].named());
}

TEST_CASE("without a header row every column is unnamed") {
    const auto t = load_table("LHR,England\nLGA,Peru\n", false, "n");
    CHECK(t.row_count == 2);
    for (const auto& c : t.columns) CHECK_FALSE(c.named());
}

TEST_CASE("csv quoting, CRLF and BOM") {
    const auto recs = parse_csv("\xEF\xBB\xBF" "a,\"b,c\"\r\n\"say \"\"hi\"\"\",\"multi\nline\"\r\n");
    REQUIRE(recs.size() == 2);
    CHECK(recs[0] == std::vector<std::string>{"a", "b,c"});
    CHECK(recs[1] == std::vector<std::string>{"say \"hi\"", "multi\nline"});
}

TEST_CASE("unbalanced quotes report the line") {
    try {
        parse_csv("a,b\n1,2\n3,\"oops\n4,5\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
    CHECK_THROWS_AS(parse_csv("a,b\"c\n"), ParseError);
    CHECK_THROWS_AS(parse_csv("\"a\"b\n"), ParseError);
}

TEST_CASE("empty input is an empty-table error") {
    CHECK_THROWS_AS(load_table("", true, "e"), EmptyTableError);
    CHECK_THROWS_AS(load_table("\xEF\xBB\xBF", false, "e"), EmptyTableError);
}

TEST_CASE("infer_column_kind") {
    const std::vector<Cell> cost{"123.2", "232.12", "321.7", "354.64", "243.8"};
    CHECK(infer_column_kind(cost) == ColumnKind::numeric);
    const std::vector<Cell> codes{"LHR", "LGA", "HUU", "DBO", "BGY"};
    CHECK(infer_column_kind(codes) == ColumnKind::text);
    const std::vector<Cell> dates{"2021-01-01", "2021-02-03"};
    CHECK(infer_column_kind(dates) == ColumnKind::date);
    const std::vector<Cell> slashed{"31/12/2020", "12/31/2020", "", "01/02/2003"};
    CHECK(infer_column_kind(slashed) == ColumnKind::date);
    CHECK(infer_column_kind(std::vector<Cell>{"", "  "}) == ColumnKind::text);

    // 9 of 10 numeric meets the supermajority; 8 of 10 does not.
    std::vector<Cell> noisy(9, "1,234.5");
    noisy.push_back("n/a");
    CHECK(infer_column_kind(noisy) == ColumnKind::numeric);
    noisy[0] = "x";
    CHECK(infer_column_kind(noisy) == ColumnKind::text);
}

TEST_CASE("number grammar") {
    CHECK(parse_number("123.2") == doctest::Approx(123.2));
    CHECK(parse_number("-0.5") == doctest::Approx(-0.5));
    CHECK(parse_number("+7") == doctest::Approx(7));
    CHECK(parse_number("1,234,567.25") == doctest::Approx(1234567.25));
    CHECK(parse_number(".5") == doctest::Approx(0.5));
    CHECK(parse_number(" 42 ") == doctest::Approx(42));
    CHECK_FALSE(parse_number("1,23"));
    CHECK_FALSE(parse_number("1.2.3"));
    CHECK_FALSE(parse_number("."));
    CHECK_FALSE(parse_number("12a"));
    CHECK_FALSE(parse_number("n/a"));
    CHECK_FALSE(parse_number(""));
    CHECK_FALSE(is_date("2021-13-01"));
    CHECK_FALSE(is_date("13/13/2020"));
}

TEST_CASE("kind inference depends only on cell text") {
    Column a{0, "x", {"1", "2"}, ColumnKind::text};
    Column b{7, std::nullopt, {"1", "2"}, ColumnKind::date};
    CHECK(infer_column_kind(a) == infer_column_kind(b));
}

namespace {

Table random_table(std::mt19937& rng) {
    const char* pool[] = {"", "a", "b,c", "q\"uote", "line\nbreak", "12.5", "2020-01-02", " pad ", "é", "الأردن"};
    std::uniform_int_distribution<int> dim(0, 5);
    std::uniform_int_distribution<int> pick(0, 9);
    const int cols = dim(rng) + 1;
    const int rows = dim(rng);
    std::vector<std::optional<std::string>> headers;
    for (int c = 0; c < cols; ++c) {
        if (pick(rng) < 3) headers.emplace_back();
        else headers.emplace_back("h" + std::to_string(c));
    }
    std::vector<std::vector<Cell>> data(rows, std::vector<Cell>(cols));
    for (auto& r : data)
        for (auto& cell : r) cell = pool[pick(rng)];
    return Table::from_rows("gen", headers, data);
}

} // namespace

TEST_CASE("property: generated tables are rectangular and survive project round-trip") {
    TempDir dir;
    ProjectStore store(dir.path());
    std::mt19937 rng(1234);
    for (int i = 0; i < 200; ++i) {
        const auto t = random_table(rng);
        for (const auto& c : t.columns) CHECK(c.cells.size() == t.row_count);
        CHECK_NOTHROW(t.validate());
        const auto id = store.save(t);
        CHECK(store.load(id) == t);
    }
}

TEST_CASE("property: CSV write/read/write is byte-identical") {
    std::mt19937 rng(99);
    for (int i = 0; i < 200; ++i) {
        const auto t = random_table(rng);
        const auto csv = to_csv(t);
        const auto back = load_table(csv, true, t.name);
        CHECK(to_csv(back) == csv);
        CHECK(back.row_count == t.row_count);
    }
}

TEST_CASE("project store errors and ids") {
    TempDir dir;
    ProjectStore store(dir.path());
    const auto t = load_table_file(data_path("noisy_source.csv"), true);
    const auto a = store.save(t);
    const auto b = store.save(t);
    CHECK(a != b);
    CHECK(store.load(a) == t);
    CHECK_THROWS_AS(store.load("nonexistent"), NotFoundError);
    CHECK_THROWS_AS(store.load("../etc/passwd"), NotFoundError);
}

TEST_CASE("project JSON shape") {
    const auto t = load_table("a,\nx,1\n", true, "shape");
    const auto j = table_to_json(t);
    CHECK(j["name"] == "shape");
    CHECK(j["headers"][0] == "a");
    CHECK(j["headers"][1].is_null());
    CHECK(j["kinds"][1] == "numeric");
    CHECK(j["rows"][0][0] == "x");
    CHECK_THROWS_AS(table_from_json(nlohmann::json{{"name", "x"}}), UsageError);
}
