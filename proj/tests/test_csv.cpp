#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <string>

#include "fairsmote/csv.hpp"
#include "fairsmote/errors.hpp"

using namespace fairsmote;

TEST_CASE("parse splits unquoted rows on commas and newlines") {
    const auto rows = csv::parse("a,b,c\n1,2,3\n4,5,6\n");
    REQUIRE(rows.size() == 3);
    CHECK(rows[0] == csv::Row{"a", "b", "c"});
    CHECK(rows[1] == csv::Row{"1", "2", "3"});
    CHECK(rows[2] == csv::Row{"4", "5", "6"});
}

TEST_CASE("parse accepts a missing trailing newline") {
    const auto rows = csv::parse("x,y\n1,2");
    REQUIRE(rows.size() == 2);
    CHECK(rows[1] == csv::Row{"1", "2"});
}

TEST_CASE("parse handles CRLF line endings") {
    const auto rows = csv::parse("a,b\r\n1,2\r\n");
    REQUIRE(rows.size() == 2);
    CHECK(rows[0] == csv::Row{"a", "b"});
    CHECK(rows[1] == csv::Row{"1", "2"});
}

TEST_CASE("quoted fields keep commas, escaped quotes and line breaks") {
    const auto rows = csv::parse("\"a,b\",\"say \"\"hi\"\"\",\"two\nlines\"\n");
    REQUIRE(rows.size() == 1);
    REQUIRE(rows[0].size() == 3);
    CHECK(rows[0][0] == "a,b");
    CHECK(rows[0][1] == "say \"hi\"");
    CHECK(rows[0][2] == "two\nlines");
}

TEST_CASE("empty fields survive at every position") {
    const auto rows = csv::parse(",mid,\n,,\n");
    REQUIRE(rows.size() == 2);
    CHECK(rows[0] == csv::Row{"", "mid", ""});
    CHECK(rows[1] == csv::Row{"", "", ""});
}

TEST_CASE("unterminated quote is a data error") {
    CHECK_THROWS_AS(csv::parse("\"oops\n"), DataError);
}

TEST_CASE("format_rows followed by parse is the identity") {
    const std::vector<csv::Row> rows = {
        {"name", "note"},
        {"plain", "value"},
        {"with,comma", "with \"quotes\""},
        {"multi\nline", ""},
        {"", "trailing"},
    };
    CHECK(csv::parse(csv::format_rows(rows)) == rows);
}

TEST_CASE("format_double round-trips through strtod") {
    for (double v : {0.1, 1.0 / 3.0, -2.5e-7, 99999.0, 0.0, 1e-12, 123456.789}) {
        const std::string s = csv::format_double(v);
        CHECK(std::strtod(s.c_str(), nullptr) == v);
    }
}

TEST_CASE("read_file reports missing files") {
    CHECK_THROWS_AS(csv::read_file("/nonexistent/really/not/here.csv"), DataError);
}
