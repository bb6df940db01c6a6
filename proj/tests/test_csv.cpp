#include <limits>

#include <doctest.h>

#include "fsolink/csv.hpp"
#include "fsolink/errors.hpp"

using namespace fsolink::csv;

TEST_CASE("number formatting") {
    CHECK(format_number(0.0) == "0");
    CHECK(format_number(-0.0) == "0");
    CHECK(format_number(13.7) == "13.7");
    CHECK(format_number(1.0 / 3.0) == "0.333333");
    CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(parse_number("inf") == std::numeric_limits<double>::infinity());
    CHECK(parse_number("2.5e-6") == 2.5e-6);
    CHECK_THROWS_AS(parse_number("abc"), fsolink::ParseError);
}

TEST_CASE("table parsing") {
    const auto t = parse("a,b\n1,2\n3,4\n");
    CHECK(t.header.size() == 2);
    CHECK(t.rows.size() == 2);
    CHECK(t.column("b") == 1);
    CHECK(t.rows[1][t.column("a")] == "3");
    CHECK_THROWS_AS(t.column("c"), fsolink::ParseError);
    CHECK_THROWS_AS(parse("a,b\n1\n"), fsolink::ParseError);
}
