#include <doctest.h>

#include "obench/error.hpp"
#include "obench/timeutil.hpp"

using namespace obench;

TEST_SUITE("timeutil") {

TEST_CASE("day offsets from the OSSE start date") {
    const auto epoch = parse_iso("2012-10-01");
    // Frozen against Python's datetime arithmetic.
    CHECK(days_between(epoch, parse_iso("2012-10-22")) == 21.0);
    CHECK(days_between(epoch, parse_iso("2012-12-02")) == 62.0);
    CHECK(days_between(epoch, parse_iso("2016-12-01")) == 1522.0);
    CHECK(days_between(epoch, parse_iso("2017-01-01")) == 1553.0);
    CHECK(days_between(epoch, parse_iso("2017-12-31")) == 1917.0);
    CHECK(days_between(epoch, parse_iso("2018-01-31")) == 1948.0);
    CHECK(days_between(epoch, parse_iso("2000-02-29")) == -4598.0);
    CHECK(days_between(epoch, parse_iso("1970-01-01")) == -15614.0);
    CHECK(days_between(epoch, parse_iso("2012-10-22T06:30:15.25Z")) == doctest::Approx(21.271009837962964).epsilon(1e-15));
}

TEST_CASE("format and parse round trip") {
    for (const char* s : {"2012-10-01T00:00:00Z", "2017-12-31T23:59:59Z", "2012-10-22T06:30:15.25Z",
                          "2012-10-22T06:30:15.000001Z"}) {
        CHECK(format_iso(parse_iso(s)) == s);
    }
    CHECK(format_iso(parse_iso("2012-10-01")) == "2012-10-01T00:00:00Z");
}

TEST_CASE("add_days and floor_to_day") {
    const auto t = parse_iso("2012-10-01");
    CHECK(format_iso(add_days(t, 1.5)) == "2012-10-02T12:00:00Z");
    CHECK(format_iso(floor_to_day(parse_iso("2012-10-22T06:30:15Z"))) == "2012-10-22T00:00:00Z");
    CHECK(format_iso(add_days(t, -1.0)) == "2012-09-30T00:00:00Z");
}

TEST_CASE("malformed timestamps are parse errors") {
    for (const char* s : {"", "2012-13-01", "2012-02-30", "2012/10/01", "2012-10-01T25:00:00Z", "2012-10-01T00:00:00",
                          "2012-10-01T00:00:00.1234567Z"}) {
        CAPTURE(s);
        try {
            parse_iso(s);
            FAIL("accepted");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::Parse);
        }
    }
}

}
