#include <doctest.h>

#include "obench/error.hpp"
#include "obench/yaml_subset.hpp"

using namespace obench;

TEST_SUITE("yaml") {

TEST_CASE("plain scalars are typed, quoted scalars stay strings") {
    const auto j = parse_yaml_subset(R"(
a: 3
b: -2.5
c: true
d: ~
e: 2012-10-22
f: "42"
g: 'false'
h: gauss_seidel
i: +7
j: 1e-6
)");
    CHECK(j["a"] == 3);
    CHECK(j["a"].is_number_integer());
    CHECK(j["b"] == -2.5);
    CHECK(j["c"] == true);
    CHECK(j["d"].is_null());
    CHECK(j["e"] == "2012-10-22");
    CHECK(j["f"] == "42");
    CHECK(j["g"] == "false");
    CHECK(j["h"] == "gauss_seidel");
    CHECK(j["i"] == 7);
    CHECK(j["j"] == doctest::Approx(1e-6));
}

TEST_CASE("nested sequences and flow collections") {
    const auto j = parse_yaml_subset(R"(
steps:
  - op: sel_domain
    params:
      lat: [33, 43]
      time: ["2012-10-22", "2012-12-02"]
  - op: fill_nans
    params: {method: gauss_seidel, tol: 1.0e-6}
)");
    REQUIRE(j["steps"].size() == 2);
    CHECK(j["steps"][0]["params"]["lat"][1] == 43);
    CHECK(j["steps"][0]["params"]["time"][0] == "2012-10-22");
    CHECK(j["steps"][1]["params"]["method"] == "gauss_seidel");
}

TEST_CASE("empty documents parse to null") {
    CHECK(parse_yaml_subset("").is_null());
    CHECK(parse_yaml_subset("# just a comment\n").is_null());
}

TEST_CASE("unsupported features are rejected") {
    CHECK_THROWS_WITH_AS(parse_yaml_subset("a: &x 1\nb: *x\n"), doctest::Contains("not supported"), Error);
    CHECK_THROWS_WITH_AS(parse_yaml_subset("a: !!str 1\n"), doctest::Contains("tag"), Error);
    CHECK_THROWS_WITH_AS(parse_yaml_subset("a: 1\na: 2\n"), doctest::Contains("duplicate key"), Error);
    CHECK_THROWS_AS(parse_yaml_subset("? [1, 2]\n: x\n"), Error);
    CHECK_THROWS_WITH_AS(parse_yaml_subset("a: 1\n---\nb: 2\n"), doctest::Contains("multiple"), Error);
    try {
        parse_yaml_subset("a: [1, 2\n");
        FAIL("expected a parse error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Parse);
    }
}

}
