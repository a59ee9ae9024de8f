#include <doctest.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <random>

#include "obench/coords.hpp"
#include "obench/error.hpp"
#include "obench/prng.hpp"
#include "support.hpp"

using namespace obench;

TEST_SUITE("coords") {

TEST_CASE("longitude wrap is idempotent and lands in [-180, 180)") {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> dist(-180.0, 360.0);
    for (int i = 0; i < 100000; ++i) {
        const double lon = dist(gen);
        const double w = wrap_longitude(lon);
        REQUIRE(w >= -180.0);
        REQUIRE(w < 180.0);
        REQUIRE(std::bit_cast<std::uint64_t>(wrap_longitude(w)) == std::bit_cast<std::uint64_t>(w));
        const double r = std::remainder(lon - w, 360.0);
        REQUIRE(std::abs(r) < 1e-9);
    }
    CHECK(wrap_longitude(180.0) == -180.0);
    CHECK(wrap_longitude(359.5) == -0.5);
    CHECK_THROWS_AS(wrap_longitude(360.0), Error);
    CHECK_THROWS_AS(wrap_longitude(-180.5), Error);
}

TEST_CASE("validate_latlon sorts 0-360 longitudes and descending latitudes") {
    // Columns at 0, 1, 358, 359 degrees east and latitudes listed north to south.
    std::vector<double> lon{0.0, 1.0, 358.0, 359.0}, lat{2.0, 1.0};
    std::vector<double> data;
    for (double la : lat)
        for (double lo : lon) data.push_back(la * 1000.0 + lo);
    GriddedField f("ssh", "m", make_time_axis({0.0}), make_lat_axis(lat), make_lon_axis(lon), data,
                   parse_iso("2012-10-01"));
    const auto v = validate_latlon(f);
    CHECK(v.lon().values == std::vector<double>{-2.0, -1.0, 0.0, 1.0});
    CHECK(v.lat().values == std::vector<double>{1.0, 2.0});
    CHECK(v.at(0, 0, 0) == 1000.0 + 358.0);
    CHECK(v.at(0, 1, 3) == 2000.0 + 1.0);
    CHECK(v.has_canonical_latlon());
    CHECK(validate_latlon(v) == v);
}

TEST_CASE("validate_latlon rejects out-of-range latitudes") {
    GriddedField f("ssh", "m", make_time_axis({0.0}), make_lat_axis({89.0, 91.0}), make_lon_axis({0.0}),
                   {0.0, 0.0}, parse_iso("2012-10-01"));
    CHECK_THROWS_AS(validate_latlon(f), Error);
}

TEST_CASE("validate_time rebases to a new epoch in days") {
    const auto f = testing::make_field(3, 2, 2, [](auto t, auto, auto) { return double(t); });
    const auto g = validate_time(f, parse_iso("2012-09-30"));
    CHECK(g.time().values == std::vector<double>{1.0, 2.0, 3.0});
    CHECK(format_iso(g.epoch()) == "2012-09-30T00:00:00Z");
    const auto h = time_rescale(f, 1.0, "hours");
    CHECK(h.time().values == std::vector<double>{0.0, 24.0, 48.0});
    CHECK(validate_time(h, f.epoch()).time().values == f.time().values);
}

TEST_CASE("sel_domain uses closed intervals") {
    const auto f = testing::make_field(10, 10, 10, [](auto t, auto y, auto x) { return double(100 * t + 10 * y + x); });
    DomainBox box;
    box.lat = {33.2, 33.5};
    box.lon = {-64.95, -64.7};
    box.time = {parse_iso("2012-10-03"), parse_iso("2012-10-05")};
    const auto s = sel_domain(f, box);
    CHECK(s.shape() == Shape3{3, 4, 3});
    CHECK(s.at(0, 0, 0) == 200 + 20 + 1);
    box.lat = {50.0, 51.0};
    try {
        sel_domain(f, box);
        FAIL("no error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("empty domain") != std::string::npos);
    }
}

TEST_CASE("SplitMix64 stream matches an independent trace") {
    Prng r0(0);
    CHECK(r0.next() == 0xE220A8397B1DCDAFULL);
    CHECK(r0.next() == 0x6E789E6AA1B965F4ULL);
    CHECK(r0.next() == 0x06C45D188009454FULL);
    Prng r42(42);
    CHECK(r42.next() == 0xBDD732262FEB6E95ULL);
    Prng r5(5);
    CHECK(r5.uniform() == doctest::Approx(0.38676804598393405).epsilon(1e-16));
    CHECK(r5.uniform() == doctest::Approx(0.7523070158382239).epsilon(1e-16));
    Prng g5(5);
    CHECK(g5.gaussian() == doctest::Approx(0.019979106634035845).epsilon(1e-12));
    CHECK(g5.gaussian() == doctest::Approx(-1.3782093800831883).epsilon(1e-12));
}

TEST_CASE("subset_track keeps frozen indices in time order") {
    auto make = [](std::size_t n) {
        std::vector<TrackRecord> r;
        for (std::size_t i = 0; i < n; ++i) r.push_back({double(i) * 0.01, 33.0, -64.0, double(i)});
        return AlongTrackSet(r, parse_iso("2012-10-01"));
    };
    auto values = [](const AlongTrackSet& s) {
        std::vector<int> v;
        for (const auto& r : s.records()) v.push_back(int(r.value));
        return v;
    };
    CHECK(values(subset_track(make(20), 5, 42)) == std::vector<int>{3, 8, 11, 16, 17});
    CHECK(values(subset_track(make(100), 10, 7)) == std::vector<int>{4, 5, 14, 17, 24, 42, 46, 62, 64, 97});
    CHECK(values(subset_track(make(1000), 15, 1500)) ==
          std::vector<int>{131, 151, 163, 233, 243, 349, 371, 443, 511, 532, 632, 721, 737, 781, 795});
    CHECK(subset_track(make(10), 10, 1).size() == 10);
    CHECK(subset_track(make(10), 50, 1).size() == 10);
}

TEST_CASE("latlon_deg2m follows the tangent plane at the mean latitude") {
    const auto f = testing::make_field(1, 11, 21, [](auto, auto, auto) { return 0.0; }, 30.0, -60.0, 1.0, 0.5);
    const auto m = latlon_deg2m(f);
    const double deg = std::numbers::pi / 180.0;
    CHECK(m.lat().units == "m");
    CHECK(m.lat().values[1] == doctest::Approx(6371000.0 * deg));
    CHECK(m.lon().values[2] == doctest::Approx(6371000.0 * deg * std::cos(35.0 * deg)));
    CHECK(m.attr("lat_mean_deg") == std::optional<std::string>("35"));
    CHECK(m.attr("lon_min_deg") == std::optional<std::string>("-60"));
    CHECK_THROWS_AS(latlon_deg2m(m), Error);
}

TEST_CASE("time_rescale rejects non-positive frequencies") {
    const auto f = testing::make_field(2, 1, 1, [](auto, auto, auto) { return 0.0; });
    CHECK_THROWS_AS(time_rescale(f, 0.0, "days"), Error);
    CHECK_THROWS_AS(time_rescale(f, 1.0, "fortnights"), Error);
}

}
