#include <doctest.h>

#include <bit>
#include <cmath>
#include <cstring>
#include <limits>

#include <json.hpp>

#include "obench/error.hpp"
#include "obench/grid_io.hpp"
#include "support.hpp"

using namespace obench;

namespace {

std::string le64(std::uint64_t v) {
    std::string s(8, '\0');
    for (int i = 0; i < 8; ++i) s[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
    return s;
}

std::string hand_encoded(const std::string& header, const std::vector<double>& payload) {
    std::string out = "OBGRID01" + le64(header.size()) + header;
    for (double v : payload) out += le64(std::bit_cast<std::uint64_t>(v));
    return out;
}

ErrorKind kind_of_failure(const std::function<void()>& fn, std::string* field = nullptr) {
    try {
        fn();
    } catch (const Error& e) {
        if (field) *field = e.field();
        return e.kind();
    }
    FAIL("expected an error");
    return ErrorKind::Domain;
}

}  // namespace

TEST_SUITE("grid_io") {

TEST_CASE("grid round trip is bit exact, NaN included") {
    auto f = testing::make_field(3, 4, 5, [](auto t, auto y, auto x) { return std::sin(0.1 * t + 0.2 * y - 0.3 * x); });
    std::vector<double> d(f.data().begin(), f.data().end());
    d[7] = std::numeric_limits<double>::quiet_NaN();
    d[11] = -0.0;
    f = f.with_data(d).with_attrs({{"source", "test"}});
    const auto g = decode_grid(encode_grid(f));
    CHECK(g == f);
    CHECK(std::signbit(g.data()[11]));
    CHECK(std::isnan(g.data()[7]));
    CHECK(g.attr("source") == std::optional<std::string>("test"));
}

TEST_CASE("decodes a hand-built file") {
    const std::string header =
        R"({"dims":["time","lat","lon"],"epoch":"2012-10-01T00:00:00Z","lat":[33.0],"lon":[-65.0,-64.9],)"
        R"("shape":[1,1,2],"time":[0.0],"units":"m","var":"ssh"})";
    const auto g = decode_grid(hand_encoded(header, {1.5, -2.25}));
    CHECK(g.shape() == Shape3{1, 1, 2});
    CHECK(g.at(0, 0, 0) == 1.5);
    CHECK(g.at(0, 0, 1) == -2.25);
    CHECK(g.lon().values == std::vector<double>{-65.0, -64.9});
    CHECK(g.time().units == "days");
    CHECK(format_iso(g.epoch()) == "2012-10-01T00:00:00Z");
}

TEST_CASE("header keys are written sorted") {
    const auto f = testing::make_field(1, 2, 2, [](auto, auto, auto) { return 0.0; });
    const auto bytes = encode_grid(f);
    std::uint64_t len = 0;
    for (int i = 0; i < 8; ++i) len |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes[8 + i])) << (8 * i);
    const auto header = nlohmann::ordered_json::parse(bytes.substr(16, len));
    std::vector<std::string> keys;
    for (const auto& [k, v] : header.items()) keys.push_back(k);
    CHECK(std::is_sorted(keys.begin(), keys.end()));
    for (const char* k : {"var", "units", "dims", "shape", "epoch", "time", "lat", "lon", "attrs"})
        CHECK(header.contains(k));
}

TEST_CASE("corrupt files name the failing field") {
    const auto f = testing::make_field(2, 2, 2, [](auto t, auto y, auto x) { return double(t + y + x); });
    auto bytes = encode_grid(f);
    std::string field;

    auto bad_magic = bytes;
    bad_magic[0] = 'X';
    CHECK(kind_of_failure([&] { decode_grid(bad_magic); }, &field) == ErrorKind::Parse);
    CHECK(field == "magic");

    auto truncated = bytes.substr(0, bytes.size() - 3);
    CHECK(kind_of_failure([&] { decode_grid(truncated); }, &field) == ErrorKind::Parse);
    CHECK(field == "payload length");

    const std::string header =
        R"({"dims":["lat","time","lon"],"epoch":"2012-10-01","lat":[0.0],"lon":[0.0],"shape":[1,1,1],"time":[0.0],"units":"m","var":"ssh"})";
    CHECK(kind_of_failure([&] { decode_grid(hand_encoded(header, {0.0})); }, &field) == ErrorKind::Parse);
    CHECK(field == "dims");
}

TEST_CASE("infinite payload values are rejected") {
    const std::string header =
        R"({"dims":["time","lat","lon"],"epoch":"2012-10-01","lat":[0.0],"lon":[0.0],"shape":[1,1,1],"time":[0.0],"units":"m","var":"ssh"})";
    CHECK_THROWS_AS(decode_grid(hand_encoded(header, {std::numeric_limits<double>::infinity()})), Error);
}

TEST_CASE("track CSV round trip") {
    const auto epoch = parse_iso("2012-10-01");
    AlongTrackSet set({{0.5, 33.25, -64.5, 0.125},
                       {0.25, 34.0, -63.0, std::numeric_limits<double>::quiet_NaN()},
                       {1.75, 35.125, -60.5, -0.3}},
                      epoch);
    const auto text = encode_track(set);
    CHECK(text.rfind("time,lat,lon,ssh\n2012-10-01T06:00:00Z,34,-63,nan\n", 0) == 0);
    const auto back = decode_track(text, epoch);
    REQUIRE(back.size() == 3);
    CHECK(back.records()[0].time == 0.25);
    CHECK(std::isnan(back.records()[0].value));
    CHECK(back.records()[2].value == -0.3);
    CHECK(back.records()[2].lat == 35.125);
}

TEST_CASE("track default epoch is midnight of the first record") {
    const auto t = decode_track("time,lat,lon,ssh\n2012-10-22T06:00:00Z,33,-64,0.1\n");
    CHECK(format_iso(t.epoch()) == "2012-10-22T00:00:00Z");
    CHECK(t.records()[0].time == 0.25);
}

TEST_CASE("track parse errors") {
    std::string field;
    CHECK(kind_of_failure([&] { decode_track("a,b,c\n"); }, &field) == ErrorKind::Parse);
    CHECK(field == "header");
    CHECK(kind_of_failure([&] { decode_track("time,lat,lon,ssh\nyesterday,1,2,3\n"); }, &field) == ErrorKind::Parse);
    CHECK(field.find("time") != std::string::npos);
    CHECK(kind_of_failure([&] { decode_track("time,lat,lon,ssh\n2012-10-01,1,2\n"); }) == ErrorKind::Parse);
}

TEST_CASE("file helpers report I/O errors") {
    CHECK(kind_of_failure([] { read_grid("/nonexistent/dir/file.obg"); }) == ErrorKind::Io);
    const auto dir = testing::temp_dir("grid_io");
    const auto f = testing::make_field(2, 3, 4, [](auto t, auto y, auto x) { return 0.5 * t - y + 0.25 * x; });
    write_grid(f, dir / "f.obg");
    CHECK(read_grid(dir / "f.obg") == f);
}

}
