#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "obench/error.hpp"
#include "obench/grid_io.hpp"
#include "obench/obs_sim.hpp"
#include "obench/prng.hpp"
#include "obench/regrid.hpp"
#include "support.hpp"

using namespace obench;

namespace {

DomainBox gulf_box() {
    DomainBox b;
    b.lat = {{33.0, 43.0}};
    b.lon = {{-65.0, -55.0}};
    return b;
}

TrackPattern single_nadir() {
    TrackPattern p;
    p.satellites = {Satellite{66.0, 0.0, 0.0}};
    p.repeat_cycle = 1.0;
    return p;
}

}  // namespace

TEST_SUITE("obs_sim") {

TEST_CASE("Gaussian draws follow the frozen Box-Muller trace") {
    Prng g(5);
    CHECK(g.gaussian() == doctest::Approx(0.019979106634035845).epsilon(1e-14));
    CHECK(g.gaussian() == doctest::Approx(-1.3782093800831883).epsilon(1e-14));
}

TEST_CASE("point count follows the in-box track length") {
    const auto box = gulf_box();
    const auto pattern = single_nadir();
    const TrackPeriod day{0.0, 1.0};
    const auto passes = plan_passes(pattern, box, day);
    REQUIRE(!passes.empty());
    double length = 0.0;
    for (const auto& p : passes) length += p.s_out - p.s_in;
    const auto pts = generate_tracks(pattern, box, day);
    const double expected = length / pattern.along_track_spacing;
    // One extra sample per pass at most, from counting both end points.
    CHECK(double(pts.size()) >= expected - 1.0);
    CHECK(double(pts.size()) <= expected + double(passes.size()));
    CHECK(generate_tracks(pattern, box, {3.0, 3.0}).empty());
}

TEST_CASE("tracks stay inside the box and are time ordered") {
    const auto box = gulf_box();
    for (const char* name : {"nadir-4sat", "swot-like"}) {
        const auto pts = generate_tracks(TrackPattern::preset(name), box, {0.0, 5.0});
        REQUIRE(!pts.empty());
        for (std::size_t i = 0; i < pts.size(); ++i) {
            CHECK(pts[i].lat >= 33.0);
            CHECK(pts[i].lat <= 43.0);
            CHECK(pts[i].lon >= -65.0);
            CHECK(pts[i].lon <= -55.0);
            CHECK(pts[i].time >= 0.0);
            CHECK(pts[i].time < 5.0 + 1e-3);
            if (i) CHECK(pts[i - 1].time <= pts[i].time);
        }
    }
}

TEST_CASE("degenerate swath equals nadir") {
    auto swath = single_nadir();
    swath.kind = TrackKind::Swath;
    swath.swath = {0.0, 2000.0, 0.0};
    const auto a = generate_tracks(single_nadir(), gulf_box(), {0.0, 2.0});
    const auto b = generate_tracks(swath, gulf_box(), {0.0, 2.0});
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].lat == b[i].lat);
        CHECK(a[i].lon == b[i].lon);
        CHECK(a[i].time == b[i].time);
    }
}

TEST_CASE("swath leaves a gap around nadir") {
    auto p = TrackPattern::preset("swot-like");
    p.satellites.resize(1);
    const auto box = gulf_box();
    const auto passes = plan_passes(p, box, {0.0, 21.0});
    REQUIRE(!passes.empty());
    const auto pts = generate_tracks(p, box, {0.0, 21.0});
    const TangentPlane plane(box);
    // Distances from the first pass line for points sampled during that pass.
    const auto& first = passes.front();
    const double nx = -first.dir_y, ny = first.dir_x;
    const double dur = (first.s_out - first.s_in) / (p.ground_speed * 86400.0);
    std::size_t near = 0, total = 0;
    for (const auto& q : pts) {
        if (q.time < first.start || q.time > first.start + dur) continue;
        const auto [x, y] = plane.to_xy(q.lat, q.lon);
        const double d = std::abs(x * nx + y * ny - first.offset);
        if (d > 500.0 && d < 0.5 * p.swath.nadir_gap - 500.0) ++near;
        if (d < 500.0) ++total;
        CHECK(d <= p.swath.half_width + 1000.0);
    }
    CHECK(near == 0);
    CHECK(total > 0);
}

TEST_CASE("presets and JSON round trip") {
    const auto n = TrackPattern::preset("nadir-4sat");
    CHECK(n.satellites.size() == 4);
    CHECK(n.kind == TrackKind::Nadir);
    const auto s = TrackPattern::preset("swot-like");
    CHECK(s.kind == TrackKind::Swath);
    CHECK(s.swath.half_width == 120000.0);
    CHECK(s.swath.nadir_gap == 20000.0);
    CHECK_THROWS_AS(TrackPattern::preset("jason"), Error);
    const auto back = TrackPattern::from_json(s.to_json());
    CHECK(back.to_json() == s.to_json());
    auto bad = n;
    bad.satellites[0].inclination = 180.0;
    CHECK_THROWS_AS(bad.check(), Error);
    bad = n;
    bad.along_track_spacing = 0.0;
    CHECK_THROWS_AS(bad.check(), Error);
}

TEST_CASE("sampling at grid nodes is exact and noise is seeded") {
    const auto f = testing::make_field(2, 4, 4, [](auto t, auto y, auto x) { return double(t * 100 + y * 10 + x); });
    const std::vector<TrackPoint> pts{{0.0, 33.1, -64.8}, {1.0, 33.3, -65.0}, {0.5, 50.0, -64.9}};
    const auto clean = sample_field(f, pts, {});
    REQUIRE(clean.track.size() == 2);
    CHECK(clean.dropped == 1);
    CHECK(clean.track.records()[0].value == doctest::Approx(12.0));
    CHECK(clean.track.records()[1].value == doctest::Approx(130.0));
    const auto zero_std = sample_field(f, pts, {NoiseKind::Gaussian, 0.0, 9});
    CHECK(zero_std.track == clean.track);
    const auto a = sample_field(f, pts, {NoiseKind::Gaussian, 0.1, 9});
    const auto b = sample_field(f, pts, {NoiseKind::Gaussian, 0.1, 9});
    CHECK(a.track == b.track);
    CHECK(a.track.records()[0].value != clean.track.records()[0].value);
    CHECK_THROWS_AS(sample_field(f, pts, {NoiseKind::Gaussian, -1.0, 9}), Error);
}

TEST_CASE("Gaussian noise has the requested spread") {
    const auto f = testing::make_field(2, 2, 2, [](auto, auto, auto) { return 0.0; });
    std::vector<TrackPoint> pts(10000, TrackPoint{0.5, 33.05, -64.95});
    const auto r = sample_field(f, pts, {NoiseKind::Gaussian, 0.01, 2024});
    double mean = 0.0, ss = 0.0;
    for (const auto& rec : r.track.records()) mean += rec.value;
    mean /= 10000.0;
    for (const auto& rec : r.track.records()) ss += (rec.value - mean) * (rec.value - mean);
    const double sd = std::sqrt(ss / 10000.0);
    CHECK(sd >= 0.0097);
    CHECK(sd <= 0.0103);
}

TEST_CASE("identical inputs give byte-identical track CSV") {
    const auto f = make_eddy_field({.nt = 6, .ny = 24, .nx = 24, .seed = 3});
    DomainBox box;
    box.lat = {{f.lat().front(), f.lat().back()}};
    box.lon = {{f.lon().front(), f.lon().back()}};
    const auto pattern = TrackPattern::preset("nadir-4sat");
    auto run = [&] {
        const auto pts = generate_tracks(pattern, box, {0.0, 5.0});
        return encode_track(sample_field(f, pts, {NoiseKind::Gaussian, 0.01, 77}).track);
    };
    CHECK(run() == run());
}

TEST_CASE("nadir preset keeps daily coverage sparse") {
    const auto f = make_eddy_field({.seed = 1});
    DomainBox box;
    box.lat = {{f.lat().front(), f.lat().back()}};
    box.lon = {{f.lon().front(), f.lon().back()}};
    const auto pts = generate_tracks(TrackPattern::preset("nadir-4sat"), box, {0.0, double(f.shape().nt)});
    const auto track = sample_field(f, pts, {}).track;
    const auto binned = regrid_to_grid(track, TargetAxes::like(f)).field;
    double total = 0.0;
    for (std::size_t t = 0; t < binned.shape().nt; ++t) {
        const auto sl = binned.slice(t);
        total += double(std::count_if(sl.begin(), sl.end(), [](double v) { return !std::isnan(v); })) / double(sl.size());
    }
    const double mean_cover = total / double(binned.shape().nt);
    CHECK(mean_cover > 0.0);
    CHECK(mean_cover < 0.05);
}

TEST_CASE("OSSE split on the evaluation dates") {
    const auto f = testing::make_field(365, 2, 2, [](auto t, auto, auto) { return double(t); });
    const auto s = osse_split(f, parse_iso("2012-10-22"), parse_iso("2012-12-02"));
    CHECK(s.eval_first == 21);
    CHECK(s.eval_last == 62);
    CHECK(s.eval.shape().nt == 42);
    REQUIRE(s.train);
    CHECK(s.train->shape().nt == 365 - 42);
    const auto spun = osse_split(f, parse_iso("2012-10-22"), parse_iso("2012-12-02"), 10.0);
    CHECK(spun.train->shape().nt == 365 - 42 - 10);
    const auto all = osse_split(f, parse_iso("2012-10-01"), parse_iso("2013-09-30"));
    CHECK(!all.train);
    CHECK_THROWS_WITH_AS(osse_split(f, parse_iso("2015-01-01"), parse_iso("2015-02-01")), doctest::Contains("empty domain"), Error);
}

TEST_CASE("eddy field is seeded and bounded") {
    const auto a = make_eddy_field({.nt = 3, .ny = 16, .nx = 16, .seed = 4});
    const auto b = make_eddy_field({.nt = 3, .ny = 16, .nx = 16, .seed = 4});
    const auto c = make_eddy_field({.nt = 3, .ny = 16, .nx = 16, .seed = 5});
    CHECK(a == b);
    CHECK(!(a == c));
    CHECK(a.attr("source") == "synthetic eddies");
    const double dx_m = (a.lat().values[1] - a.lat().values[0]) * 6371000.0 * M_PI / 180.0;
    CHECK(dx_m == doctest::Approx(5500.0));
    for (double v : a.data()) CHECK(std::abs(v) < 0.2 + 5 * 0.4);
}

}
