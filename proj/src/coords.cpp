#include "obench/coords.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <fmt/format.h>

#include "obench/error.hpp"
#include "obench/prng.hpp"

namespace obench {

double wrap_longitude(double lon) {
    if (!(lon >= -180.0 && lon < 360.0)) fail(fmt::format("longitude {} outside [-180, 360)", lon));
    // ((lon + 180) mod 360) - 180, written so canonical values pass through bit-exactly.
    return lon < 180.0 ? lon : lon - 360.0;
}

namespace {

/// Ascending order of `values`; throws on duplicates.
std::vector<std::size_t> ascending_order(const std::vector<double>& values, const char* name) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return values[a] < values[b]; });
    for (std::size_t i = 1; i < order.size(); ++i) {
        if (values[order[i]] == values[order[i - 1]])
            fail(fmt::format("duplicate {} coordinate {} after canonicalization", name, values[order[i]]));
    }
    return order;
}

void require_degrees(const GriddedField& field) {
    if (field.lat().in_meters() || field.lon().in_meters())
        fail("lat/lon axes are already in meters; expected degrees");
}

double time_to_days(const std::string& units) { return seconds_per_time_unit(units) / kSecondsPerDay; }

}  // namespace

GriddedField validate_latlon(const GriddedField& field) {
    require_degrees(field);
    std::vector<double> lat = field.lat().values;
    for (double v : lat) {
        if (!(v >= -90.0 && v <= 90.0)) fail(fmt::format("latitude {} outside [-90, 90]", v));
    }
    std::vector<double> lon = field.lon().values;
    for (double& v : lon) v = wrap_longitude(v);

    const auto lat_order = ascending_order(lat, "lat");
    const auto lon_order = ascending_order(lon, "lon");
    const auto s = field.shape();

    std::vector<double> sorted_lat(s.ny), sorted_lon(s.nx);
    for (std::size_t i = 0; i < s.ny; ++i) sorted_lat[i] = lat[lat_order[i]];
    for (std::size_t i = 0; i < s.nx; ++i) sorted_lon[i] = lon[lon_order[i]];

    std::vector<double> data(s.volume());
    for (std::size_t t = 0; t < s.nt; ++t)
        for (std::size_t y = 0; y < s.ny; ++y)
            for (std::size_t x = 0; x < s.nx; ++x)
                data[(t * s.ny + y) * s.nx + x] = field.at(t, lat_order[y], lon_order[x]);

    return GriddedField(field.var(), field.units(), field.time(),
                        make_lat_axis(std::move(sorted_lat), field.lat().units),
                        make_lon_axis(std::move(sorted_lon), field.lon().units), std::move(data), field.epoch(),
                        field.attrs());
}

AlongTrackSet validate_latlon(const AlongTrackSet& track) {
    auto records = track.records();
    for (auto& r : records) {
        if (!(r.lat >= -90.0 && r.lat <= 90.0)) fail(fmt::format("latitude {} outside [-90, 90]", r.lat));
        r.lon = wrap_longitude(r.lon);
    }
    return track.with_records(std::move(records));
}

GriddedField validate_time(const GriddedField& field, Timestamp epoch) {
    const double scale = time_to_days(field.time().units);
    const double shift = days_between(epoch, field.epoch());
    std::vector<double> t = field.time().values;
    for (double& v : t) v = v * scale + shift;
    for (std::size_t i = 1; i < t.size(); ++i) {
        if (!(t[i] > t[i - 1])) fail(fmt::format("grid time axis is not strictly increasing at index {}", i));
    }
    return GriddedField(field.var(), field.units(), make_time_axis(std::move(t)), field.lat(), field.lon(),
                        std::vector<double>(field.data().begin(), field.data().end()), epoch, field.attrs());
}

AlongTrackSet validate_time(const AlongTrackSet& track, Timestamp epoch) {
    const double scale = time_to_days(track.time_units());
    const double shift = days_between(epoch, track.epoch());
    auto records = track.records();
    for (auto& r : records) r.time = r.time * scale + shift;
    return AlongTrackSet(std::move(records), epoch, track.var(), track.units(), units::kDays);
}

CoordAxis time_axis_from_timestamps(const std::vector<Timestamp>& stamps, Timestamp epoch) {
    std::vector<double> t;
    t.reserve(stamps.size());
    for (auto s : stamps) t.push_back(days_between(epoch, s));
    for (std::size_t i = 1; i < t.size(); ++i) {
        if (!(t[i] > t[i - 1])) fail(fmt::format("grid time axis is not strictly increasing at index {}", i));
    }
    return make_time_axis(std::move(t));
}

std::pair<std::size_t, std::size_t> select_range(const CoordAxis& axis, double lo, double hi) {
    if (!axis.ascending()) fail(fmt::format("{} axis must be ascending for selection", axis.name));
    const auto& v = axis.values;
    auto first = std::lower_bound(v.begin(), v.end(), lo);
    auto last = std::upper_bound(v.begin(), v.end(), hi);
    if (first >= last) fail(fmt::format("empty domain: no {} coordinates within [{}, {}]", axis.name, lo, hi));
    return {static_cast<std::size_t>(first - v.begin()), static_cast<std::size_t>(last - v.begin()) - 1};
}

GriddedField sel_domain(const GriddedField& field, const DomainBox& box) {
    box.check();
    const auto s = field.shape();
    std::pair<std::size_t, std::size_t> tr{0, s.nt - 1}, yr{0, s.ny - 1}, xr{0, s.nx - 1};
    if (box.lat) yr = select_range(field.lat(), box.lat->first, box.lat->second);
    if (box.lon) xr = select_range(field.lon(), box.lon->first, box.lon->second);
    if (box.time) {
        const double scale = seconds_per_time_unit(field.time().units);
        const double lo = days_between(field.epoch(), box.time->first) * kSecondsPerDay / scale;
        const double hi = days_between(field.epoch(), box.time->second) * kSecondsPerDay / scale;
        tr = select_range(field.time(), lo, hi);
    }
    auto sub = [](const CoordAxis& a, std::pair<std::size_t, std::size_t> r) {
        return CoordAxis{a.name, std::vector<double>(a.values.begin() + static_cast<std::ptrdiff_t>(r.first),
                                                     a.values.begin() + static_cast<std::ptrdiff_t>(r.second) + 1),
                         a.units};
    };
    std::vector<double> data;
    data.reserve((tr.second - tr.first + 1) * (yr.second - yr.first + 1) * (xr.second - xr.first + 1));
    for (std::size_t t = tr.first; t <= tr.second; ++t)
        for (std::size_t y = yr.first; y <= yr.second; ++y)
            for (std::size_t x = xr.first; x <= xr.second; ++x) data.push_back(field.at(t, y, x));
    return GriddedField(field.var(), field.units(), sub(field.time(), tr), sub(field.lat(), yr),
                        sub(field.lon(), xr), std::move(data), field.epoch(), field.attrs());
}

AlongTrackSet sel_domain(const AlongTrackSet& track, const DomainBox& box) {
    box.check();
    std::vector<TrackRecord> kept;
    double t_lo = 0.0, t_hi = 0.0;
    if (box.time) {
        const double scale = seconds_per_time_unit(track.time_units());
        t_lo = days_between(track.epoch(), box.time->first) * kSecondsPerDay / scale;
        t_hi = days_between(track.epoch(), box.time->second) * kSecondsPerDay / scale;
    }
    for (const auto& r : track.records()) {
        if (box.lat && (r.lat < box.lat->first || r.lat > box.lat->second)) continue;
        if (box.lon && (r.lon < box.lon->first || r.lon > box.lon->second)) continue;
        if (box.time && (r.time < t_lo || r.time > t_hi)) continue;
        kept.push_back(r);
    }
    if (kept.empty()) fail("empty domain: no track records inside the selection box");
    return track.with_records(std::move(kept));
}

AlongTrackSet subset_track(const AlongTrackSet& track, std::size_t num_samples, std::uint64_t seed) {
    const std::size_t n = track.size();
    if (num_samples >= n) return track;
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    Prng rng(seed);
    for (std::size_t i = n - 1; i > 0; --i) {
        const auto j = static_cast<std::size_t>(rng.below(i + 1));
        std::swap(idx[i], idx[j]);
    }
    idx.resize(num_samples);
    std::sort(idx.begin(), idx.end());
    std::vector<TrackRecord> out;
    out.reserve(num_samples);
    for (auto i : idx) out.push_back(track.records()[i]);
    return track.with_records(std::move(out));
}

GriddedField latlon_deg2m(const GriddedField& field) {
    require_degrees(field);
    const auto& lat = field.lat().values;
    const auto& lon = field.lon().values;
    const double deg = std::numbers::pi / 180.0;
    const double lat_min = *std::min_element(lat.begin(), lat.end());
    const double lon_min = *std::min_element(lon.begin(), lon.end());
    const double lat_mean = std::accumulate(lat.begin(), lat.end(), 0.0) / static_cast<double>(lat.size());
    const double zonal = kEarthRadius * std::cos(lat_mean * deg);

    std::vector<double> y(lat.size()), x(lon.size());
    for (std::size_t i = 0; i < lat.size(); ++i) y[i] = (lat[i] - lat_min) * deg * kEarthRadius;
    for (std::size_t i = 0; i < lon.size(); ++i) x[i] = (lon[i] - lon_min) * deg * zonal;

    Attrs attrs = field.attrs();
    attrs["lat_mean_deg"] = fmt::format("{:.17g}", lat_mean);
    attrs["lat_min_deg"] = fmt::format("{:.17g}", lat_min);
    attrs["lon_min_deg"] = fmt::format("{:.17g}", lon_min);
    return GriddedField(field.var(), field.units(), field.time(), make_lat_axis(std::move(y), units::kMeters),
                        make_lon_axis(std::move(x), units::kMeters),
                        std::vector<double>(field.data().begin(), field.data().end()), field.epoch(),
                        std::move(attrs));
}

namespace {

double rescale_factor(const std::string& from, double freq, const std::string& unit) {
    if (!(freq > 0.0) || !std::isfinite(freq)) fail(fmt::format("time_rescale: freq must be positive, got {}", freq));
    return seconds_per_time_unit(from) / (freq * seconds_per_time_unit(unit));
}

}  // namespace

GriddedField time_rescale(const GriddedField& field, double freq, const std::string& unit) {
    const double f = rescale_factor(field.time().units, freq, unit);
    std::vector<double> t = field.time().values;
    for (double& v : t) v *= f;
    return GriddedField(field.var(), field.units(), make_time_axis(std::move(t), unit), field.lat(), field.lon(),
                        std::vector<double>(field.data().begin(), field.data().end()), field.epoch(),
                        field.attrs());
}

AlongTrackSet time_rescale(const AlongTrackSet& track, double freq, const std::string& unit) {
    const double f = rescale_factor(track.time_units(), freq, unit);
    auto records = track.records();
    for (auto& r : records) r.time *= f;
    return AlongTrackSet(std::move(records), track.epoch(), track.var(), track.units(), unit);
}

}  // namespace obench
