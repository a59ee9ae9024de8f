#include "obench/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include <fmt/format.h>

#include "obench/error.hpp"

namespace obench {

double seconds_per_time_unit(const std::string& unit) {
    if (unit == units::kDays) return kSecondsPerDay;
    if (unit == units::kHours) return 3600.0;
    if (unit == units::kSeconds) return 1.0;
    fail(fmt::format("unsupported time unit '{}' (expected days, hours or seconds)", unit));
}

bool CoordAxis::ascending() const {
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (!(values[i] > values[i - 1])) return false;
    }
    return true;
}

bool CoordAxis::strictly_monotonic() const {
    if (ascending()) return true;
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (!(values[i] < values[i - 1])) return false;
    }
    return true;
}

double CoordAxis::mean_spacing() const {
    if (values.size() < 2) return 0.0;
    return (values.back() - values.front()) / static_cast<double>(values.size() - 1);
}

CoordAxis make_time_axis(std::vector<double> values, std::string units) {
    return {"time", std::move(values), std::move(units)};
}
CoordAxis make_lat_axis(std::vector<double> values, std::string units) {
    return {"lat", std::move(values), std::move(units)};
}
CoordAxis make_lon_axis(std::vector<double> values, std::string units) {
    return {"lon", std::move(values), std::move(units)};
}

std::vector<double> linspace_step(double start, double step, std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = start + step * static_cast<double>(i);
    return v;
}

namespace {

void check_axis(const CoordAxis& axis, const char* expected_name) {
    if (axis.name != expected_name)
        fail_parse(expected_name, fmt::format("axis named '{}', expected '{}'", axis.name, expected_name));
    if (axis.values.empty()) fail_parse(expected_name, "axis is empty");
    for (double v : axis.values) {
        if (!std::isfinite(v)) fail_parse(expected_name, "axis holds a non-finite coordinate");
    }
    if (!axis.strictly_monotonic()) fail_parse(expected_name, "axis is not strictly monotonic");
}

}  // namespace

GriddedField::GriddedField(std::string var, std::string units, CoordAxis time, CoordAxis lat,
                           CoordAxis lon, std::vector<double> data, Timestamp epoch, Attrs attrs)
    : var_(std::move(var)),
      units_(std::move(units)),
      time_(std::move(time)),
      lat_(std::move(lat)),
      lon_(std::move(lon)),
      data_(std::move(data)),
      epoch_(epoch),
      attrs_(std::move(attrs)) {
    check_axis(time_, "time");
    check_axis(lat_, "lat");
    check_axis(lon_, "lon");
    const auto expected = shape().volume();
    if (data_.size() != expected)
        fail_parse("data", fmt::format("payload length {} does not match shape [{},{},{}] ({} values)",
                                       data_.size(), time_.size(), lat_.size(), lon_.size(), expected));
    for (double v : data_) {
        if (std::isinf(v)) fail_parse("data", "payload holds an infinity");
    }
}

const CoordAxis& GriddedField::axis(std::size_t dim) const {
    switch (dim) {
        case 0: return time_;
        case 1: return lat_;
        case 2: return lon_;
        default: fail(fmt::format("axis index {} out of range", dim));
    }
}

std::optional<std::string> GriddedField::attr(const std::string& key) const {
    auto it = attrs_.find(key);
    if (it == attrs_.end()) return std::nullopt;
    return it->second;
}

std::span<const double> GriddedField::slice(std::size_t t) const {
    const auto n = lat_.size() * lon_.size();
    return std::span<const double>(data_).subspan(t * n, n);
}

GriddedField GriddedField::with_data(std::vector<double> data) const {
    return GriddedField(var_, units_, time_, lat_, lon_, std::move(data), epoch_, attrs_);
}

GriddedField GriddedField::with_data(std::vector<double> data, std::string var, std::string units) const {
    return GriddedField(std::move(var), std::move(units), time_, lat_, lon_, std::move(data), epoch_, attrs_);
}

GriddedField GriddedField::with_attrs(Attrs attrs) const {
    return GriddedField(var_, units_, time_, lat_, lon_, data_, epoch_, std::move(attrs));
}

bool GriddedField::has_canonical_latlon() const {
    if (lat_.in_meters() || lon_.in_meters()) return false;
    if (!lat_.ascending() || !lon_.ascending()) return false;
    return lat_.front() >= -90.0 && lat_.back() <= 90.0 && lon_.front() >= -180.0 && lon_.back() < 180.0;
}

bool same_bits(std::span<const double> a, std::span<const double> b) {
    return a.size() == b.size() && (a.empty() || std::memcmp(a.data(), b.data(), a.size_bytes()) == 0);
}

bool operator==(const GriddedField& a, const GriddedField& b) {
    return a.var_ == b.var_ && a.units_ == b.units_ && a.time_ == b.time_ && a.lat_ == b.lat_ &&
           a.lon_ == b.lon_ && a.epoch_ == b.epoch_ && a.attrs_ == b.attrs_ && same_bits(a.data_, b.data_);
}

AlongTrackSet::AlongTrackSet(std::vector<TrackRecord> records, Timestamp epoch, std::string var,
                             std::string units, std::string time_units)
    : records_(std::move(records)),
      epoch_(epoch),
      var_(std::move(var)),
      units_(std::move(units)),
      time_units_(std::move(time_units)) {
    seconds_per_time_unit(time_units_);
    for (std::size_t i = 0; i < records_.size(); ++i) {
        const auto& r = records_[i];
        if (!std::isfinite(r.time)) fail_parse(fmt::format("records[{}].time", i), "non-finite time");
        if (!(r.lat >= -90.0 && r.lat <= 90.0))
            fail_parse(fmt::format("records[{}].lat", i), fmt::format("latitude {} outside [-90, 90]", r.lat));
        if (!(r.lon >= -180.0 && r.lon < 360.0))
            fail_parse(fmt::format("records[{}].lon", i), fmt::format("longitude {} outside [-180, 360)", r.lon));
    }
    std::stable_sort(records_.begin(), records_.end(),
                     [](const TrackRecord& a, const TrackRecord& b) { return a.time < b.time; });
}

AlongTrackSet AlongTrackSet::with_records(std::vector<TrackRecord> records) const {
    return AlongTrackSet(std::move(records), epoch_, var_, units_, time_units_);
}

Timestamp AlongTrackSet::timestamp_of(const TrackRecord& r) const {
    return add_days(epoch_, r.time * seconds_per_time_unit(time_units_) / kSecondsPerDay);
}

void DomainBox::check() const {
    if (lat && !(lat->first < lat->second)) fail("domain box: lat min must be < max");
    if (lon && !(lon->first < lon->second)) fail("domain box: lon min must be < max");
    if (time && !(time->first < time->second)) fail("domain box: time start must be < end");
}

}  // namespace obench
