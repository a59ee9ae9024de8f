#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "obench/timeutil.hpp"

namespace obench {

namespace units {
inline constexpr const char* kDegreesNorth = "degrees_north";
inline constexpr const char* kDegreesEast = "degrees_east";
inline constexpr const char* kMeters = "m";
inline constexpr const char* kDays = "days";
inline constexpr const char* kHours = "hours";
inline constexpr const char* kSeconds = "seconds";
}  // namespace units

/// Seconds per one unit of a time axis ("days", "hours" or "seconds").
double seconds_per_time_unit(const std::string& unit);

struct CoordAxis {
    std::string name;  // "time", "lat" or "lon"
    std::vector<double> values;
    std::string units;

    std::size_t size() const { return values.size(); }
    double front() const { return values.front(); }
    double back() const { return values.back(); }
    bool in_meters() const { return units == units::kMeters; }
    bool ascending() const;
    bool strictly_monotonic() const;
    /// (last - first) / (n - 1); zero for single-point axes.
    double mean_spacing() const;

    friend bool operator==(const CoordAxis&, const CoordAxis&) = default;
};

CoordAxis make_time_axis(std::vector<double> values, std::string units = units::kDays);
CoordAxis make_lat_axis(std::vector<double> values, std::string units = units::kDegreesNorth);
CoordAxis make_lon_axis(std::vector<double> values, std::string units = units::kDegreesEast);
/// n points starting at `start` separated by `step`.
std::vector<double> linspace_step(double start, double step, std::size_t n);

using Attrs = std::map<std::string, std::string>;

struct Shape3 {
    std::size_t nt = 0, ny = 0, nx = 0;
    std::size_t volume() const { return nt * ny * nx; }
    std::size_t slice_size() const { return ny * nx; }
    friend bool operator==(const Shape3&, const Shape3&) = default;
};

/// 3-D (time, lat, lon) scalar field. Missing values are NaN.
///
/// Construction checks that the payload matches the axis lengths, that every
/// axis is strictly monotonic and that the payload holds no infinities.
class GriddedField {
public:
    GriddedField(std::string var, std::string units, CoordAxis time, CoordAxis lat, CoordAxis lon,
                 std::vector<double> data, Timestamp epoch, Attrs attrs = {});

    const std::string& var() const { return var_; }
    const std::string& units() const { return units_; }
    const CoordAxis& time() const { return time_; }
    const CoordAxis& lat() const { return lat_; }
    const CoordAxis& lon() const { return lon_; }
    const CoordAxis& axis(std::size_t dim) const;
    Timestamp epoch() const { return epoch_; }
    const Attrs& attrs() const { return attrs_; }
    std::optional<std::string> attr(const std::string& key) const;

    Shape3 shape() const { return {time_.size(), lat_.size(), lon_.size()}; }
    std::span<const double> data() const { return data_; }
    std::span<const double> slice(std::size_t t) const;
    double at(std::size_t t, std::size_t y, std::size_t x) const {
        return data_[(t * lat_.size() + y) * lon_.size() + x];
    }
    std::size_t index(std::size_t t, std::size_t y, std::size_t x) const {
        return (t * lat_.size() + y) * lon_.size() + x;
    }

    /// Same geometry and metadata, new payload.
    GriddedField with_data(std::vector<double> data) const;
    GriddedField with_data(std::vector<double> data, std::string var, std::string units) const;
    GriddedField with_attrs(Attrs attrs) const;

    /// Both lat and lon ascending, in degrees and in canonical ranges.
    bool has_canonical_latlon() const;

    friend bool operator==(const GriddedField& a, const GriddedField& b);

private:
    std::string var_;
    std::string units_;
    CoordAxis time_, lat_, lon_;
    std::vector<double> data_;
    Timestamp epoch_;
    Attrs attrs_;
};

/// Payload comparison treating NaN == NaN bitwise.
bool same_bits(std::span<const double> a, std::span<const double> b);

struct TrackRecord {
    double time = 0.0;  // in the set's time units since epoch
    double lat = 0.0;
    double lon = 0.0;
    double value = 0.0;
    friend bool operator==(const TrackRecord&, const TrackRecord&) = default;
};

/// Time-ordered sparse observations. Records are stably sorted on construction.
class AlongTrackSet {
public:
    AlongTrackSet(std::vector<TrackRecord> records, Timestamp epoch, std::string var = "ssh",
                  std::string units = "m", std::string time_units = units::kDays);

    const std::vector<TrackRecord>& records() const { return records_; }
    std::size_t size() const { return records_.size(); }
    bool empty() const { return records_.empty(); }
    Timestamp epoch() const { return epoch_; }
    const std::string& var() const { return var_; }
    const std::string& units() const { return units_; }
    const std::string& time_units() const { return time_units_; }

    AlongTrackSet with_records(std::vector<TrackRecord> records) const;
    Timestamp timestamp_of(const TrackRecord& r) const;

    friend bool operator==(const AlongTrackSet&, const AlongTrackSet&) = default;

private:
    std::vector<TrackRecord> records_;
    Timestamp epoch_;
    std::string var_;
    std::string units_;
    std::string time_units_;
};

struct DomainBox {
    std::optional<std::pair<double, double>> lat;
    std::optional<std::pair<double, double>> lon;
    std::optional<std::pair<Timestamp, Timestamp>> time;

    /// Throws unless min < max in every present dimension.
    void check() const;
};

}  // namespace obench
