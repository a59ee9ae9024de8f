#pragma once

#include <cstdint>
#include <vector>

#include "obench/grid.hpp"

namespace obench {

inline constexpr double kEarthRadius = 6371000.0;  // meters

/// Wraps longitudes into [-180, 180) and sorts lat/lon ascending, permuting the payload.
GriddedField validate_latlon(const GriddedField& field);
AlongTrackSet validate_latlon(const AlongTrackSet& track);

/// Wraps one longitude from [-180, 360) into [-180, 180).
double wrap_longitude(double lon);

/// Re-expresses the time axis as days since `epoch`.
GriddedField validate_time(const GriddedField& field, Timestamp epoch);
AlongTrackSet validate_time(const AlongTrackSet& track, Timestamp epoch);

/// Strictly increasing day offsets of `stamps` relative to `epoch`.
CoordAxis time_axis_from_timestamps(const std::vector<Timestamp>& stamps, Timestamp epoch);

/// Indices [first, last] of an ascending axis inside the closed interval [lo, hi].
std::pair<std::size_t, std::size_t> select_range(const CoordAxis& axis, double lo, double hi);

GriddedField sel_domain(const GriddedField& field, const DomainBox& box);
AlongTrackSet sel_domain(const AlongTrackSet& track, const DomainBox& box);

/// Fisher-Yates over record indices, keeps the first `num_samples`, restores time order.
AlongTrackSet subset_track(const AlongTrackSet& track, std::size_t num_samples, std::uint64_t seed);

/// Converts lat/lon degree axes to meters on a tangent plane at the mean latitude.
/// Records "lat_mean_deg", "lat_min_deg" and "lon_min_deg" in the attributes.
GriddedField latlon_deg2m(const GriddedField& field);

/// Divides the time axis by `freq` expressed in `unit` (days, hours or seconds).
GriddedField time_rescale(const GriddedField& field, double freq, const std::string& unit);
AlongTrackSet time_rescale(const AlongTrackSet& track, double freq, const std::string& unit);

}  // namespace obench
