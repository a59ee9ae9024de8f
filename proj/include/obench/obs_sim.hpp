#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "obench/grid.hpp"

namespace obench {

enum class TrackKind { Nadir, Swath };

struct SwathGeometry {
    double half_width = 0.0;         // m
    double across_spacing = 2000.0;  // m
    double nadir_gap = 0.0;          // m, full width of the empty band around nadir
};

/// One altimeter: ground-track heading and its place in the repeat pattern.
struct Satellite {
    double inclination = 66.0;  // degrees from east, 0 < i < 180
    double phase_days = 0.0;    // shift of the visit schedule
    double offset_m = 0.0;      // across-track shift of the ground-track family
};

struct TrackPattern {
    TrackKind kind = TrackKind::Nadir;
    std::vector<Satellite> satellites{Satellite{}};
    double along_track_spacing = 6000.0;  // m
    double repeat_cycle = 10.0;           // days
    double ground_speed = 6600.0;         // m s^-1
    double track_spacing = 315000.0;      // m between neighbouring ground tracks of one direction
    SwathGeometry swath;

    void check() const;

    /// "nadir-4sat" or "swot-like".
    static TrackPattern preset(const std::string& name);
    static TrackPattern from_json(const std::string& text);
    std::string to_json() const;
};

struct TrackPoint {
    double time = 0.0;  // days since epoch
    double lat = 0.0;
    double lon = 0.0;
};

/// One straight crossing of the box on the local tangent plane.
struct Pass {
    std::size_t satellite = 0;
    bool ascending = true;
    long line = 0;        // ground-track index within its family
    double start = 0.0;   // days since epoch at box entry
    double dir_x = 0.0, dir_y = 0.0;  // unit heading (east, north)
    double offset = 0.0;  // signed distance of the line from the box center along its normal, m
    double s_in = 0.0, s_out = 0.0;   // clipped line parameter range, m
};

struct TrackPeriod {
    double start = 0.0;  // days since epoch, inclusive
    double end = 0.0;    // exclusive
};

/// Tangent-plane frame centered on a lat/lon box.
struct TangentPlane {
    double lat0 = 0.0, lon0 = 0.0;
    double half_x = 0.0, half_y = 0.0;  // box half extents, m
    explicit TangentPlane(const DomainBox& box);
    std::pair<double, double> to_xy(double lat, double lon) const;
    std::pair<double, double> to_latlon(double x, double y) const;
};

std::vector<Pass> plan_passes(const TrackPattern& pattern, const DomainBox& box, const TrackPeriod& period);

/// Sample points of every pass, time ordered. Swath patterns add across-track
/// points; every point lies inside the closed box.
std::vector<TrackPoint> generate_tracks(const TrackPattern& pattern, const DomainBox& box, const TrackPeriod& period);

enum class NoiseKind { None, Gaussian };

struct NoiseSpec {
    NoiseKind kind = NoiseKind::None;
    double std = 0.0;  // m
    std::uint64_t seed = 0;
};

struct SampleResult {
    AlongTrackSet track;
    std::size_t dropped = 0;  // points whose interpolated value was NaN
};

/// Interpolates the field at each point and adds noise; NaN samples are dropped.
SampleResult sample_field(const GriddedField& field, const std::vector<TrackPoint>& points, const NoiseSpec& noise);

struct OsseSplit {
    std::optional<GriddedField> train;
    GriddedField eval;
    std::size_t eval_first = 0, eval_last = 0;  // inclusive time indices
};

/// Eval view = time steps inside [eval_start, eval_end]; train = the remaining
/// steps at least `spinup_days` after the first time step.
OsseSplit osse_split(const GriddedField& field, Timestamp eval_start, Timestamp eval_end, double spinup_days = 0.0);

/// Synthetic truth: Gaussian eddies advecting over a regular lat/lon grid.
struct EddyFieldSpec {
    std::size_t nt = 30, ny = 64, nx = 64;
    double spacing_km = 5.5;
    double dt_days = 1.0;
    double lat0 = 33.0, lon0 = -65.0;  // south-west corner
    std::size_t eddies = 5;
    std::uint64_t seed = 0;
    Timestamp epoch = parse_iso("2012-10-01");
};

GriddedField make_eddy_field(const EddyFieldSpec& spec);

}  // namespace obench
