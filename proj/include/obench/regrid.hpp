#pragma once

#include <cstddef>
#include <vector>

#include "obench/grid.hpp"

namespace obench {

struct TargetAxes {
    CoordAxis time, lat, lon;
    Timestamp epoch;

    static TargetAxes like(const GriddedField& field) {
        return {field.time(), field.lat(), field.lon(), field.epoch()};
    }
};

struct RegridResult {
    GriddedField field;
    std::size_t dropped = 0;
};

/// Bins records into the nearest cell whose half-spacing box contains them; cell value is the mean.
RegridResult regrid_to_grid(const AlongTrackSet& track, const TargetAxes& target);

/// Trilinear interpolation of a grid onto a set of nodes, then bins onto those nodes.
GriddedField regrid_grid_to_grid(const GriddedField& field, const TargetAxes& target);

struct QueryPoint {
    double time = 0.0;  // days since the field epoch
    double lat = 0.0;
    double lon = 0.0;
};

/// Trilinear interpolation at one point; NaN corners are skipped with weights renormalized.
/// Returns NaN outside the axis hull or when every contributing corner is NaN.
double interpolate_at(const GriddedField& field, const QueryPoint& q);

/// Interpolates the field at each record of `coords`; record values are replaced.
AlongTrackSet regrid_to_track(const GriddedField& field, const AlongTrackSet& coords);

struct FillOptions {
    double tol = 1e-6;
    std::size_t max_iters = 10000;
};

struct FillStats {
    std::vector<std::size_t> iterations;  // per time slice
};

/// Gauss-Seidel relaxation of the Laplace equation over NaN cells of each slice.
GriddedField fill_nans_gauss_seidel(const GriddedField& field, const FillOptions& opts = {},
                                    FillStats* stats = nullptr);

}  // namespace obench
