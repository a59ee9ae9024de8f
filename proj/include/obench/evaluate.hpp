#pragma once

#include <string>

#include "obench/grid.hpp"
#include "obench/report.hpp"

namespace obench {

struct EvalLabels {
    std::string experiment = "OSSE";
    std::string algorithm = "study";
};

/// Puts `study` on the reference grid: canonical lat/lon, reference epoch,
/// trilinear regridding when the axes differ and Gauss-Seidel filling of gaps.
GriddedField align_to_reference(const GriddedField& ref, const GriddedField& study);

/// nRMSE score series plus the isotropic (λ_r) and space-time (λ_x, λ_t)
/// resolved scales of `study` against `ref`.
EvalReport evaluate_grid(const GriddedField& ref, const GriddedField& study, const EvalLabels& labels = {});

/// Sets λ_a from the along-track PSD score of `study` sampled at the track
/// points against the track values.
void evaluate_track(EvalReport& report, const GriddedField& study, const AlongTrackSet& track,
                    std::size_t segment_length = 256);

}  // namespace obench
