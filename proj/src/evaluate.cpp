#include "obench/evaluate.hpp"

#include <algorithm>
#include <cmath>

#include "obench/coords.hpp"
#include "obench/error.hpp"
#include "obench/metrics.hpp"
#include "obench/regrid.hpp"
#include "obench/spectral.hpp"

namespace obench {

namespace {

bool same_axes(const GriddedField& a, const GriddedField& b) {
    return a.time().values == b.time().values && a.lat().values == b.lat().values &&
           a.lon().values == b.lon().values;
}

}  // namespace

GriddedField align_to_reference(const GriddedField& ref, const GriddedField& study) {
    const GriddedField r = validate_time(validate_latlon(ref), ref.epoch());
    GriddedField s = validate_time(validate_latlon(study), ref.epoch());
    if (!same_axes(r, s)) s = regrid_grid_to_grid(s, TargetAxes::like(r));
    const auto d = s.data();
    if (std::any_of(d.begin(), d.end(), [](double v) { return std::isnan(v); })) s = fill_nans_gauss_seidel(s);
    return s;
}

EvalReport evaluate_grid(const GriddedField& ref, const GriddedField& study, const EvalLabels& labels) {
    const GriddedField r = validate_time(validate_latlon(ref), ref.epoch());
    const GriddedField s = align_to_reference(r, study);

    EvalReport out;
    out.experiment = labels.experiment;
    out.algorithm = labels.algorithm;
    const auto series = nrmse_score_series(r, s);
    out.nrmse_mean = series.mean;
    out.nrmse_std = series.std;

    const GriddedField rm = latlon_deg2m(r);
    const GriddedField sm = latlon_deg2m(s);
    const auto iso = psd_score(rm, sm, Geometry::Isotropic);
    out.lambda_r_km = report_scale(find_resolved_scale(iso.axis1, iso.score), true);
    if (r.time().size() >= 2) {
        const auto st = resolved_scales_2d(psd_score(rm, sm, Geometry::LonTime));
        out.lambda_x_km = report_scale(st.space, true);
        out.lambda_t_days = report_scale(st.time, false);
    }
    return out;
}

void evaluate_track(EvalReport& report, const GriddedField& study, const AlongTrackSet& track,
                    std::size_t segment_length) {
    const GriddedField s = validate_latlon(study);
    const AlongTrackSet t = validate_time(validate_latlon(track), s.epoch());
    const AlongTrackSet pred = regrid_to_track(s, t);
    SpectralOptions opts;
    opts.segment_length = segment_length;
    const auto at = psd_alongtrack(t, pred, opts);
    report.lambda_a_km = report_scale(find_resolved_scale(at.score.axis1, at.score.score), true);
}

}  // namespace obench
