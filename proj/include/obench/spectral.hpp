#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "obench/grid.hpp"

namespace obench {

enum class Geometry { Isotropic, LonTime, LonLat, AlongTrack };

std::string to_string(Geometry g);
Geometry parse_geometry(const std::string& name);

enum class Detrend { None, Mean, Linear };

Detrend parse_detrend(const std::string& name);

/// Signal conditioning applied before every transform.
struct SpectralOptions {
    bool window = true;  // Hann with 1/mean(w^2) energy correction
    /// Mean removal for isotropic and along-track spectra, per-axis linear
    /// detrending for the 2-D lon-time and lon-lat spectra.
    std::optional<Detrend> detrend;
    std::size_t segment_length = 256;  // along-track samples per segment
};

/// Power spectral density. 1-D spectra hold psd[i] over axis1; 2-D spectra hold
/// psd[j * axis1.size() + i] with j over axis2.
///
/// Spatial wavenumbers are in cycles per meter, frequencies in cycles per unit of
/// the input time axis. Normalization: sum(psd) * dk (* df) equals the variance
/// of the conditioned signal.
struct SpectrumResult {
    Geometry geometry = Geometry::Isotropic;
    std::vector<double> axis1;
    std::vector<double> axis2;
    std::vector<double> psd;
    std::string axis1_name;
    std::string axis2_name;
    double d1 = 0.0;  // bin width along axis1
    double d2 = 0.0;  // bin width along axis2 (2-D only)

    bool two_d() const { return !axis2.empty(); }
    double at(std::size_t j, std::size_t i) const { return psd[j * axis1.size() + i]; }
    /// Integral of the spectrum (sum of psd times the bin widths).
    double integral() const;
    /// CSV export: header "k,psd" or "k,f,psd" (axis names substituted).
    std::string to_csv() const;
};

struct PsdScoreCurve {
    Geometry geometry = Geometry::Isotropic;
    std::vector<double> axis1;
    std::vector<double> axis2;
    std::vector<double> score;  // NaN where truth power is negligible
    std::string axis1_name;
    std::string axis2_name;

    bool two_d() const { return !axis2.empty(); }
    double at(std::size_t j, std::size_t i) const { return score[j * axis1.size() + i]; }
    std::string to_csv() const;
};

/// Radially binned spatial spectrum averaged over time. Axes must be in meters.
SpectrumResult psd_isotropic(const GriddedField& field, const SpectralOptions& opts = {});
/// Zonal wavenumber / frequency spectrum averaged over latitude rows.
SpectrumResult psd_spacetime(const GriddedField& field, const SpectralOptions& opts = {});
/// Zonal / meridional wavenumber spectrum averaged over time.
SpectrumResult psd_latlon(const GriddedField& field, const SpectralOptions& opts = {});

SpectrumResult psd(const GriddedField& field, Geometry geometry, const SpectralOptions& opts = {});

/// score = 1 - err/truth per bin; NaN where truth < 1e-15 * max(truth).
PsdScoreCurve score_from_spectra(const SpectrumResult& truth, const SpectrumResult& error);

/// Spectra of truth and of (truth - pred) under identical conditioning.
PsdScoreCurve psd_score(const GriddedField& truth, const GriddedField& pred, Geometry geometry,
                        const SpectralOptions& opts = {});

struct AlongTrackPsd {
    SpectrumResult truth;
    SpectrumResult error;
    PsdScoreCurve score;
    std::size_t segments = 0;
    double spacing_m = 0.0;  // median along-track spacing
};

/// Segment-averaged along-track spectra of truth and error. Both tracks must
/// share sample points; records where either value is NaN are skipped.
AlongTrackPsd psd_alongtrack(const AlongTrackSet& truth, const AlongTrackSet& pred, const SpectralOptions& opts = {});

/// Contiguous runs (index ranges [first, last)) where every step is < 2x the median step.
std::vector<std::pair<std::size_t, std::size_t>> contiguous_runs(const std::vector<double>& steps);

/// Great-circle distance in meters.
double haversine_m(double lat1, double lon1, double lat2, double lon2);

inline constexpr double kResolvedThreshold = 0.5;

enum class ScaleStatus { Resolved, GridScale, Unresolved };

struct ResolvedScale {
    ScaleStatus status = ScaleStatus::Unresolved;
    double wavelength = 0.0;  // 1 / axis units (m or time units)
};

/// First downward crossing of the threshold scanning from long to short
/// wavelengths, interpolated linearly in (axis, score).
ResolvedScale find_resolved_scale(const std::vector<double>& axis, const std::vector<double>& score,
                                  double threshold = kResolvedThreshold);

/// 1-D curves only; throws "unresolved at all scales" when the score never reaches 0.5.
ResolvedScale resolved_scale(const PsdScoreCurve& curve);

/// Marginal averages of a 2-D score plane: score vs axis1 (averaged over axis2) and vice versa.
std::pair<std::vector<double>, std::vector<double>> marginal_scores(const PsdScoreCurve& curve);

struct SpaceTimeScales {
    ResolvedScale space;  // along axis1
    ResolvedScale time;   // along axis2
};
SpaceTimeScales resolved_scales_2d(const PsdScoreCurve& curve);

}  // namespace obench
