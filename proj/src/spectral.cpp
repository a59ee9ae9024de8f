#include "obench/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "obench/coords.hpp"
#include "obench/error.hpp"
#include "obench/fft.hpp"
#include "obench/parallel.hpp"

namespace obench {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<double> hann(std::size_t n) {
    std::vector<double> w(n, 1.0);
    if (n < 2) return w;
    for (std::size_t i = 0; i < n; ++i)
        w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n));
    return w;
}

void remove_linear_trend(double* v, std::size_t n, std::size_t stride) {
    if (n == 0) return;
    const double ibar = 0.5 * static_cast<double>(n - 1);
    double vbar = 0.0;
    for (std::size_t i = 0; i < n; ++i) vbar += v[i * stride];
    vbar /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double di = static_cast<double>(i) - ibar;
        sxy += di * (v[i * stride] - vbar);
        sxx += di * di;
    }
    const double slope = sxx > 0.0 ? sxy / sxx : 0.0;
    for (std::size_t i = 0; i < n; ++i) v[i * stride] -= vbar + slope * (static_cast<double>(i) - ibar);
}

void condition_plane(std::vector<double>& p, std::size_t rows, std::size_t cols, Detrend detrend) {
    if (detrend == Detrend::Mean) {
        double m = 0.0;
        for (double v : p) m += v;
        m /= static_cast<double>(p.size());
        for (double& v : p) v -= m;
    } else if (detrend == Detrend::Linear) {
        for (std::size_t c = 0; c < cols; ++c) remove_linear_trend(p.data() + c, rows, cols);
        for (std::size_t r = 0; r < rows; ++r) remove_linear_trend(p.data() + r * cols, cols, 1);
    }
}

/// Two-sided 2-D PSD of a conditioned plane, normalized so sum * dr * dc equals its variance.
std::vector<double> plane_power(std::vector<double> p, std::size_t rows, std::size_t cols, double step_r,
                                double step_c, bool window) {
    double correction = 1.0;
    if (window) {
        const auto wr = hann(rows), wc = hann(cols);
        double w2 = 0.0;
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t c = 0; c < cols; ++c) {
                const double w = wr[r] * wc[c];
                p[r * cols + c] *= w;
                w2 += w * w;
            }
        correction = static_cast<double>(rows * cols) / w2;
    }
    const auto F = dft_2d(p, rows, cols);
    const double n = static_cast<double>(rows * cols);
    const double dr = 1.0 / (static_cast<double>(rows) * step_r);
    const double dc = 1.0 / (static_cast<double>(cols) * step_c);
    const double scale = correction / (n * n * dr * dc);
    std::vector<double> out(F.size());
    for (std::size_t i = 0; i < F.size(); ++i) out[i] = std::norm(F[i]) * scale;
    return out;
}

/// Signed DFT frequency of bin i out of n, in cycles per unit of `step`.
double signed_freq(std::size_t i, std::size_t n, double step) {
    const auto si = static_cast<double>(i);
    const auto sn = static_cast<double>(n);
    return (2 * i < n ? si : si - sn) / (sn * step);
}

std::size_t fold_index(std::size_t i, std::size_t n) { return std::min(i, n - i); }

std::vector<double> one_sided_axis(std::size_t n, double step) {
    std::vector<double> a(n / 2 + 1);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = static_cast<double>(i) / (static_cast<double>(n) * step);
    return a;
}

/// Folds a two-sided rows x cols spectrum onto non-negative frequencies, output [rows/2+1][cols/2+1].
std::vector<double> fold_plane(const std::vector<double>& p, std::size_t rows, std::size_t cols) {
    const std::size_t fr = rows / 2 + 1, fc = cols / 2 + 1;
    std::vector<double> out(fr * fc, 0.0);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) out[fold_index(r, rows) * fc + fold_index(c, cols)] += p[r * cols + c];
    return out;
}

std::vector<double> average(const std::vector<std::vector<double>>& parts) {
    std::vector<double> out(parts.front().size(), 0.0);
    for (const auto& p : parts)
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += p[i];
    for (double& v : out) v /= static_cast<double>(parts.size());
    return out;
}

void require_spectral_input(const GriddedField& field) {
    if (!field.lat().in_meters() || !field.lon().in_meters())
        fail("spectra need lat/lon axes in meters (apply latlon_deg2m first)");
    for (double v : field.data()) {
        if (std::isnan(v)) fail("spectra need NaN-free fields (apply fill_nans first)");
    }
}

double axis_step(const CoordAxis& a) {
    if (a.size() < 2) fail(fmt::format("{} axis needs at least 2 points for a spectrum", a.name));
    return a.mean_spacing();
}

}  // namespace

std::string to_string(Geometry g) {
    switch (g) {
        case Geometry::Isotropic: return "isotropic";
        case Geometry::LonTime: return "lon_time";
        case Geometry::LonLat: return "lon_lat";
        case Geometry::AlongTrack: return "alongtrack";
    }
    return "?";
}

Geometry parse_geometry(const std::string& name) {
    if (name == "isotropic") return Geometry::Isotropic;
    if (name == "lon_time" || name == "spacetime") return Geometry::LonTime;
    if (name == "lon_lat" || name == "latlon") return Geometry::LonLat;
    if (name == "alongtrack") return Geometry::AlongTrack;
    fail(fmt::format("unknown spectrum geometry '{}'", name));
}

Detrend parse_detrend(const std::string& name) {
    if (name == "none") return Detrend::None;
    if (name == "mean") return Detrend::Mean;
    if (name == "linear") return Detrend::Linear;
    fail(fmt::format("unknown detrend mode '{}' (expected none, mean or linear)", name));
}

double SpectrumResult::integral() const {
    double sum = 0.0;
    for (double v : psd) sum += v;
    return two_d() ? sum * d1 * d2 : sum * d1;
}

std::string SpectrumResult::to_csv() const {
    std::string out = two_d() ? fmt::format("{},{},psd\n", axis1_name, axis2_name) : fmt::format("{},psd\n", axis1_name);
    if (two_d()) {
        for (std::size_t j = 0; j < axis2.size(); ++j)
            for (std::size_t i = 0; i < axis1.size(); ++i)
                out += fmt::format("{:.17g},{:.17g},{:.17g}\n", axis1[i], axis2[j], at(j, i));
    } else {
        for (std::size_t i = 0; i < axis1.size(); ++i) out += fmt::format("{:.17g},{:.17g}\n", axis1[i], psd[i]);
    }
    return out;
}

std::string PsdScoreCurve::to_csv() const {
    std::string out =
        two_d() ? fmt::format("{},{},score\n", axis1_name, axis2_name) : fmt::format("{},score\n", axis1_name);
    if (two_d()) {
        for (std::size_t j = 0; j < axis2.size(); ++j)
            for (std::size_t i = 0; i < axis1.size(); ++i)
                out += fmt::format("{:.17g},{:.17g},{:.17g}\n", axis1[i], axis2[j], at(j, i));
    } else {
        for (std::size_t i = 0; i < axis1.size(); ++i) out += fmt::format("{:.17g},{:.17g}\n", axis1[i], score[i]);
    }
    return out;
}

SpectrumResult psd_isotropic(const GriddedField& field, const SpectralOptions& opts) {
    require_spectral_input(field);
    const auto s = field.shape();
    const double dy = axis_step(field.lat()), dx = axis_step(field.lon());
    const std::size_t nbins = std::min(s.ny, s.nx) / 2;
    const double k_nyq = std::min(0.5 / dx, 0.5 / dy);
    const double dk = k_nyq / static_cast<double>(nbins);
    const double dkx = 1.0 / (static_cast<double>(s.nx) * dx), dky = 1.0 / (static_cast<double>(s.ny) * dy);
    const Detrend detrend = opts.detrend.value_or(Detrend::Mean);

    std::vector<std::vector<double>> per_slice(s.nt);
    parallel_for(s.nt, [&](std::size_t t) {
        auto sl = field.slice(t);
        std::vector<double> plane(sl.begin(), sl.end());
        condition_plane(plane, s.ny, s.nx, detrend);
        const auto p2 = plane_power(std::move(plane), s.ny, s.nx, dy, dx, opts.window);
        std::vector<double> radial(nbins, 0.0);
        for (std::size_t r = 0; r < s.ny; ++r) {
            const double ky = signed_freq(r, s.ny, dy);
            for (std::size_t c = 0; c < s.nx; ++c) {
                const double kx = signed_freq(c, s.nx, dx);
                const auto b = static_cast<std::size_t>(std::floor(std::hypot(kx, ky) / dk + 0.5));
                if (b >= 1 && b <= nbins) radial[b - 1] += p2[r * s.nx + c] * dkx * dky / dk;
            }
        }
        per_slice[t] = std::move(radial);
    });

    SpectrumResult out;
    out.geometry = Geometry::Isotropic;
    out.axis1_name = "k";
    out.d1 = dk;
    out.axis1.resize(nbins);
    for (std::size_t b = 0; b < nbins; ++b) out.axis1[b] = static_cast<double>(b + 1) * dk;
    out.psd = average(per_slice);
    return out;
}

SpectrumResult psd_spacetime(const GriddedField& field, const SpectralOptions& opts) {
    require_spectral_input(field);
    const auto s = field.shape();
    const double dt = axis_step(field.time()), dx = axis_step(field.lon());
    const Detrend detrend = opts.detrend.value_or(Detrend::Linear);

    std::vector<std::vector<double>> per_row(s.ny);
    parallel_for(s.ny, [&](std::size_t y) {
        std::vector<double> plane(s.nt * s.nx);
        for (std::size_t t = 0; t < s.nt; ++t)
            for (std::size_t x = 0; x < s.nx; ++x) plane[t * s.nx + x] = field.at(t, y, x);
        condition_plane(plane, s.nt, s.nx, detrend);
        per_row[y] = fold_plane(plane_power(std::move(plane), s.nt, s.nx, dt, dx, opts.window), s.nt, s.nx);
    });

    SpectrumResult out;
    out.geometry = Geometry::LonTime;
    out.axis1 = one_sided_axis(s.nx, dx);
    out.axis2 = one_sided_axis(s.nt, dt);
    out.axis1_name = "k";
    out.axis2_name = "f";
    out.d1 = 1.0 / (static_cast<double>(s.nx) * dx);
    out.d2 = 1.0 / (static_cast<double>(s.nt) * dt);
    out.psd = average(per_row);
    return out;
}

SpectrumResult psd_latlon(const GriddedField& field, const SpectralOptions& opts) {
    require_spectral_input(field);
    const auto s = field.shape();
    const double dy = axis_step(field.lat()), dx = axis_step(field.lon());
    const Detrend detrend = opts.detrend.value_or(Detrend::Linear);

    std::vector<std::vector<double>> per_slice(s.nt);
    parallel_for(s.nt, [&](std::size_t t) {
        auto sl = field.slice(t);
        std::vector<double> plane(sl.begin(), sl.end());
        condition_plane(plane, s.ny, s.nx, detrend);
        per_slice[t] = fold_plane(plane_power(std::move(plane), s.ny, s.nx, dy, dx, opts.window), s.ny, s.nx);
    });

    SpectrumResult out;
    out.geometry = Geometry::LonLat;
    out.axis1 = one_sided_axis(s.nx, dx);
    out.axis2 = one_sided_axis(s.ny, dy);
    out.axis1_name = "kx";
    out.axis2_name = "ky";
    out.d1 = 1.0 / (static_cast<double>(s.nx) * dx);
    out.d2 = 1.0 / (static_cast<double>(s.ny) * dy);
    out.psd = average(per_slice);
    return out;
}

SpectrumResult psd(const GriddedField& field, Geometry geometry, const SpectralOptions& opts) {
    switch (geometry) {
        case Geometry::Isotropic: return psd_isotropic(field, opts);
        case Geometry::LonTime: return psd_spacetime(field, opts);
        case Geometry::LonLat: return psd_latlon(field, opts);
        case Geometry::AlongTrack: break;
    }
    fail("along-track spectra take tracks, not grids");
}

PsdScoreCurve score_from_spectra(const SpectrumResult& truth, const SpectrumResult& error) {
    if (truth.geometry != error.geometry || truth.axis1 != error.axis1 || truth.axis2 != error.axis2)
        fail("PSD score needs spectra with identical geometry and axes");
    PsdScoreCurve out;
    out.geometry = truth.geometry;
    out.axis1 = truth.axis1;
    out.axis2 = truth.axis2;
    out.axis1_name = truth.axis1_name;
    out.axis2_name = truth.axis2_name;
    const double peak = truth.psd.empty() ? 0.0 : *std::max_element(truth.psd.begin(), truth.psd.end());
    out.score.resize(truth.psd.size());
    for (std::size_t i = 0; i < truth.psd.size(); ++i) {
        const double t = truth.psd[i];
        out.score[i] = (peak > 0.0 && t >= 1e-15 * peak) ? 1.0 - error.psd[i] / t : kNaN;
    }
    return out;
}

PsdScoreCurve psd_score(const GriddedField& truth, const GriddedField& pred, Geometry geometry,
                        const SpectralOptions& opts) {
    if (!(truth.shape() == pred.shape())) fail("PSD score: truth and prediction grids differ in shape");
    std::vector<double> err(truth.data().size());
    for (std::size_t i = 0; i < err.size(); ++i) err[i] = truth.data()[i] - pred.data()[i];
    const auto t = psd(truth, geometry, opts);
    const auto e = psd(truth.with_data(std::move(err)), geometry, opts);
    return score_from_spectra(t, e);
}

double haversine_m(double lat1, double lon1, double lat2, double lon2) {
    const double deg = std::numbers::pi / 180.0;
    const double dlat = (lat2 - lat1) * deg, dlon = (lon2 - lon1) * deg;
    const double a = std::sin(dlat / 2) * std::sin(dlat / 2) +
                     std::cos(lat1 * deg) * std::cos(lat2 * deg) * std::sin(dlon / 2) * std::sin(dlon / 2);
    return 2.0 * kEarthRadius * std::asin(std::min(1.0, std::sqrt(a)));
}

namespace {

double median(std::vector<double> v) {
    if (v.empty()) fail("median of an empty sequence");
    const auto mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    double m = v[mid];
    if (v.size() % 2 == 0) {
        m = 0.5 * (m + *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid)));
    }
    return m;
}

}  // namespace

std::vector<std::pair<std::size_t, std::size_t>> contiguous_runs(const std::vector<double>& steps) {
    std::vector<std::pair<std::size_t, std::size_t>> runs;
    const std::size_t n = steps.size() + 1;
    if (steps.empty()) {
        runs.emplace_back(0, 1);
        return runs;
    }
    const double limit = 2.0 * median(steps);
    std::size_t start = 0;
    for (std::size_t i = 0; i < steps.size(); ++i) {
        if (!(steps[i] < limit)) {
            runs.emplace_back(start, i + 1);
            start = i + 1;
        }
    }
    runs.emplace_back(start, n);
    return runs;
}

AlongTrackPsd psd_alongtrack(const AlongTrackSet& truth, const AlongTrackSet& pred, const SpectralOptions& opts) {
    if (truth.size() != pred.size()) fail("along-track PSD: tracks differ in length");
    const std::size_t seg = opts.segment_length;
    if (seg < 4) fail("along-track PSD: segment length must be at least 4");

    std::vector<TrackRecord> t_rec, p_rec;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const auto& a = truth.records()[i];
        const auto& b = pred.records()[i];
        if (a.time != b.time || a.lat != b.lat || a.lon != b.lon)
            fail(fmt::format("along-track PSD: tracks differ in sample point {}", i));
        if (std::isnan(a.value) || std::isnan(b.value)) continue;
        t_rec.push_back(a);
        p_rec.push_back(b);
    }
    if (t_rec.size() < 2) fail("along-track PSD: fewer than 2 usable segments");

    std::vector<double> steps(t_rec.size() - 1);
    for (std::size_t i = 0; i + 1 < t_rec.size(); ++i)
        steps[i] = haversine_m(t_rec[i].lat, t_rec[i].lon, t_rec[i + 1].lat, t_rec[i + 1].lon);
    const double spacing = median(steps);
    if (!(spacing > 0.0)) fail("along-track PSD: median sample spacing is zero");

    std::vector<std::size_t> starts;
    for (const auto& [first, last] : contiguous_runs(steps))
        for (std::size_t s = first; s + seg <= last; s += seg) starts.push_back(s);
    if (starts.size() < 2)
        fail(fmt::format("along-track PSD: fewer than 2 usable segments ({} found)", starts.size()));

    const auto w = opts.window ? hann(seg) : std::vector<double>(seg, 1.0);
    double w2 = 0.0;
    for (double v : w) w2 += v * v;
    const double correction = static_cast<double>(seg) / w2;
    const double dk = 1.0 / (static_cast<double>(seg) * spacing);
    const std::size_t nk = seg / 2;
    const Detrend detrend = opts.detrend.value_or(Detrend::Mean);

    auto segment_power = [&](std::vector<double> v) {
        if (detrend == Detrend::Mean) {
            double m = 0.0;
            for (double x : v) m += x;
            m /= static_cast<double>(v.size());
            for (double& x : v) x -= m;
        } else if (detrend == Detrend::Linear) {
            remove_linear_trend(v.data(), v.size(), 1);
        }
        for (std::size_t i = 0; i < v.size(); ++i) v[i] *= w[i];
        const auto F = dft_1d(v);
        const double scale = correction / (static_cast<double>(seg * seg) * dk);
        std::vector<double> one(nk, 0.0);
        for (std::size_t i = 1; i < seg; ++i) {
            const auto f = fold_index(i, seg);
            one[f - 1] += std::norm(F[i]) * scale;
        }
        return one;
    };

    std::vector<std::vector<double>> t_parts(starts.size()), e_parts(starts.size());
    parallel_for(starts.size(), [&](std::size_t s) {
        std::vector<double> tv(seg), ev(seg);
        for (std::size_t i = 0; i < seg; ++i) {
            tv[i] = t_rec[starts[s] + i].value;
            ev[i] = tv[i] - p_rec[starts[s] + i].value;
        }
        t_parts[s] = segment_power(std::move(tv));
        e_parts[s] = segment_power(std::move(ev));
    });

    AlongTrackPsd out;
    out.segments = starts.size();
    out.spacing_m = spacing;
    for (auto* spec : {&out.truth, &out.error}) {
        spec->geometry = Geometry::AlongTrack;
        spec->axis1_name = "k";
        spec->d1 = dk;
        spec->axis1.resize(nk);
        for (std::size_t i = 0; i < nk; ++i) spec->axis1[i] = static_cast<double>(i + 1) * dk;
    }
    out.truth.psd = average(t_parts);
    out.error.psd = average(e_parts);
    out.score = score_from_spectra(out.truth, out.error);
    return out;
}

ResolvedScale find_resolved_scale(const std::vector<double>& axis, const std::vector<double>& score,
                                  double threshold) {
    if (axis.size() != score.size()) fail("resolved scale: axis and score differ in length");
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < axis.size(); ++i) {
        if (axis[i] > 0.0 && std::isfinite(score[i])) pts.emplace_back(axis[i], score[i]);
    }
    ResolvedScale out;
    if (pts.empty()) return out;
    bool reached = false;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (pts[i].second < threshold) continue;
        reached = true;
        if (i + 1 < pts.size() && pts[i + 1].second < threshold) {
            const auto [k0, s0] = pts[i];
            const auto [k1, s1] = pts[i + 1];
            const double k = k0 + (threshold - s0) * (k1 - k0) / (s1 - s0);
            out.status = ScaleStatus::Resolved;
            out.wavelength = 1.0 / k;
            return out;
        }
    }
    if (reached) {
        out.status = ScaleStatus::GridScale;
        out.wavelength = 1.0 / pts.back().first;
    }
    return out;
}

ResolvedScale resolved_scale(const PsdScoreCurve& curve) {
    if (curve.two_d()) fail("resolved_scale: 2-D score planes need resolved_scales_2d");
    auto r = find_resolved_scale(curve.axis1, curve.score);
    if (r.status == ScaleStatus::Unresolved) fail("unresolved at all scales: PSD score never reaches 0.5");
    return r;
}

std::pair<std::vector<double>, std::vector<double>> marginal_scores(const PsdScoreCurve& curve) {
    if (!curve.two_d()) fail("marginal scores need a 2-D score plane");
    const std::size_t n1 = curve.axis1.size(), n2 = curve.axis2.size();
    std::vector<double> s1(n1, kNaN), s2(n2, kNaN);
    for (std::size_t i = 0; i < n1; ++i) {
        double sum = 0.0;
        std::size_t n = 0;
        for (std::size_t j = 0; j < n2; ++j) {
            if (std::isfinite(curve.at(j, i))) {
                sum += curve.at(j, i);
                ++n;
            }
        }
        if (n > 0) s1[i] = sum / static_cast<double>(n);
    }
    for (std::size_t j = 0; j < n2; ++j) {
        double sum = 0.0;
        std::size_t n = 0;
        for (std::size_t i = 0; i < n1; ++i) {
            if (std::isfinite(curve.at(j, i))) {
                sum += curve.at(j, i);
                ++n;
            }
        }
        if (n > 0) s2[j] = sum / static_cast<double>(n);
    }
    return {std::move(s1), std::move(s2)};
}

SpaceTimeScales resolved_scales_2d(const PsdScoreCurve& curve) {
    const auto [s1, s2] = marginal_scores(curve);
    return {find_resolved_scale(curve.axis1, s1), find_resolved_scale(curve.axis2, s2)};
}

}  // namespace obench
