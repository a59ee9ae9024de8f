#include "obench/regrid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include <fmt/format.h>

#include "obench/error.hpp"
#include "obench/parallel.hpp"

namespace obench {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_degree_axes(const CoordAxis& lat, const CoordAxis& lon) {
    if (lat.in_meters() || lon.in_meters()) fail("regridding needs lat/lon axes in degrees");
    if (!lat.ascending() || !lon.ascending()) fail("regridding needs ascending lat/lon axes (run validate_latlon)");
}

/// Converts a track time to the target time axis units.
struct TimeMap {
    double scale;
    double shift;
    double operator()(double t) const { return t * scale + shift; }
};

TimeMap time_map(const AlongTrackSet& track, const CoordAxis& time, Timestamp epoch) {
    const double target_unit = seconds_per_time_unit(time.units);
    const double track_unit = seconds_per_time_unit(track.time_units());
    return {track_unit / target_unit, days_between(epoch, track.epoch()) * kSecondsPerDay / target_unit};
}

std::optional<std::size_t> nearest_cell(const std::vector<double>& a, double v) {
    const std::size_t n = a.size();
    if (n == 1) {
        if (std::abs(v - a[0]) <= 0.5) return 0;
        return std::nullopt;
    }
    auto it = std::lower_bound(a.begin(), a.end(), v);
    std::size_t c;
    if (it == a.begin()) c = 0;
    else if (it == a.end()) c = n - 1;
    else {
        const std::size_t hi = static_cast<std::size_t>(it - a.begin());
        c = (v - a[hi - 1] <= a[hi] - v) ? hi - 1 : hi;
    }
    const double lower = c > 0 ? 0.5 * (a[c] - a[c - 1]) : 0.5 * (a[1] - a[0]);
    const double upper = c + 1 < n ? 0.5 * (a[c + 1] - a[c]) : 0.5 * (a[n - 1] - a[n - 2]);
    if (v < a[c] - lower || v > a[c] + upper) return std::nullopt;
    return c;
}

struct Bracket {
    std::size_t i0 = 0, i1 = 0;
    double frac = 0.0;
};

std::optional<Bracket> bracket(const std::vector<double>& a, double v) {
    const std::size_t n = a.size();
    if (n == 1) {
        if (v == a[0]) return Bracket{0, 0, 0.0};
        return std::nullopt;
    }
    if (!(v >= a.front() && v <= a.back())) return std::nullopt;
    auto it = std::upper_bound(a.begin(), a.end(), v);
    std::size_t hi = it == a.end() ? n - 1 : static_cast<std::size_t>(it - a.begin());
    std::size_t lo = hi - 1;
    return Bracket{lo, hi, (v - a[lo]) / (a[hi] - a[lo])};
}

}  // namespace

RegridResult regrid_to_grid(const AlongTrackSet& track, const TargetAxes& target) {
    if (target.time.values.empty() || target.lat.values.empty() || target.lon.values.empty())
        fail("regrid_to_grid: target axes are empty");
    require_degree_axes(target.lat, target.lon);
    const auto tm = time_map(track, target.time, target.epoch);
    const std::size_t nt = target.time.size(), ny = target.lat.size(), nx = target.lon.size();
    std::vector<double> sum(nt * ny * nx, 0.0);
    std::vector<std::size_t> count(sum.size(), 0);
    std::size_t dropped = 0;
    for (const auto& r : track.records()) {
        auto ct = nearest_cell(target.time.values, tm(r.time));
        auto cy = nearest_cell(target.lat.values, r.lat);
        auto cx = nearest_cell(target.lon.values, r.lon);
        if (!ct || !cy || !cx || std::isnan(r.value)) {
            ++dropped;
            continue;
        }
        const auto i = (*ct * ny + *cy) * nx + *cx;
        sum[i] += r.value;
        ++count[i];
    }
    std::vector<double> data(sum.size());
    for (std::size_t i = 0; i < data.size(); ++i)
        data[i] = count[i] > 0 ? sum[i] / static_cast<double>(count[i]) : kNaN;
    return {GriddedField(track.var(), track.units(), target.time, target.lat, target.lon, std::move(data),
                         target.epoch),
            dropped};
}

double interpolate_at(const GriddedField& field, const QueryPoint& q) {
    auto bt = bracket(field.time().values, q.time);
    auto by = bracket(field.lat().values, q.lat);
    auto bx = bracket(field.lon().values, q.lon);
    if (!bt || !by || !bx) return kNaN;
    const std::size_t ti[2] = {bt->i0, bt->i1}, yi[2] = {by->i0, by->i1}, xi[2] = {bx->i0, bx->i1};
    const double tw[2] = {1.0 - bt->frac, bt->frac}, yw[2] = {1.0 - by->frac, by->frac},
                 xw[2] = {1.0 - bx->frac, bx->frac};
    double num = 0.0, den = 0.0;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c) {
                const double w = tw[a] * yw[b] * xw[c];
                if (w == 0.0) continue;
                const double v = field.at(ti[a], yi[b], xi[c]);
                if (std::isnan(v)) continue;
                num += w * v;
                den += w;
            }
    return den > 0.0 ? num / den : kNaN;
}

AlongTrackSet regrid_to_track(const GriddedField& field, const AlongTrackSet& coords) {
    require_degree_axes(field.lat(), field.lon());
    const auto tm = time_map(coords, field.time(), field.epoch());
    auto records = coords.records();
    for (auto& r : records) r.value = interpolate_at(field, {tm(r.time), r.lat, r.lon});
    return AlongTrackSet(std::move(records), coords.epoch(), field.var(), field.units(), coords.time_units());
}

GriddedField regrid_grid_to_grid(const GriddedField& field, const TargetAxes& target) {
    require_degree_axes(field.lat(), field.lon());
    require_degree_axes(target.lat, target.lon);
    const double unit = seconds_per_time_unit(target.time.units) / seconds_per_time_unit(field.time().units);
    const double shift = days_between(field.epoch(), target.epoch) * kSecondsPerDay /
                         seconds_per_time_unit(field.time().units);
    const std::size_t nt = target.time.size(), ny = target.lat.size(), nx = target.lon.size();
    std::vector<double> data(nt * ny * nx);
    parallel_for(nt, [&](std::size_t t) {
        const double qt = target.time.values[t] * unit + shift;
        for (std::size_t y = 0; y < ny; ++y)
            for (std::size_t x = 0; x < nx; ++x)
                data[(t * ny + y) * nx + x] = interpolate_at(field, {qt, target.lat.values[y], target.lon.values[x]});
    });
    return GriddedField(field.var(), field.units(), target.time, target.lat, target.lon, std::move(data),
                        target.epoch, field.attrs());
}

GriddedField fill_nans_gauss_seidel(const GriddedField& field, const FillOptions& opts, FillStats* stats) {
    const auto s = field.shape();
    std::vector<double> out(field.data().begin(), field.data().end());
    std::vector<std::size_t> iterations(s.nt, 0);
    parallel_for(s.nt, [&](std::size_t t) {
        double* slice = out.data() + t * s.slice_size();
        std::vector<std::size_t> holes;
        double sum = 0.0;
        std::size_t n_valid = 0;
        for (std::size_t i = 0; i < s.slice_size(); ++i) {
            if (std::isnan(slice[i])) holes.push_back(i);
            else {
                sum += slice[i];
                ++n_valid;
            }
        }
        if (holes.empty()) return;
        if (n_valid == 0) fail(fmt::format("fill_nans: time slice {} has no valid cells", t));
        const double mean = sum / static_cast<double>(n_valid);
        double ss = 0.0;
        for (std::size_t i = 0; i < s.slice_size(); ++i) {
            if (!std::isnan(slice[i])) ss += (slice[i] - mean) * (slice[i] - mean);
        }
        const double threshold = opts.tol * std::sqrt(ss / static_cast<double>(n_valid));
        for (auto i : holes) slice[i] = mean;

        std::size_t iter = 0;
        while (iter < opts.max_iters) {
            ++iter;
            double max_update = 0.0;
            for (auto i : holes) {
                const std::size_t y = i / s.nx, x = i % s.nx;
                double acc = 0.0;
                int k = 0;
                if (y > 0) { acc += slice[i - s.nx]; ++k; }
                if (y + 1 < s.ny) { acc += slice[i + s.nx]; ++k; }
                if (x > 0) { acc += slice[i - 1]; ++k; }
                if (x + 1 < s.nx) { acc += slice[i + 1]; ++k; }
                if (k == 0) continue;
                const double next = acc / k;
                max_update = std::max(max_update, std::abs(next - slice[i]));
                slice[i] = next;
            }
            if (max_update < threshold || max_update == 0.0) break;
        }
        iterations[t] = iter;
    });
    if (stats) stats->iterations = std::move(iterations);
    return field.with_data(std::move(out));
}

}  // namespace obench
