#include "obench/obs_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>
#include <json.hpp>

#include "obench/coords.hpp"
#include "obench/error.hpp"
#include "obench/prng.hpp"
#include "obench/regrid.hpp"

namespace obench {

using json = nlohmann::json;

double Prng::gaussian() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
}

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;
// Visits of neighbouring ground tracks are spread over the repeat cycle by
// stepping through it with the golden-ratio fraction.
constexpr double kVisitStep = 0.6180339887498949;

double frac(double x) { return x - std::floor(x); }

}  // namespace

void TrackPattern::check() const {
    if (satellites.empty()) fail("track pattern needs at least one satellite");
    for (const auto& s : satellites) {
        if (!(s.inclination > 0.0 && s.inclination < 180.0))
            fail(fmt::format("inclination {} outside (0, 180)", s.inclination));
    }
    if (!(along_track_spacing > 0.0)) fail("along-track spacing must be positive");
    if (!(repeat_cycle > 0.0)) fail("repeat cycle must be positive");
    if (!(ground_speed > 0.0)) fail("ground speed must be positive");
    if (!(track_spacing > 0.0)) fail("track spacing must be positive");
    if (kind == TrackKind::Swath) {
        if (swath.half_width < 0.0 || swath.nadir_gap < 0.0) fail("swath widths must be non-negative");
        if (swath.half_width > 0.0 && !(swath.across_spacing > 0.0)) fail("swath across spacing must be positive");
    }
}

TrackPattern TrackPattern::preset(const std::string& name) {
    TrackPattern p;
    if (name == "nadir-4sat") {
        p.kind = TrackKind::Nadir;
        p.satellites.clear();
        for (int i = 0; i < 4; ++i)
            p.satellites.push_back({66.0, p.repeat_cycle * i / 4.0, p.track_spacing * i / 4.0});
        return p;
    }
    if (name == "swot-like") {
        p.kind = TrackKind::Swath;
        p.satellites = {Satellite{77.6, 0.0, 0.0}};
        p.along_track_spacing = 2000.0;
        p.repeat_cycle = 21.0;
        p.track_spacing = 300000.0;
        p.swath = {120000.0, 2000.0, 20000.0};
        return p;
    }
    fail(fmt::format("unknown track pattern preset '{}' (expected nadir-4sat or swot-like)", name));
}

TrackPattern TrackPattern::from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        fail_parse("pattern", e.what());
    }
    if (!j.is_object()) fail_parse("pattern", "must be a JSON object");
    TrackPattern p;
    for (const auto& [key, v] : j.items()) {
        if (key == "kind") {
            const auto k = v.get<std::string>();
            if (k == "nadir") p.kind = TrackKind::Nadir;
            else if (k == "swath") p.kind = TrackKind::Swath;
            else fail_parse("kind", "expected nadir or swath");
        } else if (key == "satellites") {
            p.satellites.clear();
            for (const auto& s : v) {
                Satellite sat;
                sat.inclination = s.value("inclination", 66.0);
                sat.phase_days = s.value("phase_days", 0.0);
                sat.offset_m = s.value("offset_m", 0.0);
                p.satellites.push_back(sat);
            }
        } else if (key == "inclination") {
            p.satellites = {Satellite{v.get<double>(), 0.0, 0.0}};
        } else if (key == "along_track_spacing") {
            p.along_track_spacing = v.get<double>();
        } else if (key == "repeat_cycle") {
            p.repeat_cycle = v.get<double>();
        } else if (key == "ground_speed") {
            p.ground_speed = v.get<double>();
        } else if (key == "track_spacing") {
            p.track_spacing = v.get<double>();
        } else if (key == "swath") {
            p.swath.half_width = v.value("half_width", 0.0);
            p.swath.across_spacing = v.value("across_spacing", 2000.0);
            p.swath.nadir_gap = v.value("nadir_gap", 0.0);
        } else {
            fail_parse(key, "unknown key in track pattern");
        }
    }
    p.check();
    return p;
}

std::string TrackPattern::to_json() const {
    json j;
    j["kind"] = kind == TrackKind::Nadir ? "nadir" : "swath";
    j["satellites"] = json::array();
    for (const auto& s : satellites)
        j["satellites"].push_back({{"inclination", s.inclination}, {"phase_days", s.phase_days}, {"offset_m", s.offset_m}});
    j["along_track_spacing"] = along_track_spacing;
    j["repeat_cycle"] = repeat_cycle;
    j["ground_speed"] = ground_speed;
    j["track_spacing"] = track_spacing;
    j["swath"] = {{"half_width", swath.half_width},
                  {"across_spacing", swath.across_spacing},
                  {"nadir_gap", swath.nadir_gap}};
    return j.dump();
}

TangentPlane::TangentPlane(const DomainBox& box) {
    if (!box.lat || !box.lon) fail("track generation needs a lat/lon box");
    box.check();
    lat0 = 0.5 * (box.lat->first + box.lat->second);
    lon0 = 0.5 * (box.lon->first + box.lon->second);
    half_y = 0.5 * (box.lat->second - box.lat->first) * kDeg * kEarthRadius;
    half_x = 0.5 * (box.lon->second - box.lon->first) * kDeg * kEarthRadius * std::cos(lat0 * kDeg);
}

std::pair<double, double> TangentPlane::to_xy(double lat, double lon) const {
    return {(lon - lon0) * kDeg * kEarthRadius * std::cos(lat0 * kDeg), (lat - lat0) * kDeg * kEarthRadius};
}

std::pair<double, double> TangentPlane::to_latlon(double x, double y) const {
    return {lat0 + y / kEarthRadius / kDeg, lon0 + x / (kEarthRadius * std::cos(lat0 * kDeg)) / kDeg};
}

namespace {

/// Parameter range of p0 + s*d inside |x| <= hx, |y| <= hy; empty when s_out <= s_in.
std::pair<double, double> clip_line(double px, double py, double dx, double dy, double hx, double hy) {
    double lo = -std::numeric_limits<double>::infinity(), hi = std::numeric_limits<double>::infinity();
    auto axis = [&](double p, double d, double h) {
        if (std::abs(d) < 1e-15) {
            if (std::abs(p) > h) hi = lo - 1.0;
            return;
        }
        double a = (-h - p) / d, b = (h - p) / d;
        if (a > b) std::swap(a, b);
        lo = std::max(lo, a);
        hi = std::min(hi, b);
    };
    axis(px, dx, hx);
    axis(py, dy, hy);
    return {lo, hi};
}

}  // namespace

std::vector<Pass> plan_passes(const TrackPattern& pattern, const DomainBox& box, const TrackPeriod& period) {
    pattern.check();
    const TangentPlane plane(box);
    std::vector<Pass> passes;
    if (!(period.end > period.start)) return passes;
    const double C = pattern.repeat_cycle, D = pattern.track_spacing;

    for (std::size_t si = 0; si < pattern.satellites.size(); ++si) {
        const auto& sat = pattern.satellites[si];
        for (bool ascending : {true, false}) {
            const double theta = sat.inclination * kDeg;
            const double dx = std::cos(theta), dy = ascending ? std::sin(theta) : -std::sin(theta);
            const double nx = -dy, ny = dx;
            double cmin = std::numeric_limits<double>::infinity(), cmax = -cmin;
            for (double sx : {-1.0, 1.0})
                for (double sy : {-1.0, 1.0}) {
                    const double c = nx * sx * plane.half_x + ny * sy * plane.half_y;
                    cmin = std::min(cmin, c);
                    cmax = std::max(cmax, c);
                }
            const auto jmin = static_cast<long>(std::ceil((cmin - sat.offset_m) / D));
            const auto jmax = static_cast<long>(std::floor((cmax - sat.offset_m) / D));
            for (long j = jmin; j <= jmax; ++j) {
                const double c = sat.offset_m + static_cast<double>(j) * D;
                const auto [s_in, s_out] = clip_line(c * nx, c * ny, dx, dy, plane.half_x, plane.half_y);
                if (!(s_out > s_in)) continue;
                const double visit =
                    sat.phase_days + frac(static_cast<double>(j) * kVisitStep + (ascending ? 0.0 : 0.5)) * C;
                const auto kmin = static_cast<long>(std::ceil((period.start - visit) / C));
                for (long k = kmin;; ++k) {
                    const double t = visit + static_cast<double>(k) * C;
                    if (t >= period.end) break;
                    if (t < period.start) continue;
                    passes.push_back(Pass{si, ascending, j, t, dx, dy, c, s_in, s_out});
                }
            }
        }
    }
    std::stable_sort(passes.begin(), passes.end(), [](const Pass& a, const Pass& b) { return a.start < b.start; });
    return passes;
}

std::vector<TrackPoint> generate_tracks(const TrackPattern& pattern, const DomainBox& box, const TrackPeriod& period) {
    const TangentPlane plane(box);
    const auto passes = plan_passes(pattern, box, period);
    const double spacing = pattern.along_track_spacing;

    std::vector<double> across{0.0};
    if (pattern.kind == TrackKind::Swath && pattern.swath.half_width > 0.0) {
        for (int m = 1;; ++m) {
            const double o = m * pattern.swath.across_spacing;
            if (o > pattern.swath.half_width) break;
            if (o < 0.5 * pattern.swath.nadir_gap) continue;
            across.push_back(o);
            across.push_back(-o);
        }
    }

    const auto& lat_box = *box.lat;
    const auto& lon_box = *box.lon;
    const double speed_m_per_day = pattern.ground_speed * kSecondsPerDay;
    std::vector<TrackPoint> points;
    for (const auto& p : passes) {
        const double nx = -p.dir_y, ny = p.dir_x;
        const auto steps = static_cast<long>(std::floor((p.s_out - p.s_in) / spacing));
        for (long m = 0; m <= steps; ++m) {
            const double s = p.s_in + static_cast<double>(m) * spacing;
            const double t = p.start + (s - p.s_in) / speed_m_per_day;
            for (double o : across) {
                const double x = (p.offset + o) * nx + s * p.dir_x;
                const double y = (p.offset + o) * ny + s * p.dir_y;
                if (o != 0.0 && (std::abs(x) > plane.half_x || std::abs(y) > plane.half_y)) continue;
                auto [lat, lon] = plane.to_latlon(x, y);
                lat = std::clamp(lat, lat_box.first, lat_box.second);
                lon = std::clamp(lon, lon_box.first, lon_box.second);
                points.push_back({t, lat, lon});
            }
        }
    }
    std::stable_sort(points.begin(), points.end(),
                     [](const TrackPoint& a, const TrackPoint& b) { return a.time < b.time; });
    return points;
}

SampleResult sample_field(const GriddedField& field, const std::vector<TrackPoint>& points, const NoiseSpec& noise) {
    if (noise.kind == NoiseKind::Gaussian && !(noise.std >= 0.0)) fail("noise std must be non-negative");
    const double to_field = kSecondsPerDay / seconds_per_time_unit(field.time().units);
    Prng rng(noise.seed);
    std::vector<TrackRecord> records;
    records.reserve(points.size());
    std::size_t dropped = 0;
    for (const auto& p : points) {
        double v = interpolate_at(field, QueryPoint{p.time * to_field, p.lat, p.lon});
        const double eps = noise.kind == NoiseKind::Gaussian ? noise.std * rng.gaussian() : 0.0;
        if (std::isnan(v)) {
            ++dropped;
            continue;
        }
        records.push_back({p.time, p.lat, p.lon, v + eps});
    }
    return {AlongTrackSet(std::move(records), field.epoch(), field.var(), field.units(), units::kDays), dropped};
}

namespace {

GriddedField take_times(const GriddedField& field, const std::vector<std::size_t>& idx) {
    const auto sh = field.shape();
    std::vector<double> t, data;
    data.reserve(idx.size() * sh.slice_size());
    for (auto i : idx) {
        t.push_back(field.time().values[i]);
        const auto sl = field.slice(i);
        data.insert(data.end(), sl.begin(), sl.end());
    }
    return GriddedField(field.var(), field.units(), make_time_axis(std::move(t), field.time().units), field.lat(),
                        field.lon(), std::move(data), field.epoch(), field.attrs());
}

}  // namespace

OsseSplit osse_split(const GriddedField& field, Timestamp eval_start, Timestamp eval_end, double spinup_days) {
    if (!(eval_end >= eval_start)) fail("eval period end precedes its start");
    const double per_day = kSecondsPerDay / seconds_per_time_unit(field.time().units);
    const double lo = days_between(field.epoch(), eval_start) * per_day;
    const double hi = days_between(field.epoch(), eval_end) * per_day;
    const auto& tv = field.time().values;
    const double train_from = tv.front() + spinup_days * per_day;
    std::vector<std::size_t> eval_idx, train_idx;
    for (std::size_t i = 0; i < tv.size(); ++i) {
        if (tv[i] >= lo && tv[i] <= hi) eval_idx.push_back(i);
        else if (tv[i] >= train_from) train_idx.push_back(i);
    }
    if (eval_idx.empty())
        fail(fmt::format("empty domain: no time step in eval period {} .. {}", format_iso(eval_start),
                         format_iso(eval_end)));
    OsseSplit out{std::nullopt, take_times(field, eval_idx), eval_idx.front(), eval_idx.back()};
    if (!train_idx.empty()) out.train = take_times(field, train_idx);
    return out;
}

GriddedField make_eddy_field(const EddyFieldSpec& spec) {
    if (spec.nt == 0 || spec.ny < 2 || spec.nx < 2) fail("eddy field needs nt >= 1 and ny, nx >= 2");
    if (!(spec.spacing_km > 0.0) || !(spec.dt_days > 0.0)) fail("eddy field spacing must be positive");
    const double h = spec.spacing_km * 1000.0;
    const double lat_mid = spec.lat0 + 0.5 * (spec.ny - 1) * h / kEarthRadius / kDeg;
    const double dlat = h / kEarthRadius / kDeg;
    const double dlon = h / (kEarthRadius * std::cos(lat_mid * kDeg)) / kDeg;
    const double Lx = spec.nx * h, Ly = spec.ny * h;

    struct Eddy {
        double x, y, u, v, radius, amp;
    };
    Prng rng(spec.seed);
    std::vector<Eddy> eddies;
    for (std::size_t e = 0; e < spec.eddies; ++e) {
        Eddy d{};
        d.x = rng.uniform() * Lx;
        d.y = rng.uniform() * Ly;
        const double heading = 2.0 * std::numbers::pi * rng.uniform();
        const double speed = 2000.0 + 6000.0 * rng.uniform();  // m per day
        d.u = speed * std::cos(heading);
        d.v = speed * std::sin(heading);
        d.radius = 20000.0 + 40000.0 * rng.uniform();
        d.amp = (rng.uniform() < 0.5 ? -1.0 : 1.0) * (0.1 + 0.3 * rng.uniform());
        eddies.push_back(d);
    }
    const double bg_phase = 2.0 * std::numbers::pi * rng.uniform();

    auto wrap = [](double d, double L) { return d - L * std::round(d / L); };
    std::vector<double> data(spec.nt * spec.ny * spec.nx);
    for (std::size_t t = 0; t < spec.nt; ++t) {
        const double days = t * spec.dt_days;
        for (std::size_t j = 0; j < spec.ny; ++j) {
            const double y = j * h;
            for (std::size_t i = 0; i < spec.nx; ++i) {
                const double x = i * h;
                double v = 0.2 * std::sin(2.0 * std::numbers::pi * y / Ly + bg_phase + 0.02 * days);
                for (const auto& d : eddies) {
                    const double rx = wrap(x - (d.x + d.u * days), Lx);
                    const double ry = wrap(y - (d.y + d.v * days), Ly);
                    v += d.amp * std::exp(-(rx * rx + ry * ry) / (2.0 * d.radius * d.radius));
                }
                data[(t * spec.ny + j) * spec.nx + i] = v;
            }
        }
    }
    return GriddedField("ssh", "m", make_time_axis(linspace_step(0.0, spec.dt_days, spec.nt)),
                        make_lat_axis(linspace_step(spec.lat0, dlat, spec.ny)),
                        make_lon_axis(linspace_step(spec.lon0, dlon, spec.nx)), std::move(data), spec.epoch,
                        {{"source", "synthetic eddies"}});
}

}  // namespace obench
