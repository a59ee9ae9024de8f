#include "obench/physvars.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "obench/coords.hpp"
#include "obench/error.hpp"
#include "obench/parallel.hpp"

namespace obench {

PhysConstants PhysConstants::at_latitude(double lat_mean_deg) {
    if (!(std::abs(lat_mean_deg) >= 1.0))
        fail(fmt::format("mean latitude {} deg is within 1 deg of the equator; f0 is ill-conditioned", lat_mean_deg));
    PhysConstants c;
    c.f0 = 2.0 * c.omega * std::sin(lat_mean_deg * std::numbers::pi / 180.0);
    return c;
}

PhysConstants PhysConstants::for_field(const GriddedField& field) {
    if (auto lat = field.attr("lat_mean_deg")) return at_latitude(std::stod(*lat));
    if (!field.lat().in_meters()) {
        const auto& v = field.lat().values;
        double sum = 0.0;
        for (double x : v) sum += x;
        return at_latitude(sum / static_cast<double>(v.size()));
    }
    fail("field has meter axes but no 'lat_mean_deg' attribute; cannot evaluate f0");
}

namespace {

void require_meters(const GriddedField& f) {
    if (!f.lat().in_meters() || !f.lon().in_meters())
        fail("spatial derivatives need lat/lon axes in meters (apply latlon_deg2m first)");
}

/// Derivative along a strided 1-D line of n samples at coordinates a.
///
/// Edges use a four-point one-sided stencil whose leading truncation error
/// (h^2/6 times the third derivative) equals the central stencil's, so the
/// error stays smooth across the boundary and a derivative of a derivative is
/// still second order. Three-point lines use the three-point one-sided stencil.
void diff_line(const double* f, std::size_t stride, const std::vector<double>& a, double* out) {
    const std::size_t n = a.size();
    auto at = [&](std::size_t i) { return f[i * stride]; };
    if (n >= 4) {
        const double h0 = (a[3] - a[0]) / 3.0, h1 = (a[n - 1] - a[n - 4]) / 3.0;
        out[0] = (-2.0 * at(0) + 3.5 * at(1) - 2.0 * at(2) + 0.5 * at(3)) / h0;
        out[(n - 1) * stride] = (2.0 * at(n - 1) - 3.5 * at(n - 2) + 2.0 * at(n - 3) - 0.5 * at(n - 4)) / h1;
    } else {
        out[0] = (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (a[2] - a[0]);
        out[(n - 1) * stride] = (3.0 * at(n - 1) - 4.0 * at(n - 2) + at(n - 3)) / (a[n - 1] - a[n - 3]);
    }
    for (std::size_t i = 1; i + 1 < n; ++i) out[i * stride] = (at(i + 1) - at(i - 1)) / (a[i + 1] - a[i - 1]);
}

GriddedField differentiate(const GriddedField& f, bool along_x) {
    require_meters(f);
    const auto s = f.shape();
    const auto& axis = along_x ? f.lon() : f.lat();
    if (axis.size() < 3)
        fail(fmt::format("{} axis has {} points; derivatives need at least 3", axis.name, axis.size()));
    std::vector<double> out(s.volume());
    const double* in = f.data().data();
    parallel_for(s.nt, [&](std::size_t t) {
        const std::size_t base = t * s.slice_size();
        if (along_x) {
            for (std::size_t y = 0; y < s.ny; ++y)
                diff_line(in + base + y * s.nx, 1, axis.values, out.data() + base + y * s.nx);
        } else {
            for (std::size_t x = 0; x < s.nx; ++x) diff_line(in + base + x, s.nx, axis.values, out.data() + base + x);
        }
    });
    return f.with_data(std::move(out));
}

void require_same_geometry(const GriddedField& a, const GriddedField& b) {
    if (!(a.shape() == b.shape()) || !(a.lat() == b.lat()) || !(a.lon() == b.lon()) || !(a.time() == b.time()))
        fail("fields do not share the same grid");
}

template <class Fn>
GriddedField cellwise(const GriddedField& a, const GriddedField& b, const std::string& var,
                      const std::string& units, Fn fn) {
    require_same_geometry(a, b);
    std::vector<double> out(a.data().size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = fn(a.data()[i], b.data()[i]);
    return a.with_data(std::move(out), var, units);
}

}  // namespace

GriddedField ddx(const GriddedField& f) { return differentiate(f, true); }
GriddedField ddy(const GriddedField& f) { return differentiate(f, false); }

GriddedField sla(const GriddedField& ssh) {
    const auto s = ssh.shape();
    std::vector<double> out(ssh.data().begin(), ssh.data().end());
    for (std::size_t t = 0; t < s.nt; ++t) {
        const auto slice = ssh.slice(t);
        double sum = 0.0;
        std::size_t n = 0;
        for (double v : slice) {
            if (!std::isnan(v)) {
                sum += v;
                ++n;
            }
        }
        const double mean = n > 0 ? sum / static_cast<double>(n) : std::numeric_limits<double>::quiet_NaN();
        for (std::size_t i = 0; i < slice.size(); ++i) out[t * s.slice_size() + i] -= mean;
    }
    return ssh.with_data(std::move(out), "sla", ssh.units());
}

std::pair<GriddedField, GriddedField> geostrophic_uv(const GriddedField& ssh, const PhysConstants& c) {
    const double scale = c.g / c.f0;
    auto dy = ddy(ssh);
    auto dx = ddx(ssh);
    std::vector<double> u(dy.data().begin(), dy.data().end()), v(dx.data().begin(), dx.data().end());
    for (double& x : u) x *= -scale;
    for (double& x : v) x *= scale;
    return {ssh.with_data(std::move(u), "u", "m s-1"), ssh.with_data(std::move(v), "v", "m s-1")};
}

std::pair<GriddedField, GriddedField> geostrophic_uv(const GriddedField& ssh) {
    return geostrophic_uv(ssh, PhysConstants::for_field(ssh));
}

GriddedField kinetic_energy(const GriddedField& u, const GriddedField& v) {
    return cellwise(u, v, "ke", "m2 s-2", [](double a, double b) { return 0.5 * (a * a + b * b); });
}

GriddedField relative_vorticity(const GriddedField& u, const GriddedField& v) {
    return cellwise(ddx(v), ddy(u), "vort", "s-1", [](double dvdx, double dudy) { return dvdx - dudy; });
}

GriddedField enstrophy(const GriddedField& vort) {
    std::vector<double> out(vort.data().begin(), vort.data().end());
    for (double& z : out) z = 0.5 * z * z;
    return vort.with_data(std::move(out), "ens", "s-2");
}

StrainComponents strain_components(const GriddedField& u, const GriddedField& v) {
    require_same_geometry(u, v);
    const auto dudx = ddx(u), dudy = ddy(u), dvdx = ddx(v), dvdy = ddy(v);
    auto normal = cellwise(dudx, dvdy, "strain_normal", "s-1", [](double a, double b) { return a - b; });
    auto shear = cellwise(dvdx, dudy, "strain_shear", "s-1", [](double a, double b) { return a + b; });
    auto magnitude =
        cellwise(normal, shear, "strain", "s-1", [](double n, double s) { return std::sqrt(n * n + s * s); });
    return {std::move(normal), std::move(shear), std::move(magnitude)};
}

GriddedField strain(const GriddedField& u, const GriddedField& v) { return strain_components(u, v).magnitude; }

GriddedField okubo_weiss(const GriddedField& u, const GriddedField& v, const GriddedField& vort) {
    const auto sc = strain_components(u, v);
    auto sq = cellwise(sc.normal, sc.shear, "ow", "s-2", [](double n, double s) { return n * n + s * s; });
    return cellwise(sq, vort, "ow", "s-2", [](double s2, double z) { return s2 - z * z; });
}

GriddedField derive(const GriddedField& ssh, const std::string& var) {
    if (var == "sla") return sla(ssh);
    if (var != "u" && var != "v" && var != "ke" && var != "vort" && var != "ens" && var != "strain" && var != "ow")
        fail(fmt::format("unknown derived variable '{}' (expected sla, u, v, ke, vort, ens, strain or ow)", var));
    const GriddedField eta = ssh.lat().in_meters() ? ssh : latlon_deg2m(ssh);
    auto [u, v] = geostrophic_uv(eta);
    if (var == "u") return u;
    if (var == "v") return v;
    if (var == "ke") return kinetic_energy(u, v);
    if (var == "strain") return strain(u, v);
    auto vort = relative_vorticity(u, v);
    if (var == "vort") return vort;
    if (var == "ens") return enstrophy(vort);
    return okubo_weiss(u, v, vort);
}

}  // namespace obench
