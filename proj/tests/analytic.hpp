#pragma once

// Closed forms for eta = A sin(k x) + B sin(l y) under geostrophic balance.

#include <algorithm>
#include <cmath>
#include <functional>

#include "obench/physvars.hpp"
#include "support.hpp"

namespace analytic {

struct Wave {
    double A = 0.3, B = 0.2;  // m
    double k = 0.0, l = 0.0;  // rad m^-1
    double g_over_f = 0.0;

    double eta(double y, double x) const { return A * std::sin(k * x) + B * std::sin(l * y); }
    double u(double y, double) const { return -g_over_f * B * l * std::cos(l * y); }
    double v(double, double x) const { return g_over_f * A * k * std::cos(k * x); }
    double vort(double y, double x) const {
        return -g_over_f * (A * k * k * std::sin(k * x) + B * l * l * std::sin(l * y));
    }
    double shear(double y, double x) const {
        return g_over_f * (-A * k * k * std::sin(k * x) + B * l * l * std::sin(l * y));
    }
    double strain(double y, double x) const { return std::abs(shear(y, x)); }
    double ow(double y, double x) const { return shear(y, x) * shear(y, x) - vort(y, x) * vort(y, x); }
};

/// Square n x n meter grid over [0, L]; the wave completes `cycles_x` and `cycles_y` periods.
inline Wave make_wave(double L, double cycles_x, double cycles_y, const obench::PhysConstants& c) {
    Wave w;
    w.k = 2.0 * M_PI * cycles_x / L;
    w.l = 2.0 * M_PI * cycles_y / L;
    w.g_over_f = c.g / c.f0;
    return w;
}

inline obench::GriddedField sample(const Wave& w, std::size_t n, double L) {
    const double h = L / double(n - 1);
    return testing::make_meter_field(1, n, n, h, [&](auto, double y, double x) { return w.eta(y, x); });
}

/// max |numeric - exact| / max |exact| over the grid.
inline double max_rel_error(const obench::GriddedField& num, const std::function<double(double, double)>& exact) {
    double err = 0.0, scale = 0.0;
    const auto& ys = num.lat().values;
    const auto& xs = num.lon().values;
    for (std::size_t j = 0; j < ys.size(); ++j)
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double e = exact(ys[j], xs[i]);
            err = std::max(err, std::abs(num.at(0, j, i) - e));
            scale = std::max(scale, std::abs(e));
        }
    return err / scale;
}

}  // namespace analytic
