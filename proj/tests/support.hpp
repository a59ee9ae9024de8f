#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <random>
#include <string>

#include "obench/grid.hpp"

namespace testing {

using obench::GriddedField;

/// Degree grid starting at (lat0, lon0) with the given steps; time in days from 0.
inline GriddedField make_field(std::size_t nt, std::size_t ny, std::size_t nx,
                               const std::function<double(std::size_t, std::size_t, std::size_t)>& fn,
                               double lat0 = 33.0, double lon0 = -65.0, double dlat = 0.1, double dlon = 0.1) {
    std::vector<double> data;
    data.reserve(nt * ny * nx);
    for (std::size_t t = 0; t < nt; ++t)
        for (std::size_t y = 0; y < ny; ++y)
            for (std::size_t x = 0; x < nx; ++x) data.push_back(fn(t, y, x));
    return GriddedField("ssh", "m", obench::make_time_axis(obench::linspace_step(0.0, 1.0, nt)),
                        obench::make_lat_axis(obench::linspace_step(lat0, dlat, ny)),
                        obench::make_lon_axis(obench::linspace_step(lon0, dlon, nx)), std::move(data),
                        obench::parse_iso("2012-10-01"));
}

/// Meter grid with spacing h along both spatial axes.
inline GriddedField make_meter_field(std::size_t nt, std::size_t ny, std::size_t nx, double h,
                                     const std::function<double(std::size_t, double, double)>& fn,
                                     double lat_mean = 35.0) {
    std::vector<double> data;
    for (std::size_t t = 0; t < nt; ++t)
        for (std::size_t y = 0; y < ny; ++y)
            for (std::size_t x = 0; x < nx; ++x) data.push_back(fn(t, y * h, x * h));
    return GriddedField("ssh", "m", obench::make_time_axis(obench::linspace_step(0.0, 1.0, nt)),
                        obench::make_lat_axis(obench::linspace_step(0.0, h, ny), obench::units::kMeters),
                        obench::make_lon_axis(obench::linspace_step(0.0, h, nx), obench::units::kMeters),
                        std::move(data), obench::parse_iso("2012-10-01"),
                        {{"lat_mean_deg", std::to_string(lat_mean)}});
}

inline std::vector<double> random_values(std::size_t n, std::uint32_t seed) {
    std::mt19937 gen(seed);
    std::normal_distribution<double> dist(0.0, 1.0);
    std::vector<double> v(n);
    for (auto& x : v) x = dist(gen);
    return v;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / ("obench_test_" + name);
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

}  // namespace testing
