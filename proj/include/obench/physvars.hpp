#pragma once

#include <string>
#include <utility>

#include "obench/grid.hpp"

namespace obench {

struct PhysConstants {
    double g = 9.81;             // m s^-2
    double omega = 7.292115e-5;  // rad s^-1
    double f0 = 0.0;             // s^-1

    /// f0 = 2 omega sin(lat_mean); rejects |lat_mean| < 1 degree.
    static PhysConstants at_latitude(double lat_mean_deg);
    /// Uses the "lat_mean_deg" attribute written by latlon_deg2m.
    static PhysConstants for_field(const GriddedField& field);
};

/// d/dx (along lon) and d/dy (along lat) per time slice. Second-order central
/// differences inside; on the edges a four-point one-sided stencil with the same
/// leading error as the central one (three-point when the axis has 3 points).
GriddedField ddx(const GriddedField& f);
GriddedField ddy(const GriddedField& f);

GriddedField sla(const GriddedField& ssh);
std::pair<GriddedField, GriddedField> geostrophic_uv(const GriddedField& ssh, const PhysConstants& c);
std::pair<GriddedField, GriddedField> geostrophic_uv(const GriddedField& ssh);
GriddedField kinetic_energy(const GriddedField& u, const GriddedField& v);
GriddedField relative_vorticity(const GriddedField& u, const GriddedField& v);
GriddedField enstrophy(const GriddedField& vort);

struct StrainComponents {
    GriddedField normal;  // du/dx - dv/dy
    GriddedField shear;   // dv/dx + du/dy
    GriddedField magnitude;
};
StrainComponents strain_components(const GriddedField& u, const GriddedField& v);
GriddedField strain(const GriddedField& u, const GriddedField& v);
GriddedField okubo_weiss(const GriddedField& u, const GriddedField& v, const GriddedField& vort);

/// Dispatch on sla, u, v, ke, vort, ens, strain or ow.
GriddedField derive(const GriddedField& ssh, const std::string& var);

}  // namespace obench
