#pragma once

#include <memory>

#include "rtmhd/banded.hpp"
#include "rtmhd/model.hpp"

namespace rtmhd {

/// Quadratic forms of the modified variational problem at one frequency, all carrying
/// the cell width h as quadrature weight.
struct FormSet {
    SymBand E0;  // magnetic plus gravitational potential energy
    SymBand E1;  // viscous dissipation
    SymBand J;   // kinetic constraint
    Frequency xi;
    MagneticConfig mag;
    PhysicalParams params;
    Grid1D grid;
    std::shared_ptr<const DensityProfile> profile;

    /// |xi|^2 E0 + s E1.
    SymBand energy(double s) const;
};

FormSet assemble_forms(const DensityProfile& profile, const Grid1D& grid, Frequency xi,
                       const MagneticConfig& mag, const PhysicalParams& params);

/// h * identity.
SymBand mass_form(const Grid1D& grid);
/// h * D1^T D1 (Dirichlet H1 stiffness).
SymBand stiffness_form(const Grid1D& grid);
/// h * D2^T D2 with the clamped second difference.
SymBand hessian_form(const Grid1D& grid);
/// h * diag(rho'(x_i)).
SymBand gravity_form(const DensityProfile& profile, const Grid1D& grid);
/// E0 alone (no J needed), for sign decisions.
SymBand potential_form(const DensityProfile& profile, const Grid1D& grid, Frequency xi,
                       const MagneticConfig& mag, double g);

}  // namespace rtmhd
