#pragma once

#include <array>
#include <string>
#include <vector>

#include "rtmhd/growth.hpp"
#include "rtmhd/operators.hpp"

namespace rtmhd {

/// Residuals of the four mode equations (horizontal momentum pair, vertical momentum,
/// incompressibility), each relative to the largest term of its equation.
using Residuals = std::array<double, 4>;

/// Normal mode exp(lambda t + i x'.xi) with velocity (-i phi, -i theta, psi) and pressure pi.
/// psi lives on interior nodes; phi, theta, pi live on cell midpoints.
struct NormalMode {
    Frequency xi;
    double lambda = 0.0;
    Vec psi, phi, theta, pi;
    MagneticConfig mag;
    PhysicalParams params;
    Grid1D grid;
    ProfileSpec profile;
    Residuals residuals{};
    double divergence = 0.0;  // max |xi1 phi + xi2 theta + D1 psi| / max |D1 psi|
};

struct ModeOptions {
    double mode_tol = 1e-6;
};

NormalMode build_mode(const GrowthResult& growth, const MagneticConfig& mag,
                      const PhysicalParams& params, const DensityProfile& profile,
                      const Grid1D& grid, const ModeOptions& opts = {});

/// Residuals of the discrete system the mode was constructed from.
Residuals discrete_residuals(const NormalMode& mode, const DensityProfile& profile);

/// Residuals of the continuous equations evaluated on the mode samples with fourth-order
/// stencils on the core window |x3| <= Lz/2; these measure discretization error and decay
/// like h^2.
Residuals consistency_residuals(const NormalMode& mode, const DensityProfile& profile);

double divergence_defect(const NormalMode& mode);

struct ModeNorms {
    double psi = 0.0, phi = 0.0, theta = 0.0, pi = 0.0;  // discrete L2
    double dpsi = 0.0, d2psi = 0.0, dphi = 0.0, dtheta = 0.0, dpi = 0.0;
};

ModeNorms mode_norms(const NormalMode& mode);

enum class Location { Node, Mid, ExtNode };
enum class Basis { Cos, Sin };

/// One real field f(x', x3) = coeff(x3) * basis(x'.xi1).
struct SnapshotField {
    std::string name;
    Location location = Location::Node;
    Basis basis = Basis::Cos;
    Vec coeff;
};

/// Real growing solution built from the pair (xi1, -xi1) at time t.
struct FieldSnapshot {
    double t = 0.0;
    double lambda = 0.0;
    Frequency xi1;
    Grid1D grid;
    double L = 1.0;
    std::vector<SnapshotField> fields;  // rho, u1, u2, u3, N1, N2, N3, q

    const SnapshotField& field(const std::string& name) const;
    /// L2 norm over the periodic cell (2 pi L)^2 times [-Lz, Lz].
    double norm(const std::string& name) const;
    /// Max-norm of div u and div N relative to the max-norm of the largest summand.
    double div_u() const;
    double div_N() const;
    Orientation orientation = Orientation::Horizontal;
};

FieldSnapshot assemble_real_solution(const NormalMode& mode, double t);

void export_mode_json(const NormalMode& mode, const std::string& path);
NormalMode import_mode_json(const std::string& path);
void export_mode_csv(const NormalMode& mode, const std::string& path);
void export_snapshot_csv(const FieldSnapshot& snap, const std::string& path);

}  // namespace rtmhd
