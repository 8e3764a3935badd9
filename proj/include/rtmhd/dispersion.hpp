#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rtmhd/growth.hpp"

namespace rtmhd {

bool in_growing_domain(const DensityProfile& profile, const Grid1D& grid, Frequency xi,
                       const MagneticConfig& mag, const PhysicalParams& params);

struct CriticalNumber {
    bool infinite = false;
    double value = 0.0;  // meaningful when finite
    std::vector<std::pair<double, double>> trace;  // (Lz, M_c(Lz))
};

/// M_c(Lz) on one Dirichlet grid.
double critical_number_on(const DensityProfile& profile, const Grid1D& grid, double g);

/// Decision over an explicit increasing-Lz sequence (at least 3, each doubling Lz).
CriticalNumber critical_number(const DensityProfile& profile, const std::vector<Grid1D>& grids,
                               double g);

struct CriticalOptions {
    double rel_change = 1e-4;   // convergence threshold for the finite case
    double growth_ratio = 1.5;  // per-doubling growth signalling divergence
    double max_half_length = 1.0e5;
};

/// Doubles Lz at fixed spacing, starting from base, until the trace converges or diverges.
CriticalNumber critical_number(const DensityProfile& profile, const Grid1D& base, double g,
                               const CriticalOptions& opts = {});

/// S(xi) for a horizontal field of strength M.
double critical_freq_horizontal(const DensityProfile& profile, const Grid1D& grid, Frequency xi,
                                double M, double g);

/// |xi|_vc for a vertical field of strength M; zero when total_jump > 0.
double critical_freq_vertical(const DensityProfile& profile, const Grid1D& grid, double M,
                              double g);

/// Same threshold from the direct pencil (g rho' - M^2 D1^T D1, M^2 D2^T D2); no shortcut
/// for total_jump > 0.
double critical_freq_vertical_direct(const DensityProfile& profile, const Grid1D& grid, double M,
                                     double g);

struct DispersionEntry {
    Frequency xi;
    int k1 = 0;
    int k2 = 0;
    bool member = false;
    std::optional<double> lambda;
    std::string error;  // per-point failure, empty on success
};

struct DispersionTable {
    std::vector<DispersionEntry> entries;  // sorted by (k1, k2)
    double radius = 0.0;
    PhysicalParams params;
    MagneticConfig mag;
    Grid1D grid;
};

struct SweepOptions {
    bool use_symmetry = true;
    unsigned threads = 0;  // 0: hardware concurrency
    GrowthOptions growth;
};

DispersionTable lattice_sweep(const DensityProfile& profile, const Grid1D& grid,
                              const MagneticConfig& mag, const PhysicalParams& params,
                              double radius, const SweepOptions& opts = {});

/// Default sweep radius: 4 * 2 pi / (width of the support of rho').
double default_sweep_radius(const DensityProfile& profile);

struct SupRate {
    double Lambda = 0.0;
    Frequency xi1;
    Frequency xi2;  // -xi1
    double Lambda_star = 0.0;
    bool on_boundary = false;  // argmax lies on the outermost lattice shell
};

SupRate sup_rate(const DispersionTable& table);

void write_dispersion_csv(const DispersionTable& table, const std::string& path);
void write_trace_csv(const CriticalNumber& cn, const std::string& path);

}  // namespace rtmhd
