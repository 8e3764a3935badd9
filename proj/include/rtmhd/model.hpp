#pragma once

#include <cmath>
#include <vector>

namespace rtmhd {

struct PhysicalParams {
    double mu = 0.05;  // shear viscosity
    double g = 1.0;    // gravitational acceleration
    double L = 1.0;    // horizontal period scale, lattice is (Z/L)^2

    void validate() const;
};

enum class Orientation { Horizontal, Vertical };

struct MagneticConfig {
    Orientation orientation = Orientation::Horizontal;
    double magnitude = 0.0;

    void validate() const;
};

const char* to_string(Orientation o);
Orientation orientation_from_string(const char* s);

struct Bump {
    double amplitude = 0.0;
    double center = 0.0;
    double half_width = 1.0;
};

struct ProfileSpec {
    double base_density = 1.0;
    std::vector<Bump> bumps;
};

/// Uniform grid on [-Lz, Lz]; interior nodes x_i = -Lz + (i+1) h for i in [0, n),
/// cell midpoints m_k = -Lz + (k+1/2) h for k in [0, n].
struct Grid1D {
    double half_length = 8.0;
    int n = 1001;

    Grid1D() = default;
    Grid1D(double Lz, int points);

    double h() const { return 2.0 * half_length / (n + 1); }
    double node(int i) const { return -half_length + (i + 1) * h(); }
    double mid(int k) const { return -half_length + (k + 0.5) * h(); }
    std::vector<double> nodes() const;
    std::vector<double> mids() const;
};

struct Frequency {
    double xi1 = 0.0;
    double xi2 = 0.0;

    double norm2() const { return xi1 * xi1 + xi2 * xi2; }
    double norm() const { return std::sqrt(norm2()); }
    Frequency operator-() const { return {-xi1, -xi2}; }
};

struct ProfileMetrics {
    double total_jump = 0.0;
    double sup_ratio = 0.0;  // sup of rho'/rho (g not included)
    double inf_rho = 0.0;
    double sup_rho = 0.0;
    double support_lo = 0.0;
    double support_hi = 0.0;
};

/// Integral of exp(-1/(1-s^2)) over [-1, t], clamped to [-1, 1].
double unit_bump_cdf(double t);
/// Integral of the unit bump over [-1, 1].
double unit_bump_mass();

class DensityProfile {
public:
    /// Validates the profile description and checks positivity on the nodes of check_grid.
    static DensityProfile build(const ProfileSpec& spec, const Grid1D& check_grid);

    double rho(double x) const;
    double drho(double x) const;

    const ProfileSpec& spec() const { return spec_; }
    const ProfileMetrics& metrics() const { return metrics_; }

    /// Throws InvalidArgument unless the support of rho' lies strictly inside [-Lz/2, Lz/2]
    /// and the grid has at least 16 points.
    void require_grid(const Grid1D& grid) const;

private:
    explicit DensityProfile(ProfileSpec spec);
    ProfileSpec spec_;
    ProfileMetrics metrics_;
};

ProfileMetrics profile_metrics(const DensityProfile& profile);

/// Lattice frequencies k/L with 0 < |k/L| <= radius, sorted by (k1, k2).
std::vector<Frequency> lattice_points(double L, double radius);

}  // namespace rtmhd
