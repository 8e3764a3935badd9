#pragma once

#include <vector>

#include "rtmhd/model.hpp"

namespace rtmhd {

using Vec = std::vector<double>;

/// Difference operators on the staggered grid. Node fields have n entries and vanish at
/// x = +-Lz; midpoint fields have n+1 entries; extended-node fields have n+2 entries and
/// include the two boundary nodes.
struct DiffOps {
    int n = 0;
    double h = 0.0;

    explicit DiffOps(const Grid1D& grid) : n(grid.n), h(grid.h()) {}

    /// First difference nodes -> midpoints (D1).
    Vec d1(const Vec& node) const;
    /// First difference midpoints -> interior nodes; equals -D1^T.
    Vec d1_mid(const Vec& mid) const;
    /// First difference midpoints -> extended nodes, zero beyond the outer midpoints.
    Vec d1_mid_ext(const Vec& mid) const;
    /// First difference extended nodes -> midpoints.
    Vec d1_ext_mid(const Vec& ext) const;
    /// Clamped second difference nodes -> extended nodes (D2); the boundary rows carry
    /// psi_1/h^2 and psi_n/h^2 from the zero ghost values.
    Vec d2_ext(const Vec& node) const;
    /// Second difference on interior nodes (interior rows of D2).
    Vec d2(const Vec& node) const;
    /// Second difference on midpoints with zero values one cell beyond the ends.
    Vec d2_mid(const Vec& mid) const;
    /// Third difference nodes -> midpoints, d1_ext_mid(d2_ext(.)), equal to d2_mid(d1(.)).
    Vec d3(const Vec& node) const;
};

/// Fourth-order interpolation of a midpoint field onto the interior nodes.
Vec mid_to_node(const Vec& mid);

double dot(const Vec& a, const Vec& b);
double norm2(const Vec& a);

}  // namespace rtmhd
