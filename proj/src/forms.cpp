#include "rtmhd/forms.hpp"

#include <vector>

#include "rtmhd/errors.hpp"

namespace rtmhd {

namespace {

struct Entry {
    int col;
    double val;
};
using Row = std::vector<Entry>;

/// Adds c * sum_r w_r (row_r . x)^2 to the form, i.e. c * R^T W R.
void add_gram(SymBand& S, const std::vector<Row>& rows, const std::vector<double>& w, double c) {
    for (size_t r = 0; r < rows.size(); ++r) {
        const Row& row = rows[r];
        const double wr = c * w[r];
        for (const Entry& a : row)
            for (const Entry& b : row)
                if (a.col >= b.col) S.lower(a.col, b.col) += wr * a.val * b.val;
    }
}

std::vector<Row> first_difference(const Grid1D& grid) {
    const int n = grid.n;
    const double h = grid.h();
    std::vector<Row> rows(n + 1);
    for (int k = 0; k <= n; ++k) {
        if (k > 0) rows[k].push_back({k - 1, -1.0 / h});
        if (k < n) rows[k].push_back({k, 1.0 / h});
    }
    return rows;
}

/// Rows of (shift * P + D2) over the extended nodes, P the embedding of interior nodes.
std::vector<Row> shifted_second_difference(const Grid1D& grid, double shift) {
    const int n = grid.n;
    const double h2 = grid.h() * grid.h();
    std::vector<Row> rows(n + 2);
    for (int j = 0; j <= n + 1; ++j) {
        const int c = j - 1;  // interior index of ext node j
        if (c - 1 >= 0 && c - 1 < n) rows[j].push_back({c - 1, 1.0 / h2});
        if (c >= 0 && c < n) rows[j].push_back({c, -2.0 / h2 + shift});
        if (c + 1 >= 0 && c + 1 < n) rows[j].push_back({c + 1, 1.0 / h2});
    }
    return rows;
}

std::vector<Row> identity_rows(int n) {
    std::vector<Row> rows(n);
    for (int i = 0; i < n; ++i) rows[i].push_back({i, 1.0});
    return rows;
}

SymBand diagonal_form(const Grid1D& grid, const std::vector<double>& w) {
    SymBand S(grid.n, 0);
    add_gram(S, identity_rows(grid.n), w, grid.h());
    return S;
}

}  // namespace

SymBand FormSet::energy(double s) const { return SymBand::combine(xi.norm2(), E0, s, E1); }

SymBand mass_form(const Grid1D& grid) { return diagonal_form(grid, std::vector<double>(grid.n, 1.0)); }

SymBand stiffness_form(const Grid1D& grid) {
    SymBand S(grid.n, 1);
    add_gram(S, first_difference(grid), std::vector<double>(grid.n + 1, 1.0), grid.h());
    return S;
}

SymBand hessian_form(const Grid1D& grid) {
    SymBand S(grid.n, 2);
    add_gram(S, shifted_second_difference(grid, 0.0), std::vector<double>(grid.n + 2, 1.0), grid.h());
    return S;
}

SymBand gravity_form(const DensityProfile& profile, const Grid1D& grid) {
    std::vector<double> w(grid.n);
    for (int i = 0; i < grid.n; ++i) w[i] = profile.drho(grid.node(i));
    return diagonal_form(grid, w);
}

SymBand potential_form(const DensityProfile& profile, const Grid1D& grid, Frequency xi,
                       const MagneticConfig& mag, double g) {
    const double k2 = xi.norm2();
    if (!(k2 > 0.0)) throw Error(ErrorKind::ZeroFrequency, "|xi| must be > 0");
    const double M2 = mag.magnitude * mag.magnitude;
    SymBand E0 = gravity_form(profile, grid);
    E0.scale(-g);
    if (M2 == 0.0) return E0;
    if (mag.orientation == Orientation::Horizontal) {
        const double c = M2 * xi.xi1 * xi.xi1;
        if (c == 0.0) return E0;
        E0 = SymBand::combine(1.0, E0, c, mass_form(grid));
        E0 = SymBand::combine(1.0, E0, c / k2, stiffness_form(grid));
    } else {
        E0 = SymBand::combine(1.0, E0, M2, stiffness_form(grid));
        E0 = SymBand::combine(1.0, E0, M2 / k2, hessian_form(grid));
    }
    return E0;
}

FormSet assemble_forms(const DensityProfile& profile, const Grid1D& grid, Frequency xi,
                       const MagneticConfig& mag, const PhysicalParams& params) {
    params.validate();
    mag.validate();
    profile.require_grid(grid);
    const double k2 = xi.norm2();
    if (!(k2 > 0.0)) throw Error(ErrorKind::ZeroFrequency, "|xi| must be > 0");

    FormSet f;
    f.xi = xi;
    f.mag = mag;
    f.params = params;
    f.grid = grid;
    f.profile = std::make_shared<const DensityProfile>(profile);
    f.E0 = potential_form(profile, grid, xi, mag, params.g);

    const double h = grid.h();
    const int n = grid.n;
    f.E1 = SymBand(n, 2);
    add_gram(f.E1, first_difference(grid), std::vector<double>(n + 1, 1.0), 4.0 * params.mu * k2 * h);
    add_gram(f.E1, shifted_second_difference(grid, k2), std::vector<double>(n + 2, 1.0), params.mu * h);

    f.J = SymBand(n, 1);
    std::vector<double> rho_n(n), rho_m(n + 1);
    for (int i = 0; i < n; ++i) rho_n[i] = profile.rho(grid.node(i));
    for (int k = 0; k <= n; ++k) rho_m[k] = profile.rho(grid.mid(k));
    add_gram(f.J, identity_rows(n), rho_n, k2 * h);
    add_gram(f.J, first_difference(grid), rho_m, h);
    return f;
}

}  // namespace rtmhd
