#include <doctest.h>

#include "rtmhd/eigensolver.hpp"
#include "rtmhd/errors.hpp"
#include "rtmhd/forms.hpp"
#include "rtmhd/operators.hpp"
#include "support/fixtures.hpp"

using namespace rtmhd;

namespace {
const Grid1D kGrid(8.0, 201);
const PhysicalParams kParams{0.05, 1.0, 1.0};

Vec trial(int n, double shift) {
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = std::sin(0.07 * i + shift) * std::exp(-1e-4 * (i - n / 2) * (i - n / 2));
    return v;
}

double weighted(const Vec& a, const Vec& b, double h) { return h * dot(a, b); }
}  // namespace

TEST_CASE("forms reproduce the discrete energies") {
    const auto p = fixtures::make(fixtures::canonical_spec(), kGrid);
    const DiffOps D(kGrid);
    const double h = kGrid.h();
    const Vec psi = trial(kGrid.n, 0.3);
    const Vec d = D.d1(psi), dd = D.d2_ext(psi);
    for (auto o : {Orientation::Horizontal, Orientation::Vertical}) {
        const Frequency xi{0.7, -1.1};
        const double k2 = xi.norm2(), M = 0.4;
        const FormSet f = assemble_forms(p, kGrid, xi, {o, M}, kParams);
        double grav = 0;
        for (int i = 0; i < kGrid.n; ++i) grav += h * p.drho(kGrid.node(i)) * psi[i] * psi[i];
        const double mag = o == Orientation::Horizontal
                               ? M * M * xi.xi1 * xi.xi1 * (weighted(psi, psi, h) + weighted(d, d, h) / k2)
                               : M * M * (weighted(d, d, h) + weighted(dd, dd, h) / k2);
        CHECK(f.E0.quadratic(psi) == doctest::Approx(mag - kParams.g * grav).epsilon(1e-12));

        Vec q = dd;
        for (int i = 0; i < kGrid.n; ++i) q[i + 1] += k2 * psi[i];
        const double visc = kParams.mu * (4 * k2 * weighted(d, d, h) + weighted(q, q, h));
        CHECK(f.E1.quadratic(psi) == doctest::Approx(visc).epsilon(1e-12));

        double kin = 0;
        for (int i = 0; i < kGrid.n; ++i) kin += k2 * h * p.rho(kGrid.node(i)) * psi[i] * psi[i];
        for (int k = 0; k <= kGrid.n; ++k) kin += h * p.rho(kGrid.mid(k)) * d[k] * d[k];
        CHECK(f.J.quadratic(psi) == doctest::Approx(kin).epsilon(1e-12));
    }
}

TEST_CASE("J is positive definite and E1 positive semidefinite") {
    const auto p = fixtures::make(fixtures::double_spec(), kGrid);
    const FormSet f = assemble_forms(p, kGrid, {1.0, 2.0}, {Orientation::Vertical, 0.3}, kParams);
    const SymBand I = mass_form(kGrid);
    CHECK(inertia_count(f.J, I, 0.0) == 0);
    CHECK(inertia_count(f.E1, I, -1e-12) == 0);
    CHECK(min_generalized_eig(f.E1, f.J).value > 0.0);
}

TEST_CASE("forms depend on xi only through its sign class") {
    const auto p = fixtures::make(fixtures::canonical_spec(), kGrid);
    for (auto o : {Orientation::Horizontal, Orientation::Vertical}) {
        const MagneticConfig m{o, 0.5};
        const FormSet a = assemble_forms(p, kGrid, {1.0, 2.0}, m, kParams);
        for (Frequency s : {Frequency{-1.0, 2.0}, Frequency{1.0, -2.0}, Frequency{-1.0, -2.0}}) {
            const FormSet b = assemble_forms(p, kGrid, s, m, kParams);
            CHECK(a.E0 == b.E0);
            CHECK(a.E1 == b.E1);
            CHECK(a.J == b.J);
        }
    }
}

TEST_CASE("horizontal field does not act on xi1 = 0") {
    const auto p = fixtures::make(fixtures::canonical_spec(), kGrid);
    const FormSet a = assemble_forms(p, kGrid, {0.0, 1.5}, {Orientation::Horizontal, 2.0}, kParams);
    SymBand g = gravity_form(p, kGrid);
    g.scale(-kParams.g);
    CHECK(fixtures::dense(a.E0).isApprox(fixtures::dense(g), 1e-14));
    CHECK(potential_form(p, kGrid, {0.0, 1.5}, {Orientation::Horizontal, 2.0}, kParams.g) == a.E0);
}

TEST_CASE("zero frequency is rejected") {
    const auto p = fixtures::make(fixtures::canonical_spec(), kGrid);
    try {
        assemble_forms(p, kGrid, {0.0, 0.0}, {}, kParams);
        FAIL("no throw");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::ZeroFrequency);
    }
}
