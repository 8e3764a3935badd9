#include <doctest.h>

#include <filesystem>
#include <set>

#include "rtmhd/dispersion.hpp"
#include "rtmhd/errors.hpp"
#include "rtmhd/io.hpp"
#include "support/fixtures.hpp"

using namespace rtmhd;

namespace {
const Grid1D kGrid(8.0, 401);
const PhysicalParams kParams{0.05, 1.0, 1.0};

ProfileSpec scaled(ProfileSpec s, double c) {
    s.base_density *= c;
    for (auto& b : s.bumps) b.amplitude *= c;
    return s;
}
}  // namespace

TEST_CASE("critical number on one grid matches the dense oracle") {
    const auto c = fixtures::make(fixtures::canonical_spec(), kGrid);
    CHECK(critical_number_on(c, Grid1D(8.0, 1001), 1.0) == doctest::Approx(1.2941752821449348).epsilon(1e-11));
    const auto f = fixtures::make(fixtures::finite_spec(), kGrid);
    CHECK(critical_number_on(f, kGrid, 1.0) == doctest::Approx(0.6096122880702483).epsilon(1e-11));
}

TEST_CASE("positive total jump gives an infinite critical number") {
    const auto c = fixtures::make(fixtures::canonical_spec(), kGrid);
    const CriticalNumber cn = critical_number(c, kGrid, 1.0);
    CHECK(cn.infinite);
    REQUIRE(cn.trace.size() >= 3);
    for (size_t i = 1; i < cn.trace.size(); ++i) {
        CHECK(cn.trace[i].first == 2 * cn.trace[i - 1].first);
        CHECK(cn.trace[i].second * cn.trace[i].second >= 1.5 * cn.trace[i - 1].second * cn.trace[i - 1].second);
    }
}

TEST_CASE("negative total jump converges to the free-end limit") {
    const auto f = fixtures::make(fixtures::finite_spec(), kGrid);
    const CriticalNumber cn = critical_number(f, kGrid, 1.0);
    REQUIRE_FALSE(cn.infinite);
    const size_t m = cn.trace.size();
    REQUIRE(m >= 3);
    CHECK(std::abs(cn.trace[m - 1].second / cn.trace[m - 2].second - 1.0) < 1e-4);
    CHECK(cn.value == cn.trace.back().second);
    // Lz -> infinity limit at the same spacing, with psi constant outside the support
    const double limit = 0.766495588305779;
    CHECK(cn.value < limit);
    CHECK(std::abs(cn.value / limit - 1.0) < 2e-4);
    // the truncation error decays like 1/Lz
    const double richardson = 2 * cn.trace[m - 1].second - cn.trace[m - 2].second;
    CHECK(std::abs(richardson / limit - 1.0) < 1e-6);
}

TEST_CASE("critical number scales like the square root of the amplitude") {
    for (double c : {0.25, 4.0}) {
        const auto a = fixtures::make(fixtures::finite_spec(), kGrid);
        const auto b = fixtures::make(scaled(fixtures::finite_spec(), c), kGrid);
        CHECK(critical_number_on(b, kGrid, 1.0) / critical_number_on(a, kGrid, 1.0) ==
              doctest::Approx(std::sqrt(c)).epsilon(1e-10));
    }
}

TEST_CASE("explicit grid sequences must double") {
    const auto f = fixtures::make(fixtures::finite_spec(), kGrid);
    CHECK_THROWS_AS(critical_number(f, std::vector<Grid1D>{kGrid, Grid1D(16.0, 803)}, 1.0), Error);
    const std::vector<Grid1D> grids{kGrid, Grid1D(16.0, 803), Grid1D(32.0, 1607)};
    CHECK(critical_number(f, grids, 1.0).trace.size() == 3);
}

TEST_CASE("horizontal frequency threshold") {
    const auto c = fixtures::make(fixtures::canonical_spec(), kGrid);
    const double S = critical_freq_horizontal(c, kGrid, {0.5, 1.0}, 1.0, 1.0);
    CHECK(S == doctest::Approx(0.8007755307094313).epsilon(1e-9));
    CHECK_FALSE(in_growing_domain(c, kGrid, {0.5, 1.0}, {Orientation::Horizontal, 1.0}, kParams));
    // same direction, inside the threshold
    CHECK(in_growing_domain(c, kGrid, {0.25, 0.5}, {Orientation::Horizontal, 1.0}, kParams));
    CHECK_THROWS_AS(critical_freq_horizontal(c, kGrid, {0.0, 1.0}, 1.0, 1.0), Error);
}

TEST_CASE("vertical frequency threshold") {
    const auto f = fixtures::make(fixtures::finite_spec(), kGrid);
    const double M = 0.5 * 0.6096122880702483;
    const double v = critical_freq_vertical(f, kGrid, M, 1.0);
    CHECK(critical_freq_vertical_direct(f, kGrid, M, 1.0) == doctest::Approx(0.42285582937800537).epsilon(1e-9));
    // the membership noise floor moves the bisected edge by a few 1e-9 relative
    CHECK(v == doctest::Approx(0.42285582937800537).epsilon(1e-7));
    const MagneticConfig mag{Orientation::Vertical, M};
    CHECK(in_growing_domain(f, kGrid, {0.0, 0.43}, mag, kParams));
    CHECK_FALSE(in_growing_domain(f, kGrid, {0.0, 0.41}, mag, kParams));
    const auto c = fixtures::make(fixtures::canonical_spec(), kGrid);
    CHECK(critical_freq_vertical(c, kGrid, 0.3, 1.0) == 0.0);
    try {
        critical_freq_vertical(f, kGrid, 0.7, 1.0);
        FAIL("no throw");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::OutOfRange);
    }
}

TEST_CASE("sweep is symmetric and membership matches the rates") {
    const auto c = fixtures::make(fixtures::canonical_spec(), kGrid);
    for (auto o : {Orientation::Horizontal, Orientation::Vertical}) {
        const MagneticConfig mag{o, 0.3};
        SweepOptions so;
        so.use_symmetry = false;
        const DispersionTable t = lattice_sweep(c, kGrid, mag, kParams, 3.0, so);
        const DispersionTable s = lattice_sweep(c, kGrid, mag, kParams, 3.0);
        REQUIRE(t.entries.size() == s.entries.size());
        for (size_t i = 0; i < t.entries.size(); ++i) {
            const auto& e = t.entries[i];
            CHECK(e.error.empty());
            CHECK(e.member == e.lambda.has_value());
            CHECK(s.entries[i].member == e.member);
            if (e.lambda) CHECK(std::abs(*s.entries[i].lambda - *e.lambda) <= 1e-8);
            for (const auto& f : t.entries)
                if (std::abs(f.k1) == std::abs(e.k1) && std::abs(f.k2) == std::abs(e.k2))
                    CHECK(f.member == e.member);
        }
    }
}

TEST_CASE("sup rate and tie breaking") {
    const auto c = fixtures::make(fixtures::canonical_spec(), kGrid);
    const DispersionTable t = lattice_sweep(c, kGrid, {}, kParams, 3.0);
    const SupRate s = sup_rate(t);
    CHECK(s.Lambda == doctest::Approx(0.33033329132225364).epsilon(1e-7));
    CHECK(s.Lambda == s.Lambda_star);
    // ties among (+-1, +-1) resolve to the lexicographically smallest
    CHECK(s.xi1.xi1 == -1.0);
    CHECK(s.xi1.xi2 == -1.0);
    CHECK(s.xi2.xi1 == 1.0);
    CHECK(s.xi2.xi2 == 1.0);
    CHECK_FALSE(s.on_boundary);
    // radius 1 only reaches the axes, so the maximum sits on the outer shell
    CHECK(sup_rate(lattice_sweep(c, kGrid, {}, kParams, 1.0)).on_boundary);
}

TEST_CASE("an empty unstable domain is reported") {
    const auto c = fixtures::make(fixtures::canonical_spec(), kGrid);
    const DispersionTable t = lattice_sweep(c, kGrid, {Orientation::Horizontal, 5.0}, kParams, 1.0);
    // only xi1 = 0 survives a strong horizontal field
    std::set<std::pair<int, int>> members;
    for (const auto& e : t.entries)
        if (e.member) members.insert({e.k1, e.k2});
    CHECK(members == std::set<std::pair<int, int>>{{0, -1}, {0, 1}});
    DispersionTable empty = t;
    for (auto& e : empty.entries) {
        e.member = false;
        e.lambda.reset();
    }
    try {
        sup_rate(empty);
        FAIL("no throw");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::EmptyDomain);
    }
}

TEST_CASE("dispersion csv") {
    const auto c = fixtures::make(fixtures::canonical_spec(), kGrid);
    const DispersionTable t = lattice_sweep(c, kGrid, {}, kParams, 1.0);
    const auto path = (std::filesystem::temp_directory_path() / "rtmhd_disp.csv").string();
    write_dispersion_csv(t, path);
    const std::string text = read_text_file(path);
    CHECK(text.rfind("xi1,xi2,member,lambda\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 5);
    CHECK_THROWS_AS(write_dispersion_csv(t, ""), Error);
}
