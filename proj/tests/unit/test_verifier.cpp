#include <doctest.h>

#include "rtmhd/errors.hpp"
#include "rtmhd/verifier.hpp"
#include "support/fixtures.hpp"

using namespace rtmhd;

namespace {
const Grid1D kGrid(8.0, 401);
const PhysicalParams kParams{0.05, 1.0, 1.0};

std::shared_ptr<const DensityProfile> canonical() {
    static const auto p = std::make_shared<const DensityProfile>(fixtures::make(fixtures::canonical_spec(), kGrid));
    return p;
}

RateEstimate synthetic(double rate, double wobble) {
    std::vector<double> t, y;
    for (int i = 0; i <= 200; ++i) {
        t.push_back(0.05 * i);
        y.push_back(3.0 * std::exp(rate * t.back()) * (1.0 + wobble * std::sin(7.0 * t.back())));
    }
    return measured_rate(t, y);
}
}  // namespace

TEST_CASE("rate fit on synthetic series") {
    CHECK(synthetic(0.7, 0.0).rate == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(synthetic(0.7, 0.0).residual < 1e-12);
    CHECK(std::abs(synthetic(1e-12, 0.0).rate - 1e-12) < 1e-14);
    CHECK(synthetic(0.7, 2e-3).rate == doctest::Approx(0.7).epsilon(2e-3));
    CHECK(synthetic(0.7, -2e-3).rate == doctest::Approx(0.7).epsilon(2e-3));
    CHECK(synthetic(0.7, 2e-3).residual > 1e-4);
}

TEST_CASE("degenerate series are rejected") {
    const std::vector<double> t{0, 1, 2}, y{1, 2, 3};
    CHECK_THROWS_AS(measured_rate(t, y), Error);
    std::vector<double> t2(20), y2(20, 1.0);
    for (int i = 0; i < 20; ++i) t2[i] = i;
    y2[15] = 0.0;
    try {
        measured_rate(t2, y2);
        FAIL("no throw");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::DegenerateSeries);
    }
}

TEST_CASE("zero data stays zero") {
    for (auto o : {Orientation::Horizontal, Orientation::Vertical}) {
        const LinearProblem prob{canonical(), kGrid, {1.0, 1.0}, {o, 0.3}, kParams};
        const Evolver ev(prob, 0.1);
        LinearState s = zero_state(kGrid, o);
        for (int i = 0; i < 5; ++i) ev.step(s);
        CHECK(ev.norm_u(s) == 0.0);
        CHECK(ev.norm_rho(s) == 0.0);
        CHECK(ev.norm_N(s) == 0.0);
        CHECK(s.t == doctest::Approx(0.5));
    }
}

TEST_CASE("eigenmode evolves at its growth rate") {
    for (auto mag : {MagneticConfig{Orientation::Horizontal, 0.2}, MagneticConfig{Orientation::Vertical, 0.3}}) {
        const Frequency xi{1.0, 1.0};
        const auto gr = growth_rate(assemble_forms(*canonical(), kGrid, xi, mag, kParams));
        REQUIRE(gr);
        const NormalMode m = build_mode(*gr, mag, kParams, *canonical(), kGrid);
        const LinearProblem prob{canonical(), kGrid, xi, mag, kParams};
        std::vector<double> err;
        for (double f : {0.04, 0.02}) {
            const Evolution e = evolve(eigenmode_state(m, *canonical()), prob, f / m.lambda, 3.0 / m.lambda);
            const RateEstimate r = measured_rate(e.series);
            err.push_back(std::abs(r.rate / m.lambda - 1.0));
            CHECK(err.back() < 0.02);
            CHECK(e.max_div_u < 1e-8);
        }
        CHECK(std::log2(err[0] / err[1]) == doctest::Approx(2.0).epsilon(0.1));
    }
}

TEST_CASE("random data is solenoidal and reproducible") {
    const Frequency xi{1.0, -1.0};
    for (auto o : {Orientation::Horizontal, Orientation::Vertical}) {
        const LinearState a = random_state(kGrid, xi, o, *canonical(), 42);
        const LinearState b = random_state(kGrid, xi, o, *canonical(), 42);
        const LinearState c = random_state(kGrid, xi, o, *canonical(), 43);
        CHECK(a.psi == b.psi);
        CHECK(a.psi != c.psi);
        const Evolver ev({canonical(), kGrid, xi, {o, 0.3}, kParams}, 0.05);
        CHECK(ev.div_u(a) < 1e-10);
        CHECK(ev.div_N(a) < 1e-10);
        CHECK(ev.norm_u(a) > 0.0);
    }
}

TEST_CASE("random data does not outgrow the fastest mode") {
    const MagneticConfig mag{Orientation::Vertical, 0.3};
    const Frequency xi{1.0, 0.0};
    const double lambda = growth_rate(assemble_forms(*canonical(), kGrid, xi, mag, kParams))->lambda;
    VerifyOptions o;
    o.T_factor = 30.0;
    o.record_every = 10;
    const SharpnessReport rep = sharpness_test(*canonical(), kGrid, mag, kParams, lambda, {xi}, {lambda}, {1, 2}, o);
    REQUIRE(rep.runs.size() == 2);
    for (const auto& r : rep.runs) {
        CHECK(r.measured <= lambda * 1.02);
        CHECK(r.measured >= lambda * 0.95);
    }
    // a claimed sup below the true rate is caught
    try {
        sharpness_test(*canonical(), kGrid, mag, kParams, 0.5 * lambda, {xi}, {0.5 * lambda}, {1}, o);
        FAIL("no throw");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::SharpnessViolation);
    }
}
