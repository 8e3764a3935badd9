#include <doctest.h>

#include <cmath>

#include "rtmhd/operators.hpp"

using namespace rtmhd;

namespace {
Vec sample(const std::vector<double>& x, double (*f)(double)) {
    Vec v(x.size());
    for (size_t i = 0; i < x.size(); ++i) v[i] = f(x[i]);
    return v;
}
// vanishes with its first derivative at +-4
double clamped(double x) { return std::pow(std::cos(M_PI * x / 8.0), 4); }
double clamped_d2(double x) {
    const double c = std::cos(M_PI * x / 8.0), s = std::sin(M_PI * x / 8.0), k = M_PI / 8.0;
    return k * k * (12 * c * c * s * s - 4 * c * c * c * c);
}
double clamped_d3(double x) {
    const double c = std::cos(M_PI * x / 8.0), s = std::sin(M_PI * x / 8.0), k = M_PI / 8.0;
    return k * k * k * (-24 * c * s * s * s + 40 * c * c * c * s);
}
double maxabs_diff(const Vec& a, const Vec& b, size_t skip = 0) {
    double m = 0;
    for (size_t i = skip; i + skip < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}
}  // namespace

TEST_CASE("midpoint difference is the negative adjoint of the node difference") {
    const Grid1D g(4.0, 37);
    const DiffOps D(g);
    Vec x(37), y(38);
    for (int i = 0; i < 37; ++i) x[i] = std::cos(0.3 * i * i);
    for (int k = 0; k < 38; ++k) y[k] = std::sin(1.0 + k);
    CHECK(dot(D.d1(x), y) == doctest::Approx(-dot(x, D.d1_mid(y))).epsilon(1e-13));
}

TEST_CASE("third difference factorizations agree") {
    const Grid1D g(4.0, 41);
    const DiffOps D(g);
    Vec x(41);
    for (int i = 0; i < 41; ++i) x[i] = std::exp(-0.01 * (i - 20) * (i - 20)) + 0.1 * i;
    CHECK(maxabs_diff(D.d3(x), D.d2_mid(D.d1(x))) < 1e-9 * norm2(D.d3(x)));
    const Vec e = D.d2_ext(x);
    CHECK(e.size() == 43);
    const Vec in = D.d2(x);
    for (int i = 0; i < 41; ++i) CHECK(in[i] == e[i + 1]);
}

TEST_CASE("second and third differences converge at second order on clamped data") {
    double prev2 = 0, prev3 = 0;
    for (int n : {79, 159, 319}) {
        const Grid1D g(4.0, n);
        const DiffOps D(g);
        const Vec u = sample(g.nodes(), clamped);
        const double e2 = maxabs_diff(D.d2(u), sample(g.nodes(), clamped_d2));
        // the one-sided boundary cells are first order; compare away from the walls
        const double e3 = maxabs_diff(D.d3(u), sample(g.mids(), clamped_d3), (n + 1) / 8);
        if (prev2 > 0) {
            CHECK(std::log2(prev2 / e2) == doctest::Approx(2.0).epsilon(0.05));
            CHECK(std::log2(prev3 / e3) == doctest::Approx(2.0).epsilon(0.05));
        }
        prev2 = e2;
        prev3 = e3;
    }
}

TEST_CASE("fourth-order midpoint interpolation") {
    double prev = 0;
    for (int n : {79, 159, 319}) {
        const Grid1D g(4.0, n);
        const Vec m = sample(g.mids(), clamped);
        const double e = maxabs_diff(mid_to_node(m), sample(g.nodes(), clamped));
        if (prev > 0) CHECK(std::log2(prev / e) > 3.8);
        prev = e;
    }
}
