#include "rtmhd/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rtmhd/errors.hpp"

namespace rtmhd {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Counter {
    const SymBand& A;
    const SymBand& B;
    int max_retries;
    double scale_a;
    double scale_b;
    int factorizations = 0;

    int operator()(double sigma) {
        BandLdlt f;
        for (int attempt = 0; attempt <= max_retries; ++attempt) {
            const double scale = scale_a + std::abs(sigma) * scale_b;
            ++factorizations;
            if (f.factor(A, &B, sigma, kEps * scale)) return f.negative_pivots();
            const double step = 1e-13 * std::max(1.0, std::abs(sigma)) * std::ldexp(1.0, attempt);
            sigma += (attempt % 2 == 0) ? step : -2.0 * step;
        }
        throw Error(ErrorKind::FactorizationBreakdown,
                    "vanishing pivot persists near shift " + std::to_string(sigma));
    }
};

double b_norm(const SymBand& B, const std::vector<double>& x) {
    return std::sqrt(std::max(B.quadratic(x), 0.0));
}

}  // namespace

int inertia_count(const SymBand& A, const SymBand& B, double sigma, int max_retries) {
    if (A.size() != B.size()) throw Error(ErrorKind::InvalidArgument, "pencil size mismatch");
    Counter c{A, B, max_retries, A.max_abs(), B.max_abs()};
    return c(sigma);
}

EigenPair min_generalized_eig(const SymBand& A, const SymBand& B, const EigOptions& opts) {
    const int n = A.size();
    if (n != B.size()) throw Error(ErrorKind::InvalidArgument, "pencil size mismatch");
    Counter count{A, B, opts.max_retries, A.max_abs(), B.max_abs()};

    // Bracket [lo, hi] with count(lo) == 0 and count(hi) >= 1.
    double lo = 0.0, hi = 0.0;
    bool have_lo = false, have_hi = false;
    if (opts.lower_hint && count(*opts.lower_hint) == 0) {
        lo = *opts.lower_hint;
        have_lo = true;
    }
    if (opts.upper_hint && count(*opts.upper_hint) >= 1) {
        hi = *opts.upper_hint;
        have_hi = true;
    }
    if (!have_lo || !have_hi) {
        double start = have_lo ? lo : (have_hi ? hi : 0.0);
        if (!have_lo && !have_hi) {
            if (count(start) >= 1) {
                hi = start;
                have_hi = true;
            } else {
                lo = start;
                have_lo = true;
            }
        }
        double step = std::max(1.0, std::abs(start));
        while (!have_lo) {
            lo = (have_hi ? hi : start) - step;
            if (count(lo) == 0) have_lo = true; else { hi = lo; have_hi = true; }
            step *= 2.0;
            if (!std::isfinite(lo)) throw Error(ErrorKind::FactorizationBreakdown, "no lower bracket");
        }
        step = std::max(1.0, std::abs(lo));
        while (!have_hi) {
            hi = lo + step;
            if (count(hi) >= 1) have_hi = true; else lo = hi;
            step *= 2.0;
            if (!std::isfinite(hi)) throw Error(ErrorKind::FactorizationBreakdown, "no upper bracket");
        }
    }

    while (hi - lo > opts.tol * std::max(1.0, std::min(std::abs(lo), std::abs(hi)))) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (count(mid) >= 1) hi = mid; else lo = mid;
    }

    // Inverse iteration at the lower end, where A - lo B is positive definite.
    BandLdlt f;
    double sigma = lo;
    bool ok = false;
    for (int attempt = 0; attempt <= opts.max_retries && !ok; ++attempt) {
        ++count.factorizations;
        ok = f.factor(A, &B, sigma, 0.0);
        if (!ok) sigma -= 1e-13 * std::max(1.0, std::abs(sigma)) * std::ldexp(1.0, attempt);
    }
    if (!ok) throw Error(ErrorKind::FactorizationBreakdown, "singular shift in inverse iteration");

    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = 1.0 + 0.25 * std::sin(1.3 * i + 0.7);
    EigenPair out;
    auto refine = [&](int steps) {
        for (int it = 0; it < steps; ++it) {
            x = f.solve(B.apply(x));
            const double nb = b_norm(B, x);
            if (!(nb > 0.0) || !std::isfinite(nb))
                throw Error(ErrorKind::FactorizationBreakdown, "inverse iteration lost the vector");
            for (double& v : x) v /= nb;
        }
        const auto Ax = A.apply(x);
        const auto Bx = B.apply(x);
        double xAx = 0.0, xBx = 0.0;
        for (int i = 0; i < n; ++i) {
            xAx += x[i] * Ax[i];
            xBx += x[i] * Bx[i];
        }
        out.value = xAx / xBx;
        double rr = 0.0, bb = 0.0;
        for (int i = 0; i < n; ++i) {
            const double r = Ax[i] - out.value * Bx[i];
            rr += r * r;
            bb += Bx[i] * Bx[i];
        }
        out.residual = std::sqrt(rr / bb);
    };
    refine(opts.inverse_steps);
    for (int extra = 0; extra < 6 && out.residual > opts.residual_limit; ++extra) refine(5);

    int imax = 0;
    for (int i = 1; i < n; ++i)
        if (std::abs(x[i]) > std::abs(x[imax])) imax = i;
    if (x[imax] < 0.0)
        for (double& v : x) v = -v;
    out.vec = std::move(x);
    out.iterations = count.factorizations;
    return out;
}

EigenPair max_generalized_eig(const SymBand& A, const SymBand& B, const EigOptions& opts) {
    SymBand negA = A;
    negA.scale(-1.0);
    EigOptions o = opts;
    o.lower_hint.reset();
    o.upper_hint.reset();
    if (opts.upper_hint) o.lower_hint = -*opts.upper_hint;
    if (opts.lower_hint) o.upper_hint = -*opts.lower_hint;
    EigenPair p = min_generalized_eig(negA, B, o);
    p.value = -p.value;
    return p;
}

}  // namespace rtmhd
