#include "rtmhd/verifier.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <sstream>
#include <thread>

#include "rtmhd/errors.hpp"
#include "rtmhd/io.hpp"

namespace rtmhd {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Trip = Eigen::Triplet<double>;
using EVec = Eigen::VectorXd;

/// Unknown layout: per cell k the block (phi_k, theta_k, pi_k, psi_k), the last block
/// without psi since there are n nodes and n+1 midpoints.
struct Layout {
    int n;
    int size() const { return 4 * n + 3; }
    int phi(int k) const { return 4 * k; }
    int theta(int k) const { return 4 * k + 1; }
    int pi(int k) const { return 4 * k + 2; }
    int psi(int i) const { return 4 * i + 3; }
};

/// Auxiliary unknowns (r, a1, a2, a3) stacked in one vector.
struct AuxLayout {
    int n;
    Orientation o;
    int a12() const { return o == Orientation::Horizontal ? n + 1 : n + 2; }
    int a3n() const { return o == Orientation::Horizontal ? n : n + 1; }
    int r(int i) const { return i; }
    int a1(int j) const { return n + j; }
    int a2(int j) const { return n + a12() + j; }
    int a3(int j) const { return n + 2 * a12() + j; }
    int size() const { return n + 2 * a12() + a3n(); }
};

}  // namespace

struct Evolver::Impl {
    Layout lay;
    AuxLayout aux;
    SpMat explicit_op;  // Mass/dt + L/2 + dt Q/4 on velocity entries
    SpMat force;        // auxiliary -> momentum rows
    SpMat rate;         // velocity -> auxiliary time derivative
    Eigen::SparseLU<SpMat> lu;
};

LinearState zero_state(const Grid1D& grid, Orientation o) {
    const int n = grid.n;
    LinearState s;
    s.phi.assign(n + 1, 0.0);
    s.theta.assign(n + 1, 0.0);
    s.pi.assign(n + 1, 0.0);
    s.psi.assign(n, 0.0);
    s.r.assign(n, 0.0);
    const int a12 = o == Orientation::Horizontal ? n + 1 : n + 2;
    const int a3 = o == Orientation::Horizontal ? n : n + 1;
    s.a1.assign(a12, 0.0);
    s.a2.assign(a12, 0.0);
    s.a3.assign(a3, 0.0);
    return s;
}

Evolver::Evolver(LinearProblem problem, double dt)
    : problem_(std::move(problem)), dt_(dt), impl_(std::make_unique<Impl>()) {
    if (!(dt > 0.0)) throw Error(ErrorKind::InvalidArgument, "dt must be > 0");
    const auto& P = *problem_.profile;
    const Grid1D& grid = problem_.grid;
    P.require_grid(grid);
    problem_.params.validate();
    problem_.mag.validate();
    const int n = grid.n;
    const double h = grid.h(), h2 = h * h;
    const double x1 = problem_.xi.xi1, x2 = problem_.xi.xi2, k2 = problem_.xi.norm2();
    if (!(k2 > 0.0)) throw Error(ErrorKind::ZeroFrequency, "|xi| must be > 0");
    const double mu = problem_.params.mu, g = problem_.params.g;
    const double M = problem_.mag.magnitude;
    const Orientation o = problem_.mag.orientation;

    Impl& im = *impl_;
    im.lay = {n};
    im.aux = {n, o};
    const Layout& L = im.lay;
    const AuxLayout& A = im.aux;
    const int N = L.size();

    std::vector<Trip> mass, visc, grad, div, force, rate;
    for (int k = 0; k <= n; ++k) {
        const double rm = P.rho(grid.mid(k));
        for (int c : {L.phi(k), L.theta(k)}) {
            mass.emplace_back(c, c, rm);
            // mu (D2_mid - k2) with zero values one cell beyond the ends
            visc.emplace_back(c, c, mu * (-2.0 / h2 - k2));
            if (k > 0) visc.emplace_back(c, c - 4, mu / h2);
            if (k < n) visc.emplace_back(c, c + 4, mu / h2);
        }
        grad.emplace_back(L.phi(k), L.pi(k), -x1);
        grad.emplace_back(L.theta(k), L.pi(k), -x2);
        div.emplace_back(L.pi(k), L.phi(k), x1);
        div.emplace_back(L.pi(k), L.theta(k), x2);
        if (k < n) div.emplace_back(L.pi(k), L.psi(k), 1.0 / h);
        if (k > 0) div.emplace_back(L.pi(k), L.psi(k - 1), -1.0 / h);
    }
    for (int i = 0; i < n; ++i) {
        const int c = L.psi(i);
        mass.emplace_back(c, c, P.rho(grid.node(i)));
        visc.emplace_back(c, c, mu * (-2.0 / h2 - k2));
        if (i > 0) visc.emplace_back(c, L.psi(i - 1), mu / h2);
        if (i + 1 < n) visc.emplace_back(c, L.psi(i + 1), mu / h2);
        grad.emplace_back(c, L.pi(i + 1), 1.0 / h);
        grad.emplace_back(c, L.pi(i), -1.0 / h);
        // gravity: -g r; density: r_t = -rho' psi
        force.emplace_back(c, A.r(i), -g);
        rate.emplace_back(A.r(i), c, -P.drho(grid.node(i)));
    }
    if (M != 0.0) {
        if (o == Orientation::Horizontal) {
            for (int k = 0; k <= n; ++k) {
                force.emplace_back(L.theta(k), A.a2(k), -M * x1);
                force.emplace_back(L.theta(k), A.a1(k), M * x2);
                rate.emplace_back(A.a1(k), L.phi(k), M * x1);
                rate.emplace_back(A.a2(k), L.theta(k), M * x1);
            }
            for (int i = 0; i < n; ++i) {
                force.emplace_back(L.psi(i), A.a3(i), -M * x1);
                force.emplace_back(L.psi(i), A.a1(i + 1), -M / h);
                force.emplace_back(L.psi(i), A.a1(i), M / h);
                rate.emplace_back(A.a3(i), L.psi(i), M * x1);
            }
        } else {
            for (int k = 0; k <= n; ++k) {
                // M (D_ext->mid a + xi a3)
                force.emplace_back(L.phi(k), A.a1(k + 1), M / h);
                force.emplace_back(L.phi(k), A.a1(k), -M / h);
                force.emplace_back(L.phi(k), A.a3(k), M * x1);
                force.emplace_back(L.theta(k), A.a2(k + 1), M / h);
                force.emplace_back(L.theta(k), A.a2(k), -M / h);
                force.emplace_back(L.theta(k), A.a3(k), M * x2);
                // a3_t = M D1 psi
                if (k < n) rate.emplace_back(A.a3(k), L.psi(k), M / h);
                if (k > 0) rate.emplace_back(A.a3(k), L.psi(k - 1), -M / h);
            }
            for (int j = 0; j <= n + 1; ++j) {
                // a_t = M D_mid->ext u
                if (j <= n) {
                    rate.emplace_back(A.a1(j), L.phi(j), M / h);
                    rate.emplace_back(A.a2(j), L.theta(j), M / h);
                }
                if (j > 0) {
                    rate.emplace_back(A.a1(j), L.phi(j - 1), -M / h);
                    rate.emplace_back(A.a2(j), L.theta(j - 1), -M / h);
                }
            }
        }
    }

    auto build = [](int r, int c, const std::vector<Trip>& t) {
        SpMat m(r, c);
        m.setFromTriplets(t.begin(), t.end());
        return m;
    };
    const SpMat Mm = build(N, N, mass), Lv = build(N, N, visc), G = build(N, N, grad),
                D = build(N, N, div);
    im.force = build(N, A.size(), force);
    im.rate = build(A.size(), N, rate);
    const SpMat Q = im.force * im.rate;
    im.explicit_op = Mm / dt + 0.5 * Lv + (0.25 * dt) * Q;
    SpMat lhs = Mm / dt - 0.5 * Lv - (0.25 * dt) * Q + G + D;
    lhs.makeCompressed();
    im.lu.analyzePattern(lhs);
    im.lu.factorize(lhs);
    if (im.lu.info() != Eigen::Success)
        throw Error(ErrorKind::SolverSingular, "step matrix is singular: " + im.lu.lastErrorMessage());
}

Evolver::~Evolver() = default;
Evolver::Evolver(Evolver&&) noexcept = default;
Evolver& Evolver::operator=(Evolver&&) noexcept = default;

namespace {

EVec pack(const Layout& L, const LinearState& s) {
    EVec x = EVec::Zero(L.size());
    for (int k = 0; k <= L.n; ++k) {
        x[L.phi(k)] = s.phi[k];
        x[L.theta(k)] = s.theta[k];
        x[L.pi(k)] = s.pi[k];
    }
    for (int i = 0; i < L.n; ++i) x[L.psi(i)] = s.psi[i];
    return x;
}

void unpack(const Layout& L, const EVec& x, LinearState& s) {
    for (int k = 0; k <= L.n; ++k) {
        s.phi[k] = x[L.phi(k)];
        s.theta[k] = x[L.theta(k)];
        s.pi[k] = x[L.pi(k)];
    }
    for (int i = 0; i < L.n; ++i) s.psi[i] = x[L.psi(i)];
}

EVec pack_aux(const AuxLayout& A, const LinearState& s) {
    EVec y(A.size());
    for (int i = 0; i < A.n; ++i) y[A.r(i)] = s.r[i];
    for (int j = 0; j < A.a12(); ++j) {
        y[A.a1(j)] = s.a1[j];
        y[A.a2(j)] = s.a2[j];
    }
    for (int j = 0; j < A.a3n(); ++j) y[A.a3(j)] = s.a3[j];
    return y;
}

void unpack_aux(const AuxLayout& A, const EVec& y, LinearState& s) {
    for (int i = 0; i < A.n; ++i) s.r[i] = y[A.r(i)];
    for (int j = 0; j < A.a12(); ++j) {
        s.a1[j] = y[A.a1(j)];
        s.a2[j] = y[A.a2(j)];
    }
    for (int j = 0; j < A.a3n(); ++j) s.a3[j] = y[A.a3(j)];
}

void check_shape(const Grid1D& grid, Orientation o, const LinearState& s) {
    const LinearState z = zero_state(grid, o);
    if (s.phi.size() != z.phi.size() || s.theta.size() != z.theta.size() ||
        s.pi.size() != z.pi.size() || s.psi.size() != z.psi.size() || s.r.size() != z.r.size() ||
        s.a1.size() != z.a1.size() || s.a2.size() != z.a2.size() || s.a3.size() != z.a3.size())
        throw Error(ErrorKind::InvalidArgument, "state does not match the grid and orientation");
}

}  // namespace

void Evolver::step(LinearState& s) const {
    const Impl& im = *impl_;
    const EVec x0 = pack(im.lay, s);
    const EVec y0 = pack_aux(im.aux, s);
    EVec rhs = im.explicit_op * x0 + im.force * y0;
    for (int k = 0; k <= im.lay.n; ++k) rhs[im.lay.pi(k)] = 0.0;
    const EVec x1 = im.lu.solve(rhs);
    EVec u_sum = x0 + x1;
    for (int k = 0; k <= im.lay.n; ++k) u_sum[im.lay.pi(k)] = 0.0;
    const EVec y1 = y0 + (0.5 * dt_) * (im.rate * u_sum);
    unpack(im.lay, x1, s);
    unpack_aux(im.aux, y1, s);
    s.t += dt_;
}

double Evolver::norm_u(const LinearState& s) const {
    const double h = problem_.grid.h();
    return std::sqrt(h * (dot(s.phi, s.phi) + dot(s.theta, s.theta) + dot(s.psi, s.psi)));
}

double Evolver::norm_rho(const LinearState& s) const {
    return std::sqrt(problem_.grid.h() * dot(s.r, s.r));
}

double Evolver::norm_N(const LinearState& s) const {
    const double h = problem_.grid.h();
    return std::sqrt(h * (dot(s.a1, s.a1) + dot(s.a2, s.a2) + dot(s.a3, s.a3)));
}

double Evolver::div_u(const LinearState& s) const {
    const DiffOps ops(problem_.grid);
    const Vec d = ops.d1(s.psi);
    const double x1 = problem_.xi.xi1, x2 = problem_.xi.xi2;
    double m = 0.0, scale = 0.0;
    for (size_t k = 0; k < d.size(); ++k) {
        m = std::max(m, std::abs(x1 * s.phi[k] + x2 * s.theta[k] + d[k]));
        scale = std::max({scale, std::abs(x1 * s.phi[k]), std::abs(x2 * s.theta[k]), std::abs(d[k])});
    }
    return scale > 0.0 ? m / scale : 0.0;
}

double Evolver::div_N(const LinearState& s) const {
    const DiffOps ops(problem_.grid);
    const Vec d = problem_.mag.orientation == Orientation::Horizontal ? ops.d1(s.a3)
                                                                     : ops.d1_mid_ext(s.a3);
    const double x1 = problem_.xi.xi1, x2 = problem_.xi.xi2;
    double m = 0.0, scale = 0.0;
    for (size_t k = 0; k < d.size(); ++k) {
        m = std::max(m, std::abs(x1 * s.a1[k] + x2 * s.a2[k] + d[k]));
        scale = std::max({scale, std::abs(x1 * s.a1[k]), std::abs(x2 * s.a2[k]), std::abs(d[k])});
    }
    return scale > 0.0 ? m / scale : 0.0;
}

Evolution evolve(const LinearState& init, const LinearProblem& problem, double dt, double T,
                 int record_every) {
    if (!(T > 0.0)) throw Error(ErrorKind::InvalidArgument, "T must be > 0");
    if (record_every < 1) throw Error(ErrorKind::InvalidArgument, "record_every must be >= 1");
    check_shape(problem.grid, problem.mag.orientation, init);
    const Evolver ev(problem, dt);
    const long steps = std::max(1L, std::lround(T / dt));
    Evolution out;
    LinearState s = init;
    auto record = [&]() {
        const double d = ev.div_u(s);
        out.max_div_u = std::max(out.max_div_u, d);
        out.series.push_back({s.t, ev.norm_rho(s), ev.norm_u(s), ev.norm_N(s), d});
    };
    record();
    for (long k = 1; k <= steps; ++k) {
        ev.step(s);
        if (k % record_every == 0 || k == steps) record();
        else out.max_div_u = std::max(out.max_div_u, ev.div_u(s));
    }
    out.final_state = std::move(s);
    return out;
}

RateEstimate measured_rate(const std::vector<double>& t, const std::vector<double>& norm) {
    if (t.size() != norm.size()) throw Error(ErrorKind::InvalidArgument, "series length mismatch");
    if (t.size() < 10) throw Error(ErrorKind::InvalidArgument, "need at least 10 samples");
    for (double v : norm)
        if (!(v > 0.0) || !std::isfinite(v))
            throw Error(ErrorKind::DegenerateSeries, "series contains a non-positive or non-finite norm");
    const size_t start = t.size() / 2;
    const size_t m = t.size() - start;
    double st = 0.0, sy = 0.0;
    for (size_t i = start; i < t.size(); ++i) {
        st += t[i];
        sy += std::log(norm[i]);
    }
    const double tm = st / m, ym = sy / m;
    double stt = 0.0, sty = 0.0;
    for (size_t i = start; i < t.size(); ++i) {
        stt += (t[i] - tm) * (t[i] - tm);
        sty += (t[i] - tm) * (std::log(norm[i]) - ym);
    }
    RateEstimate r;
    r.rate = sty / stt;
    double rr = 0.0;
    for (size_t i = start; i < t.size(); ++i) {
        const double e = std::log(norm[i]) - (ym + r.rate * (t[i] - tm));
        rr += e * e;
    }
    r.residual = std::sqrt(rr / m);
    r.samples = static_cast<int>(m);
    return r;
}

RateEstimate measured_rate(const std::vector<Sample>& series) {
    std::vector<double> t, v;
    for (const auto& s : series) {
        t.push_back(s.t);
        v.push_back(s.norm_u);
    }
    return measured_rate(t, v);
}

LinearState eigenmode_state(const NormalMode& mode, const DensityProfile& profile) {
    const Orientation o = mode.mag.orientation;
    LinearState s = zero_state(mode.grid, o);
    const double lam = mode.lambda, M = mode.mag.magnitude;
    for (size_t k = 0; k < s.phi.size(); ++k) {
        s.phi[k] = lam * mode.phi[k];
        s.theta[k] = lam * mode.theta[k];
        s.pi[k] = lam * mode.pi[k];
    }
    for (int i = 0; i < mode.grid.n; ++i) {
        s.psi[i] = lam * mode.psi[i];
        s.r[i] = -profile.drho(mode.grid.node(i)) * mode.psi[i];
    }
    const DiffOps ops(mode.grid);
    if (o == Orientation::Horizontal) {
        const double c = M * mode.xi.xi1;
        for (size_t k = 0; k < s.a1.size(); ++k) {
            s.a1[k] = c * mode.phi[k];
            s.a2[k] = c * mode.theta[k];
        }
        for (size_t i = 0; i < s.a3.size(); ++i) s.a3[i] = c * mode.psi[i];
    } else {
        const Vec d1 = ops.d1_mid_ext(mode.phi), d2 = ops.d1_mid_ext(mode.theta), d3 = ops.d1(mode.psi);
        for (size_t j = 0; j < s.a1.size(); ++j) {
            s.a1[j] = M * d1[j];
            s.a2[j] = M * d2[j];
        }
        for (size_t k = 0; k < s.a3.size(); ++k) s.a3[k] = M * d3[k];
    }
    return s;
}

namespace {

/// Sum of a few random Gaussians centred in the core window.
Vec random_profile(std::mt19937_64& rng, const std::vector<double>& x, double Lz) {
    std::uniform_real_distribution<double> centre(-0.25 * Lz, 0.25 * Lz), width(0.3, 1.0);
    std::normal_distribution<double> amp(0.0, 1.0);
    Vec f(x.size(), 0.0);
    for (int b = 0; b < 4; ++b) {
        const double c = centre(rng), w = width(rng), a = amp(rng);
        for (size_t i = 0; i < x.size(); ++i) f[i] += a * std::exp(-std::pow((x[i] - c) / w, 2));
    }
    return f;
}

/// Random horizontal pair (p1, p2) on points x and the vertical component on the staggered
/// partner grid so that xi1 p1 + xi2 p2 + d/dx3 p3 = 0 holds exactly; p3 has x.size()-1 entries
/// and vanishes one cell beyond both ends.
void random_solenoidal(std::mt19937_64& rng, const std::vector<double>& x, double Lz, double h,
                       Frequency xi, Vec& p1, Vec& p2, Vec& p3) {
    p1 = random_profile(rng, x, Lz);
    p2 = random_profile(rng, x, Lz);
    const double k2 = xi.norm2();
    Vec w(x.size());
    double sw = 0.0, sc = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        w[i] = std::exp(-x[i] * x[i]);
        sw += w[i];
        sc += xi.xi1 * p1[i] + xi.xi2 * p2[i];
    }
    for (size_t i = 0; i < x.size(); ++i) {
        p1[i] -= xi.xi1 * sc * w[i] / (k2 * sw);
        p2[i] -= xi.xi2 * sc * w[i] / (k2 * sw);
    }
    p3.assign(x.size() - 1, 0.0);
    double acc = 0.0;
    for (size_t i = 0; i + 1 < x.size(); ++i) {
        acc -= h * (xi.xi1 * p1[i] + xi.xi2 * p2[i]);
        p3[i] = acc;
    }
}

}  // namespace

LinearState random_state(const Grid1D& grid, Frequency xi, Orientation o,
                         const DensityProfile& profile, std::uint64_t seed) {
    if (!(xi.norm2() > 0.0)) throw Error(ErrorKind::ZeroFrequency, "|xi| must be > 0");
    std::mt19937_64 rng(seed);
    LinearState s = zero_state(grid, o);
    const double Lz = grid.half_length, h = grid.h();
    const auto mids = grid.mids();
    const auto nodes = grid.nodes();
    random_solenoidal(rng, mids, Lz, h, xi, s.phi, s.theta, s.psi);
    s.r = random_profile(rng, nodes, Lz);
    double rmax = 0.0;
    for (int i = 0; i < grid.n; ++i) rmax = std::max(rmax, std::abs(profile.drho(grid.node(i))));
    for (double& v : s.r) v *= rmax;
    if (o == Orientation::Horizontal) {
        random_solenoidal(rng, mids, Lz, h, xi, s.a1, s.a2, s.a3);
    } else {
        std::vector<double> ext(grid.n + 2);
        for (int j = 0; j <= grid.n + 1; ++j) ext[j] = -Lz + j * h;
        random_solenoidal(rng, ext, Lz, h, xi, s.a1, s.a2, s.a3);
    }
    return s;
}

SharpnessReport sharpness_test(const DensityProfile& profile, const Grid1D& grid,
                               const MagneticConfig& mag, const PhysicalParams& params,
                               double Lambda, const std::vector<Frequency>& xi_set,
                               const std::vector<double>& lambdas,
                               const std::vector<std::uint64_t>& seeds, const VerifyOptions& opts) {
    if (xi_set.size() != lambdas.size())
        throw Error(ErrorKind::InvalidArgument, "one growth rate per frequency required");
    auto shared = std::make_shared<const DensityProfile>(profile);
    SharpnessReport rep;
    for (auto seed : seeds)
        for (size_t i = 0; i < xi_set.size(); ++i) rep.runs.push_back({seed, xi_set[i], lambdas[i], 0.0});

    std::vector<std::string> failures(rep.runs.size());
    std::atomic<size_t> next{0};
    auto worker = [&]() {
        for (size_t w = next.fetch_add(1); w < rep.runs.size(); w = next.fetch_add(1)) {
            SharpnessRun& run = rep.runs[w];
            try {
                const LinearProblem prob{shared, grid, run.xi, mag, params};
                const LinearState init = random_state(grid, run.xi, mag.orientation, profile, run.seed);
                const double dt = opts.dt_factor / run.lambda;
                const auto ev = evolve(init, prob, dt, opts.T_factor / run.lambda, opts.record_every);
                run.measured = measured_rate(ev.series).rate;
            } catch (const Error& e) {
                failures[w] = e.what();
            }
        }
    };
    const unsigned nthreads =
        std::min<unsigned>(std::max(1u, std::thread::hardware_concurrency()), rep.runs.size());
    if (nthreads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    for (size_t w = 0; w < rep.runs.size(); ++w)
        if (!failures[w].empty()) throw Error(ErrorKind::SolverSingular, failures[w]);

    for (const auto& run : rep.runs) {
        rep.max_rate = std::max(rep.max_rate, run.measured);
        if (run.measured > run.lambda * (1.0 + opts.rate_tol)) {
            std::ostringstream msg;
            msg << "seed " << run.seed << " xi=(" << run.xi.xi1 << ", " << run.xi.xi2
                << "): measured " << run.measured << " > lambda " << run.lambda;
            throw Error(ErrorKind::SharpnessViolation, msg.str());
        }
    }
    if (rep.max_rate > Lambda * (1.0 + opts.rate_tol)) {
        std::ostringstream msg;
        msg << "max measured rate " << rep.max_rate << " exceeds Lambda " << Lambda;
        throw Error(ErrorKind::SharpnessViolation, msg.str());
    }
    return rep;
}

void write_series_csv(const std::vector<Sample>& series, const std::string& path) {
    std::ostringstream out;
    out << "t,norm_rho,norm_u,norm_N\n";
    for (const auto& s : series)
        out << fmt_double(s.t) << ',' << fmt_double(s.norm_rho) << ',' << fmt_double(s.norm_u) << ','
            << fmt_double(s.norm_N) << '\n';
    write_text_file(path, out.str());
}

}  // namespace rtmhd
