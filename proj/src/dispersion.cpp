#include "rtmhd/dispersion.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <sstream>
#include <thread>

#include "rtmhd/errors.hpp"
#include "rtmhd/io.hpp"

namespace rtmhd {

namespace {

double noise_floor(const DensityProfile& profile, double g) {
    return -1e-12 * g * profile.metrics().sup_ratio;
}

bool indefinite(const SymBand& E0, const SymBand& mass, double floor) {
    return inertia_count(E0, mass, floor) >= 1;
}

bool vertical_indefinite(const DensityProfile& profile, const Grid1D& grid, double k, double M,
                         double g, const SymBand& mass) {
    const SymBand E0 = potential_form(profile, grid, {k, 0.0}, {Orientation::Vertical, M}, g);
    return indefinite(E0, mass, noise_floor(profile, g));
}

}  // namespace

bool in_growing_domain(const DensityProfile& profile, const Grid1D& grid, Frequency xi,
                       const MagneticConfig& mag, const PhysicalParams& params) {
    params.validate();
    mag.validate();
    profile.require_grid(grid);
    const SymBand E0 = potential_form(profile, grid, xi, mag, params.g);
    return indefinite(E0, mass_form(grid), noise_floor(profile, params.g));
}

double critical_number_on(const DensityProfile& profile, const Grid1D& grid, double g) {
    SymBand G = gravity_form(profile, grid);
    G.scale(g);
    const EigenPair p = max_generalized_eig(G, stiffness_form(grid));
    return std::sqrt(std::max(p.value, 0.0));
}

namespace {

/// Ratio of successive squared values; the squared quotient is what grows linearly in Lz.
double growth_ratio(double prev, double cur) { return (cur * cur) / (prev * prev); }

CriticalNumber decide(const DensityProfile& profile, CriticalNumber cn, double ratio_threshold) {
    const auto& tr = cn.trace;
    const size_t m = tr.size();
    const bool diverging = growth_ratio(tr[m - 3].second, tr[m - 2].second) >= ratio_threshold &&
                           growth_ratio(tr[m - 2].second, tr[m - 1].second) >= ratio_threshold;
    cn.infinite = diverging;
    cn.value = diverging ? 0.0 : tr.back().second;
    const bool sign_rule = profile.metrics().total_jump > 0.0;
    if (diverging != sign_rule) {
        std::ostringstream msg;
        msg << "truncation trace says " << (diverging ? "infinite" : "finite")
            << " but total_jump = " << profile.metrics().total_jump;
        throw Error(ErrorKind::InconsistentDecision, msg.str());
    }
    return cn;
}

}  // namespace

CriticalNumber critical_number(const DensityProfile& profile, const std::vector<Grid1D>& grids,
                               double g) {
    if (grids.size() < 3) throw Error(ErrorKind::InvalidArgument, "need at least 3 truncations");
    for (size_t i = 1; i < grids.size(); ++i)
        if (std::abs(grids[i].half_length - 2.0 * grids[i - 1].half_length) >
            1e-12 * grids[i].half_length)
            throw Error(ErrorKind::InvalidArgument, "truncations must double Lz");
    CriticalNumber cn;
    for (const auto& gr : grids) {
        profile.require_grid(gr);
        cn.trace.emplace_back(gr.half_length, critical_number_on(profile, gr, g));
    }
    return decide(profile, std::move(cn), CriticalOptions{}.growth_ratio);
}

CriticalNumber critical_number(const DensityProfile& profile, const Grid1D& base, double g,
                               const CriticalOptions& opts) {
    profile.require_grid(base);
    CriticalNumber cn;
    Grid1D gr = base;
    cn.trace.emplace_back(gr.half_length, critical_number_on(profile, gr, g));
    int diverging_steps = 0;
    while (true) {
        const Grid1D next(2.0 * gr.half_length, 2 * (gr.n + 1) - 1);
        if (next.half_length > opts.max_half_length) break;
        gr = next;
        const double prev = cn.trace.back().second;
        const double cur = critical_number_on(profile, gr, g);
        cn.trace.emplace_back(gr.half_length, cur);
        if (cn.trace.size() < 3) continue;
        diverging_steps = growth_ratio(prev, cur) >= opts.growth_ratio ? diverging_steps + 1 : 0;
        if (diverging_steps >= 2) break;
        if (std::abs(cur - prev) < opts.rel_change * std::abs(cur)) break;
    }
    if (cn.trace.size() < 3) throw Error(ErrorKind::InvalidArgument, "max_half_length too small");
    return decide(profile, std::move(cn), opts.growth_ratio);
}

double critical_freq_horizontal(const DensityProfile& profile, const Grid1D& grid, Frequency xi,
                                double M, double g) {
    profile.require_grid(grid);
    const double k2 = xi.norm2();
    if (!(k2 > 0.0)) throw Error(ErrorKind::ZeroFrequency, "|xi| must be > 0");
    const double mx = M * xi.xi1;
    if (mx == 0.0) throw Error(ErrorKind::OutOfRange, "S(xi) needs M xi1 != 0");
    const SymBand A = SymBand::combine(g * k2 / (mx * mx), gravity_form(profile, grid), -1.0,
                                       stiffness_form(grid));
    const EigenPair p = max_generalized_eig(A, mass_form(grid));
    if (!(p.value > 0.0))
        throw Error(ErrorKind::OutOfRange, "|M xi1|/|xi| is not below the critical number");
    return std::sqrt(p.value);
}

double critical_freq_vertical(const DensityProfile& profile, const Grid1D& grid, double M,
                              double g) {
    profile.require_grid(grid);
    if (profile.metrics().total_jump > 0.0) return 0.0;
    if (!(M > 0.0)) throw Error(ErrorKind::OutOfRange, "vertical threshold needs M > 0");
    const SymBand mass = mass_form(grid);
    double lo = 1.0, hi = 1.0;
    if (vertical_indefinite(profile, grid, 1.0, M, g, mass)) {
        while (true) {
            lo *= 0.5;
            if (lo < 1e-12) return 0.0;
            if (!vertical_indefinite(profile, grid, lo, M, g, mass)) break;
            hi = lo;
        }
    } else {
        while (true) {
            hi *= 2.0;
            if (hi > 1e12)
                throw Error(ErrorKind::OutOfRange, "vertical field at or above the critical number");
            if (vertical_indefinite(profile, grid, hi, M, g, mass)) break;
            lo = hi;
        }
    }
    while (hi - lo > 1e-12 * hi) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (vertical_indefinite(profile, grid, mid, M, g, mass)) hi = mid; else lo = mid;
    }
    return 0.5 * (lo + hi);
}

double critical_freq_vertical_direct(const DensityProfile& profile, const Grid1D& grid, double M,
                                     double g) {
    profile.require_grid(grid);
    if (!(M > 0.0)) throw Error(ErrorKind::OutOfRange, "vertical threshold needs M > 0");
    const SymBand A = SymBand::combine(g, gravity_form(profile, grid), -M * M, stiffness_form(grid));
    SymBand B = hessian_form(grid);
    B.scale(M * M);
    const EigenPair p = max_generalized_eig(A, B);
    if (!(p.value > 0.0))
        throw Error(ErrorKind::OutOfRange, "vertical field at or above the critical number");
    return 1.0 / std::sqrt(p.value);
}

DispersionTable lattice_sweep(const DensityProfile& profile, const Grid1D& grid,
                              const MagneticConfig& mag, const PhysicalParams& params,
                              double radius, const SweepOptions& opts) {
    params.validate();
    mag.validate();
    profile.require_grid(grid);
    if (!(radius > 0.0)) throw Error(ErrorKind::InvalidArgument, "sweep radius must be > 0");

    DispersionTable table;
    table.radius = radius;
    table.params = params;
    table.mag = mag;
    table.grid = grid;
    const auto points = lattice_points(params.L, radius);
    for (const auto& p : points) {
        DispersionEntry e;
        e.xi = p;
        e.k1 = static_cast<int>(std::lround(p.xi1 * params.L));
        e.k2 = static_cast<int>(std::lround(p.xi2 * params.L));
        table.entries.push_back(e);
    }

    // Work list: one representative per orbit of the sign flips, or every point.
    std::vector<size_t> work;
    for (size_t i = 0; i < table.entries.size(); ++i) {
        const auto& e = table.entries[i];
        if (!opts.use_symmetry || (e.k1 >= 0 && e.k2 >= 0)) work.push_back(i);
    }

    auto evaluate = [&](DispersionEntry& e) {
        try {
            e.member = in_growing_domain(profile, grid, e.xi, mag, params);
            if (!e.member) return;
            const FormSet forms = assemble_forms(profile, grid, e.xi, mag, params);
            const auto res = growth_rate(forms, opts.growth);
            if (res) e.lambda = res->lambda;
            else e.error = "NoGrowingMode";
        } catch (const Error& err) {
            e.error = err.what();
        }
    };

    unsigned nthreads = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
    nthreads = std::min<unsigned>(nthreads, static_cast<unsigned>(std::max<size_t>(work.size(), 1)));
    std::atomic<size_t> next{0};
    auto worker = [&]() {
        for (size_t w = next.fetch_add(1); w < work.size(); w = next.fetch_add(1))
            evaluate(table.entries[work[w]]);
    };
    if (nthreads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    if (opts.use_symmetry) {
        std::map<std::pair<int, int>, size_t> index;
        for (size_t i = 0; i < table.entries.size(); ++i)
            index[{table.entries[i].k1, table.entries[i].k2}] = i;
        for (auto& e : table.entries) {
            if (e.k1 >= 0 && e.k2 >= 0) continue;
            const auto& rep = table.entries[index.at({std::abs(e.k1), std::abs(e.k2)})];
            e.member = rep.member;
            e.lambda = rep.lambda;
            e.error = rep.error;
        }
    }
    return table;
}

double default_sweep_radius(const DensityProfile& profile) {
    const auto& m = profile.metrics();
    return 4.0 * 2.0 * M_PI / (m.support_hi - m.support_lo);
}

SupRate sup_rate(const DispersionTable& table) {
    const DispersionEntry* best = nullptr;
    auto better = [](const DispersionEntry& a, const DispersionEntry& b) {
        const double la = *a.lambda, lb = *b.lambda;
        const double tie = 1e-12 * std::max(std::abs(la), std::abs(lb));
        if (std::abs(la - lb) > tie) return la > lb;
        const long na = 1L * a.k1 * a.k1 + 1L * a.k2 * a.k2;
        const long nb = 1L * b.k1 * b.k1 + 1L * b.k2 * b.k2;
        if (na != nb) return na < nb;
        return std::make_pair(a.k1, a.k2) < std::make_pair(b.k1, b.k2);
    };
    for (const auto& e : table.entries)
        if (e.member && e.lambda && (!best || better(e, *best))) best = &e;
    if (!best) throw Error(ErrorKind::EmptyDomain, "no growing lattice frequency within the radius");
    SupRate s;
    s.Lambda = *best->lambda;
    s.Lambda_star = s.Lambda;
    s.xi1 = best->xi;
    s.xi2 = -best->xi;
    s.on_boundary = best->xi.norm() > table.radius - 1.0 / table.params.L;
    return s;
}

void write_dispersion_csv(const DispersionTable& table, const std::string& path) {
    std::ostringstream out;
    out << "xi1,xi2,member,lambda\n";
    for (const auto& e : table.entries) {
        out << fmt_double(e.xi.xi1) << ',' << fmt_double(e.xi.xi2) << ',' << (e.member ? 1 : 0)
            << ',';
        if (e.lambda) out << fmt_double(*e.lambda);
        out << '\n';
    }
    write_text_file(path, out.str());
}

void write_trace_csv(const CriticalNumber& cn, const std::string& path) {
    std::ostringstream out;
    out << "Lz,value\n";
    for (const auto& [Lz, v] : cn.trace) out << fmt_double(Lz) << ',' << fmt_double(v) << '\n';
    write_text_file(path, out.str());
}

}  // namespace rtmhd
