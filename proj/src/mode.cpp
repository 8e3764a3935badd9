#include "rtmhd/mode.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "json_io.hpp"
#include "rtmhd/errors.hpp"
#include "rtmhd/io.hpp"

namespace rtmhd {

namespace {

Vec sampled(const DensityProfile& p, const std::vector<double>& x, bool derivative) {
    Vec out(x.size());
    for (size_t i = 0; i < x.size(); ++i) out[i] = derivative ? p.drho(x[i]) : p.rho(x[i]);
    return out;
}

/// Solves (-D2_mid + diag(sigma)) y = rhs on the midpoints.
Vec solve_mid_helmholtz(const Vec& sigma, const Vec& rhs, double h) {
    const int m = static_cast<int>(sigma.size());
    SymBand A(m, 1);
    for (int k = 0; k < m; ++k) {
        A.lower(k, k) = 2.0 / (h * h) + sigma[k];
        if (k + 1 < m) A.lower(k + 1, k) = -1.0 / (h * h);
    }
    BandLdlt f;
    if (!f.factor(A)) throw Error(ErrorKind::FactorizationBreakdown, "midpoint Helmholtz solve");
    return f.solve(rhs);
}

/// ||sum of terms|| relative to the largest term norm; zero when every term vanishes.
double relative(const std::vector<Vec>& terms) {
    const size_t m = terms.front().size();
    Vec sum(m, 0.0);
    double scale = 0.0;
    for (const auto& t : terms) {
        for (size_t i = 0; i < m; ++i) sum[i] += t[i];
        scale = std::max(scale, norm2(t));
    }
    return scale > 0.0 ? norm2(sum) / scale : 0.0;
}

Vec scaled(const Vec& v, double c) {
    Vec out(v);
    for (double& x : out) x *= c;
    return out;
}

Vec times(const Vec& a, const Vec& b, double c = 1.0) {
    Vec out(a.size());
    for (size_t i = 0; i < a.size(); ++i) out[i] = c * a[i] * b[i];
    return out;
}

Vec plus(const Vec& a, const Vec& b, double cb = 1.0) {
    Vec out(a);
    for (size_t i = 0; i < a.size(); ++i) out[i] += cb * b[i];
    return out;
}

/// Fourth-order first and second derivatives at the nodes of a node field, with zero values
/// at and beyond the boundary.
Vec fd4_first(const Vec& f, double h) {
    const int n = static_cast<int>(f.size());
    auto at = [&](int i) { return (i < 0 || i >= n) ? 0.0 : f[i]; };
    Vec out(n);
    for (int i = 0; i < n; ++i)
        out[i] = (-at(i + 2) + 8.0 * at(i + 1) - 8.0 * at(i - 1) + at(i - 2)) / (12.0 * h);
    return out;
}

Vec fd4_second(const Vec& f, double h) {
    const int n = static_cast<int>(f.size());
    auto at = [&](int i) { return (i < 0 || i >= n) ? 0.0 : f[i]; };
    Vec out(n);
    for (int i = 0; i < n; ++i)
        out[i] = (-at(i + 2) + 16.0 * at(i + 1) - 30.0 * at(i) + 16.0 * at(i - 1) - at(i - 2)) /
                 (12.0 * h * h);
    return out;
}

double max_abs(const Vec& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double weighted_norm(const Vec& v, double h) { return std::sqrt(h) * norm2(v); }

}  // namespace

NormalMode build_mode(const GrowthResult& growth, const MagneticConfig& mag,
                      const PhysicalParams& params, const DensityProfile& profile,
                      const Grid1D& grid, const ModeOptions& opts) {
    const double lam = growth.lambda;
    if (!(lam > 0.0)) throw Error(ErrorKind::InvalidArgument, "mode needs lambda > 0");
    if (static_cast<int>(growth.psi.vec.size()) != grid.n)
        throw Error(ErrorKind::InvalidArgument, "psi does not match the grid");
    const Frequency xi = growth.xi;
    const double k2 = xi.norm2();
    if (!(k2 > 0.0)) throw Error(ErrorKind::ZeroFrequency, "|xi| must be > 0");

    NormalMode m;
    m.xi = xi;
    m.lambda = lam;
    m.psi = growth.psi.vec;
    m.mag = mag;
    m.params = params;
    m.grid = grid;
    m.profile = profile.spec();

    const DiffOps ops(grid);
    const double mu = params.mu;
    const double M2 = mag.magnitude * mag.magnitude;
    const Vec rho_m = sampled(profile, grid.mids(), false);
    const Vec dpsi = ops.d1(m.psi);
    const Vec psi3 = ops.d3(m.psi);
    const int nm = grid.n + 1;

    m.phi.assign(nm, 0.0);
    m.theta.assign(nm, 0.0);
    m.pi.assign(nm, 0.0);
    if (mag.orientation == Orientation::Horizontal) {
        Vec C(nm), sigma(nm), omega(nm);
        for (int k = 0; k < nm; ++k) {
            C[k] = lam * lam * rho_m[k] + lam * mu * k2 + M2 * xi.xi1 * xi.xi1;
            sigma[k] = C[k] / (lam * mu);
            omega[k] = xi.xi1 * (lam * mu * psi3[k] - C[k] * dpsi[k]) / (lam * mu * k2);
        }
        m.phi = solve_mid_helmholtz(sigma, omega, grid.h());
        for (int k = 0; k < nm; ++k)
            m.pi[k] = (lam * mu * psi3[k] - C[k] * dpsi[k] - M2 * xi.xi1 * k2 * m.phi[k]) / (lam * k2);
        Vec rhs(nm);
        for (int k = 0; k < nm; ++k)
            rhs[k] = (lam * xi.xi2 * m.pi[k] + M2 * xi.xi1 * xi.xi2 * m.phi[k]) / (lam * mu);
        m.theta = solve_mid_helmholtz(sigma, rhs, grid.h());
    } else {
        for (int k = 0; k < nm; ++k) {
            m.phi[k] = -xi.xi1 * dpsi[k] / k2;
            m.theta[k] = -xi.xi2 * dpsi[k] / k2;
            m.pi[k] = -((lam * lam * rho_m[k] + lam * mu * k2 + M2 * k2) * dpsi[k] -
                        (lam * mu + M2) * psi3[k]) /
                      (lam * k2);
        }
    }

    m.residuals = discrete_residuals(m, profile);
    m.divergence = divergence_defect(m);
    for (int e = 0; e < 4; ++e)
        if (!(m.residuals[e] <= opts.mode_tol)) {
            std::ostringstream msg;
            msg << "equation " << e + 1 << " residual " << m.residuals[e] << " exceeds " << opts.mode_tol;
            throw Error(ErrorKind::ResidualTooLarge, msg.str());
        }
    return m;
}

Residuals discrete_residuals(const NormalMode& m, const DensityProfile& profile) {
    const DiffOps ops(m.grid);
    const double lam = m.lambda, mu = m.params.mu, g = m.params.g;
    const double k2 = m.xi.norm2(), x1 = m.xi.xi1, x2 = m.xi.xi2;
    const double M2 = m.mag.magnitude * m.mag.magnitude;
    const Vec rho_m = sampled(profile, m.grid.mids(), false);
    const Vec rho_n = sampled(profile, m.grid.nodes(), false);
    const Vec drho_n = sampled(profile, m.grid.nodes(), true);
    const Vec d2phi = ops.d2_mid(m.phi), d2theta = ops.d2_mid(m.theta);
    const Vec dpsi = ops.d1(m.psi);

    Residuals r{};
    std::vector<Vec> t1 = {times(rho_m, m.phi, lam), scaled(m.pi, -x1), scaled(d2phi, -mu),
                           scaled(m.phi, mu * k2)};
    std::vector<Vec> t2 = {times(rho_m, m.theta, lam), scaled(m.pi, -x2), scaled(d2theta, -mu),
                           scaled(m.theta, mu * k2)};
    std::vector<Vec> t3 = {times(rho_n, m.psi, lam), ops.d1_mid(m.pi), scaled(ops.d2(m.psi), -mu),
                           scaled(m.psi, mu * k2), times(drho_n, m.psi, -g / lam)};
    if (m.mag.orientation == Orientation::Horizontal) {
        const double c = M2 * x1 / lam;
        t2.push_back(plus(scaled(m.theta, c * x1), m.phi, -c * x2));
        t3.push_back(scaled(m.psi, c * x1));
        t3.push_back(scaled(ops.d1_mid(m.phi), c));
    } else {
        const double c = M2 / lam;
        t1.push_back(scaled(d2phi, -c));
        t1.push_back(scaled(dpsi, -c * x1));
        t2.push_back(scaled(d2theta, -c));
        t2.push_back(scaled(dpsi, -c * x2));
    }
    r[0] = relative(t1);
    r[1] = relative(t2);
    r[2] = relative(t3);
    r[3] = relative({scaled(m.phi, x1), scaled(m.theta, x2), dpsi});
    return r;
}

Residuals consistency_residuals(const NormalMode& m, const DensityProfile& profile) {
    const double h = m.grid.h();
    const double lam = m.lambda, mu = m.params.mu, g = m.params.g;
    const double k2 = m.xi.norm2(), x1 = m.xi.xi1, x2 = m.xi.xi2;
    const double M2 = m.mag.magnitude * m.mag.magnitude;
    const Vec rho = sampled(profile, m.grid.nodes(), false);
    const Vec drho = sampled(profile, m.grid.nodes(), true);
    const Vec phi = mid_to_node(m.phi), theta = mid_to_node(m.theta), pi = mid_to_node(m.pi);
    const Vec& psi = m.psi;
    const Vec phi2 = fd4_second(phi, h), theta2 = fd4_second(theta, h);
    const Vec psi1 = fd4_first(psi, h);

    std::vector<Vec> t1 = {times(rho, phi, lam), scaled(pi, -x1), scaled(phi2, -mu), scaled(phi, mu * k2)};
    std::vector<Vec> t2 = {times(rho, theta, lam), scaled(pi, -x2), scaled(theta2, -mu),
                           scaled(theta, mu * k2)};
    std::vector<Vec> t3 = {times(rho, psi, lam), fd4_first(pi, h), scaled(fd4_second(psi, h), -mu),
                           scaled(psi, mu * k2), times(drho, psi, -g / lam)};
    if (m.mag.orientation == Orientation::Horizontal) {
        const double c = M2 * x1 / lam;
        t2.push_back(plus(scaled(theta, c * x1), phi, -c * x2));
        t3.push_back(scaled(psi, c * x1));
        t3.push_back(scaled(fd4_first(phi, h), c));
    } else {
        const double c = M2 / lam;
        t1.push_back(scaled(phi2, -c));
        t1.push_back(scaled(psi1, -c * x1));
        t2.push_back(scaled(theta2, -c));
        t2.push_back(scaled(psi1, -c * x2));
    }
    std::vector<Vec> t4 = {scaled(phi, x1), scaled(theta, x2), psi1};
    // Restrict to the core window |x3| <= Lz/2, away from the truncation walls.
    std::vector<int> keep;
    for (int i = 0; i < m.grid.n; ++i)
        if (std::abs(m.grid.node(i)) <= 0.5 * m.grid.half_length) keep.push_back(i);
    auto window = [&keep](std::vector<Vec> terms) {
        for (auto& t : terms) {
            Vec w(keep.size());
            for (size_t j = 0; j < keep.size(); ++j) w[j] = t[keep[j]];
            t = std::move(w);
        }
        return relative(terms);
    };
    return {window(t1), window(t2), window(t3), window(t4)};
}

double divergence_defect(const NormalMode& m) {
    const DiffOps ops(m.grid);
    const Vec dpsi = ops.d1(m.psi);
    Vec div(dpsi.size());
    for (size_t k = 0; k < div.size(); ++k) div[k] = m.xi.xi1 * m.phi[k] + m.xi.xi2 * m.theta[k] + dpsi[k];
    const double scale = max_abs(dpsi);
    return scale > 0.0 ? max_abs(div) / scale : 0.0;
}

ModeNorms mode_norms(const NormalMode& m) {
    const DiffOps ops(m.grid);
    const double h = m.grid.h();
    ModeNorms nrm;
    nrm.psi = weighted_norm(m.psi, h);
    nrm.phi = weighted_norm(m.phi, h);
    nrm.theta = weighted_norm(m.theta, h);
    nrm.pi = weighted_norm(m.pi, h);
    nrm.dpsi = weighted_norm(ops.d1(m.psi), h);
    nrm.d2psi = weighted_norm(ops.d2_ext(m.psi), h);
    nrm.dphi = weighted_norm(ops.d1_mid_ext(m.phi), h);
    nrm.dtheta = weighted_norm(ops.d1_mid_ext(m.theta), h);
    nrm.dpi = weighted_norm(ops.d1_mid_ext(m.pi), h);
    return nrm;
}

const SnapshotField& FieldSnapshot::field(const std::string& name) const {
    for (const auto& f : fields)
        if (f.name == name) return f;
    throw Error(ErrorKind::InvalidArgument, "no snapshot field '" + name + "'");
}

double FieldSnapshot::norm(const std::string& name) const {
    const SnapshotField& f = field(name);
    const double h = grid.h();
    double s = 0.0;
    const size_t m = f.coeff.size();
    for (size_t i = 0; i < m; ++i) {
        const bool end = f.location == Location::ExtNode && (i == 0 || i + 1 == m);
        s += (end ? 0.5 * h : h) * f.coeff[i] * f.coeff[i];
    }
    const double cell = 2.0 * M_PI * L;
    return std::sqrt(0.5 * cell * cell * s);
}

double FieldSnapshot::div_u() const {
    const DiffOps ops(grid);
    const Vec& a = field("u1").coeff;
    const Vec& b = field("u2").coeff;
    const Vec dc = ops.d1(field("u3").coeff);
    Vec div(dc.size());
    double scale = 0.0;
    for (size_t k = 0; k < dc.size(); ++k) {
        div[k] = xi1.xi1 * a[k] + xi1.xi2 * b[k] + dc[k];
        scale = std::max({scale, std::abs(xi1.xi1 * a[k]), std::abs(xi1.xi2 * b[k]), std::abs(dc[k])});
    }
    return scale > 0.0 ? max_abs(div) / scale : 0.0;
}

double FieldSnapshot::div_N() const {
    const DiffOps ops(grid);
    const Vec& a = field("N1").coeff;
    const Vec& b = field("N2").coeff;
    const Vec& c = field("N3").coeff;
    Vec dc, div;
    double sign = 1.0;
    if (orientation == Orientation::Horizontal) {
        dc = ops.d1(c);  // cos-coefficients differentiate to -xi sin
        sign = -1.0;
    } else {
        dc = ops.d1_mid_ext(c);
    }
    div.resize(dc.size());
    double scale = 0.0;
    for (size_t k = 0; k < dc.size(); ++k) {
        div[k] = sign * (xi1.xi1 * a[k] + xi1.xi2 * b[k]) + dc[k];
        scale = std::max({scale, std::abs(xi1.xi1 * a[k]), std::abs(xi1.xi2 * b[k]), std::abs(dc[k])});
    }
    return scale > 0.0 ? max_abs(div) / scale : 0.0;
}

FieldSnapshot assemble_real_solution(const NormalMode& m, double t) {
    const DensityProfile profile = DensityProfile::build(m.profile, m.grid);
    const DiffOps ops(m.grid);
    const double lam = m.lambda;
    const double e = std::exp(lam * t);
    const double M = m.mag.magnitude;
    FieldSnapshot s;
    s.t = t;
    s.lambda = lam;
    s.xi1 = m.xi;
    s.grid = m.grid;
    s.L = m.params.L;
    s.orientation = m.mag.orientation;
    const Vec drho = sampled(profile, m.grid.nodes(), true);
    s.fields.push_back({"rho", Location::Node, Basis::Cos, times(drho, m.psi, -2.0 * e)});
    s.fields.push_back({"u1", Location::Mid, Basis::Sin, scaled(m.phi, 2.0 * lam * e)});
    s.fields.push_back({"u2", Location::Mid, Basis::Sin, scaled(m.theta, 2.0 * lam * e)});
    s.fields.push_back({"u3", Location::Node, Basis::Cos, scaled(m.psi, 2.0 * lam * e)});
    if (m.mag.orientation == Orientation::Horizontal) {
        const double c = 2.0 * M * m.xi.xi1 * e;
        s.fields.push_back({"N1", Location::Mid, Basis::Cos, scaled(m.phi, c)});
        s.fields.push_back({"N2", Location::Mid, Basis::Cos, scaled(m.theta, c)});
        s.fields.push_back({"N3", Location::Node, Basis::Sin, scaled(m.psi, -c)});
    } else {
        const double c = 2.0 * M * e;
        s.fields.push_back({"N1", Location::ExtNode, Basis::Sin, scaled(ops.d1_mid_ext(m.phi), c)});
        s.fields.push_back({"N2", Location::ExtNode, Basis::Sin, scaled(ops.d1_mid_ext(m.theta), c)});
        s.fields.push_back({"N3", Location::Mid, Basis::Cos, scaled(ops.d1(m.psi), c)});
    }
    s.fields.push_back({"q", Location::Mid, Basis::Cos, scaled(m.pi, 2.0 * lam * e)});
    return s;
}

void export_mode_json(const NormalMode& m, const std::string& path) {
    Json j;
    j["xi"] = {m.xi.xi1, m.xi.xi2};
    j["lambda"] = m.lambda;
    j["magnetic"] = magnetic_to_json(m.mag);
    j["params"] = params_to_json(m.params);
    j["grid"] = grid_to_json(m.grid);
    j["profile"] = profile_to_json(m.profile);
    j["psi"] = m.psi;
    j["phi"] = m.phi;
    j["theta"] = m.theta;
    j["pi"] = m.pi;
    j["residuals"] = m.residuals;
    j["divergence"] = m.divergence;
    write_text_file(path, j.dump(1) + "\n");
}

NormalMode import_mode_json(const std::string& path) {
    Json j;
    try {
        j = Json::parse(read_text_file(path));
        NormalMode m;
        m.xi = {j.at("xi").at(0).get<double>(), j.at("xi").at(1).get<double>()};
        m.lambda = j.at("lambda").get<double>();
        m.mag = magnetic_from_json(j.at("magnetic"));
        m.params = params_from_json(j.at("params"));
        m.grid = grid_from_json(j.at("grid"));
        m.profile = profile_from_json(j.at("profile"));
        m.psi = j.at("psi").get<Vec>();
        m.phi = j.at("phi").get<Vec>();
        m.theta = j.at("theta").get<Vec>();
        m.pi = j.at("pi").get<Vec>();
        m.residuals = j.at("residuals").get<Residuals>();
        m.divergence = j.at("divergence").get<double>();
        if (static_cast<int>(m.psi.size()) != m.grid.n ||
            static_cast<int>(m.phi.size()) != m.grid.n + 1)
            throw Error(ErrorKind::Io, "field sizes do not match the grid in '" + path + "'");
        return m;
    } catch (const Json::exception& e) {
        throw Error(ErrorKind::Io, "malformed mode file '" + path + "': " + e.what());
    }
}

void export_mode_csv(const NormalMode& m, const std::string& path) {
    const Vec phi = mid_to_node(m.phi), theta = mid_to_node(m.theta), pi = mid_to_node(m.pi);
    std::ostringstream out;
    out << "x3,psi,phi,theta,pi\n";
    for (int i = 0; i < m.grid.n; ++i)
        out << fmt_double(m.grid.node(i)) << ',' << fmt_double(m.psi[i]) << ',' << fmt_double(phi[i])
            << ',' << fmt_double(theta[i]) << ',' << fmt_double(pi[i]) << '\n';
    write_text_file(path, out.str());
}

void export_snapshot_csv(const FieldSnapshot& s, const std::string& path) {
    const char* order[] = {"rho", "u1", "u2", "u3", "N1", "N2", "N3", "q"};
    std::vector<Vec> cols;
    std::ostringstream out;
    out << "# t=" << fmt_double(s.t) << " xi1=" << fmt_double(s.xi1.xi1) << ',' << fmt_double(s.xi1.xi2)
        << " basis:";
    for (const char* name : order) {
        const SnapshotField& f = s.field(name);
        out << ' ' << name << '=' << (f.basis == Basis::Cos ? "cos" : "sin");
        if (f.location == Location::Node) cols.push_back(f.coeff);
        else if (f.location == Location::Mid) cols.push_back(mid_to_node(f.coeff));
        else cols.emplace_back(f.coeff.begin() + 1, f.coeff.end() - 1);
    }
    out << "\nx3,rho,u1,u2,u3,N1,N2,N3,q\n";
    for (int i = 0; i < s.grid.n; ++i) {
        out << fmt_double(s.grid.node(i));
        for (const auto& c : cols) out << ',' << fmt_double(c[i]);
        out << '\n';
    }
    write_text_file(path, out.str());
}

}  // namespace rtmhd
