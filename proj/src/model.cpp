#include "rtmhd/model.hpp"

#include <algorithm>
#include <array>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/minima.hpp>
#include <cstring>
#include <limits>

#include "rtmhd/errors.hpp"

namespace rtmhd {

namespace {

double unit_bump(double t) {
    if (!(std::abs(t) < 1.0)) return 0.0;
    return std::exp(-1.0 / (1.0 - t * t));
}

constexpr int kPanels = 64;

struct CdfTable {
    std::array<double, kPanels + 1> edge{};
    CdfTable() {
        const double w = 2.0 / kPanels;
        edge[0] = 0.0;
        for (int p = 0; p < kPanels; ++p) {
            const double a = -1.0 + p * w;
            edge[p + 1] = edge[p] + boost::math::quadrature::gauss<double, 20>::integrate(
                                        unit_bump, a, a + w);
        }
    }
};

const CdfTable& cdf_table() {
    static const CdfTable table;
    return table;
}

bool finite(double v) { return std::isfinite(v); }

}  // namespace

void PhysicalParams::validate() const {
    if (!(mu > 0.0) || !finite(mu)) throw Error(ErrorKind::InvalidArgument, "mu must be > 0");
    if (!(g > 0.0) || !finite(g)) throw Error(ErrorKind::InvalidArgument, "g must be > 0");
    if (!(L > 0.0) || !finite(L)) throw Error(ErrorKind::InvalidArgument, "L must be > 0");
}

void MagneticConfig::validate() const {
    if (!(magnitude >= 0.0) || !finite(magnitude))
        throw Error(ErrorKind::InvalidArgument, "magnetic magnitude must be >= 0");
}

const char* to_string(Orientation o) {
    return o == Orientation::Horizontal ? "horizontal" : "vertical";
}

Orientation orientation_from_string(const char* s) {
    if (std::strcmp(s, "horizontal") == 0) return Orientation::Horizontal;
    if (std::strcmp(s, "vertical") == 0) return Orientation::Vertical;
    throw Error(ErrorKind::InvalidArgument,
                std::string("orientation must be 'horizontal' or 'vertical', got '") + s + "'");
}

Grid1D::Grid1D(double Lz, int points) : half_length(Lz), n(points) {
    if (!(Lz > 0.0) || !finite(Lz)) throw Error(ErrorKind::InvalidArgument, "Lz must be > 0");
    if (points < 16) throw Error(ErrorKind::InvalidArgument, "grid needs n >= 16");
}

std::vector<double> Grid1D::nodes() const {
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = node(i);
    return x;
}

std::vector<double> Grid1D::mids() const {
    std::vector<double> x(n + 1);
    for (int k = 0; k <= n; ++k) x[k] = mid(k);
    return x;
}

double unit_bump_cdf(double t) {
    if (t <= -1.0) return 0.0;
    const auto& tab = cdf_table();
    if (t >= 1.0) return tab.edge[kPanels];
    const double w = 2.0 / kPanels;
    const int p = std::min(kPanels - 1, static_cast<int>((t + 1.0) / w));
    const double a = -1.0 + p * w;
    if (t <= a) return tab.edge[p];
    return tab.edge[p] + boost::math::quadrature::gauss<double, 20>::integrate(unit_bump, a, t);
}

double unit_bump_mass() { return cdf_table().edge[kPanels]; }

DensityProfile::DensityProfile(ProfileSpec spec) : spec_(std::move(spec)) {}

double DensityProfile::rho(double x) const {
    double r = spec_.base_density;
    for (const auto& b : spec_.bumps)
        r += b.amplitude * b.half_width * unit_bump_cdf((x - b.center) / b.half_width);
    return r;
}

double DensityProfile::drho(double x) const {
    double d = 0.0;
    for (const auto& b : spec_.bumps) d += b.amplitude * unit_bump((x - b.center) / b.half_width);
    return d;
}

DensityProfile DensityProfile::build(const ProfileSpec& spec, const Grid1D& check_grid) {
    if (!finite(spec.base_density) || !(spec.base_density > 0.0))
        throw Error(ErrorKind::NonPositiveDensity, "base density must be > 0");
    if (spec.bumps.empty()) throw Error(ErrorKind::NoUnstableRegion, "profile has no bumps");
    for (const auto& b : spec.bumps) {
        if (!finite(b.amplitude) || !finite(b.center) || !finite(b.half_width))
            throw Error(ErrorKind::InvalidArgument, "bump parameters must be finite");
        if (!(b.half_width > 0.0))
            throw Error(ErrorKind::InvalidArgument, "bump half_width must be > 0");
    }

    DensityProfile p(spec);
    ProfileMetrics& m = p.metrics_;
    m.support_lo = std::numeric_limits<double>::infinity();
    m.support_hi = -m.support_lo;
    m.total_jump = 0.0;
    for (const auto& b : spec.bumps) {
        m.support_lo = std::min(m.support_lo, b.center - b.half_width);
        m.support_hi = std::max(m.support_hi, b.center + b.half_width);
        m.total_jump += b.amplitude * b.half_width * unit_bump_mass();
    }

    // Dense sampling over every bump support, ten times finer than the check grid
    // and never coarser than 2000 samples per bump.
    std::vector<double> xs;
    const double hc = check_grid.h();
    for (const auto& b : spec.bumps) {
        const int count = std::max(2000, static_cast<int>(std::ceil(20.0 * b.half_width / hc)));
        for (int i = 0; i <= count; ++i)
            xs.push_back(b.center - b.half_width + 2.0 * b.half_width * i / count);
    }
    std::sort(xs.begin(), xs.end());

    m.inf_rho = std::min(spec.base_density, spec.base_density + m.total_jump);
    m.sup_rho = std::max(spec.base_density, spec.base_density + m.total_jump);
    double best = -std::numeric_limits<double>::infinity();
    double best_x = xs.front();
    for (double x : xs) {
        const double r = p.rho(x);
        m.inf_rho = std::min(m.inf_rho, r);
        m.sup_rho = std::max(m.sup_rho, r);
        if (r > 0.0) {
            const double q = p.drho(x) / r;
            if (q > best) {
                best = q;
                best_x = x;
            }
        }
    }
    for (int i = 0; i < check_grid.n; ++i) m.inf_rho = std::min(m.inf_rho, p.rho(check_grid.node(i)));
    if (!(m.inf_rho > 0.0))
        throw Error(ErrorKind::NonPositiveDensity,
                    "density reaches " + std::to_string(m.inf_rho) + " <= 0");

    bool any_positive = false;
    for (const auto& b : spec.bumps) any_positive = any_positive || b.amplitude > 0.0;
    if (!any_positive)
        throw Error(ErrorKind::NoUnstableRegion, "no bump with positive amplitude");

    // Local refinement of the sampled maximum of rho'/rho.
    const double dx = (xs.back() - xs.front()) / static_cast<double>(xs.size());
    auto neg_ratio = [&p](double x) { return -p.drho(x) / p.rho(x); };
    auto r = boost::math::tools::brent_find_minima(neg_ratio, best_x - 2.0 * dx, best_x + 2.0 * dx,
                                                   std::numeric_limits<double>::digits / 2);
    m.sup_ratio = std::max(best, -r.second);
    m.sup_ratio = std::max(m.sup_ratio, 0.0);
    return p;
}

void DensityProfile::require_grid(const Grid1D& grid) const {
    if (grid.n < 16) throw Error(ErrorKind::InvalidArgument, "grid needs n >= 16");
    const double half = 0.5 * grid.half_length;
    if (!(metrics_.support_lo > -half && metrics_.support_hi < half))
        throw Error(ErrorKind::InvalidArgument,
                    "support of rho' must lie strictly inside [-Lz/2, Lz/2]");
}

ProfileMetrics profile_metrics(const DensityProfile& profile) { return profile.metrics(); }

std::vector<Frequency> lattice_points(double L, double radius) {
    std::vector<Frequency> out;
    const double R = radius * L;
    const int kmax = static_cast<int>(std::floor(R + 1e-9));
    for (int k1 = -kmax; k1 <= kmax; ++k1)
        for (int k2 = -kmax; k2 <= kmax; ++k2) {
            if (k1 == 0 && k2 == 0) continue;
            if (k1 * k1 + k2 * k2 <= R * R * (1.0 + 1e-12)) out.push_back({k1 / L, k2 / L});
        }
    return out;
}

}  // namespace rtmhd
