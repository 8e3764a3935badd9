#include "rtmhd/growth.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rtmhd/errors.hpp"

namespace rtmhd {

EigenPair alpha(const FormSet& forms, double s, const EigOptions& opts) {
    if (!(s >= 0.0)) throw Error(ErrorKind::InvalidArgument, "s must be >= 0");
    return min_generalized_eig(forms.energy(s), forms.J, opts);
}

std::optional<GrowthResult> growth_rate(const FormSet& forms, const GrowthOptions& opts) {
    if (!(opts.upper_factor >= 1.0) || !(opts.lower_factor > 0.0) || !(opts.lower_factor < 1.0))
        throw Error(ErrorKind::InvalidArgument, "growth bracket factors out of range");
    const double g = forms.params.g;
    const double s_hi = opts.upper_factor * std::sqrt(g * forms.profile->metrics().sup_ratio);
    const double s0 = opts.lower_factor * s_hi;

    GrowthResult res;
    res.xi = forms.xi;
    auto lam = [](const EigenPair& p) { return std::sqrt(std::max(-p.value, 0.0)); };

    EigOptions eo = opts.eig;
    EigenPair p_lo = alpha(forms, s0, eo);
    res.evaluations = 1;
    if (p_lo.value >= 0.0) return std::nullopt;
    double f_lo = s0 - lam(p_lo);
    if (f_lo >= 0.0) {
        std::ostringstream msg;
        msg << "growth rate " << lam(p_lo) << " lies below the bracket floor s0=" << s0;
        throw Error(ErrorKind::BracketFailure, msg.str());
    }
    EigenPair p_hi = alpha(forms, s_hi, eo);
    ++res.evaluations;
    double f_hi = s_hi - lam(p_hi);
    if (f_hi < 0.0) {
        std::ostringstream msg;
        msg << "f(s_hi) = " << f_hi << " < 0 at s_hi=" << s_hi << ", alpha=" << p_hi.value
            << "; the discrete forms violate the rate bound";
        throw Error(ErrorKind::BracketFailure, msg.str());
    }

    double lo = s0, hi = s_hi;
    res.s_frontier = s0;
    if (p_hi.value < 0.0) res.s_frontier = s_hi;
    for (int it = 0; it < opts.max_iterations; ++it) {
        const double lam_est = lam(std::abs(f_lo) <= std::abs(f_hi) ? p_lo : p_hi);
        const double target = opts.tol * std::max(1.0, lam_est);
        const double best_f = std::min(std::abs(f_lo), std::abs(f_hi));
        if (hi - lo <= target && best_f <= target) break;
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        // alpha is nondecreasing in s, so the endpoint values bracket alpha(mid).
        eo.lower_hint = p_lo.value - 1e-9 * std::max(1.0, std::abs(p_lo.value));
        eo.upper_hint = p_hi.value + 1e-9 * std::max(1.0, std::abs(p_hi.value));
        EigenPair p_mid = alpha(forms, mid, eo);
        ++res.evaluations;
        if (p_mid.value < 0.0) res.s_frontier = std::max(res.s_frontier, mid);
        const double f_mid = mid - lam(p_mid);
        if (f_mid < 0.0) {
            lo = mid;
            f_lo = f_mid;
            p_lo = std::move(p_mid);
        } else {
            hi = mid;
            f_hi = f_mid;
            p_hi = std::move(p_mid);
        }
    }

    const bool take_lo = std::abs(f_lo) <= std::abs(f_hi);
    res.s_star = take_lo ? lo : hi;
    res.psi = take_lo ? std::move(p_lo) : std::move(p_hi);
    res.alpha_at_s = res.psi.value;
    res.lambda = lam(res.psi);
    res.bracket_width = hi - lo;
    if (!(res.alpha_at_s < 0.0))
        throw Error(ErrorKind::BracketFailure, "fixed point reached a non-negative alpha");
    return res;
}

}  // namespace rtmhd
