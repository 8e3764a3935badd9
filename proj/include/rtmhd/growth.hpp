#pragma once

#include <optional>

#include "rtmhd/eigensolver.hpp"
#include "rtmhd/forms.hpp"

namespace rtmhd {

/// Smallest eigenvalue of (|xi|^2 E0 + s E1, J) with its J-normalized minimizer.
EigenPair alpha(const FormSet& forms, double s, const EigOptions& opts = {});

struct GrowthOptions {
    double tol = 1e-8;             // relative to max(1, lambda)
    double lower_factor = 1e-8;    // s0 = lower_factor * s_hi
    double upper_factor = 1.0;     // s_hi = upper_factor * sqrt(g sup_ratio), must be >= 1
    int max_iterations = 200;
    EigOptions eig;
};

struct GrowthResult {
    Frequency xi;
    double lambda = 0.0;
    double s_star = 0.0;
    double alpha_at_s = 0.0;
    EigenPair psi;
    double bracket_width = 0.0;
    double s_frontier = 0.0;  // largest explored s with alpha(s) < 0
    int evaluations = 0;
};

/// Solves s = sqrt(-alpha(s)) by bisection. Returns nullopt when alpha(s0) >= 0.
std::optional<GrowthResult> growth_rate(const FormSet& forms, const GrowthOptions& opts = {});

}  // namespace rtmhd
