#pragma once

#include <optional>
#include <vector>

#include "rtmhd/banded.hpp"

namespace rtmhd {

struct EigenPair {
    double value = 0.0;
    std::vector<double> vec;  // B-normalized, largest-magnitude entry positive
    double residual = 0.0;    // |(A - value B) vec| / |B vec|
    int iterations = 0;       // factorizations spent
};

struct EigOptions {
    double tol = 1e-10;  // bisection width relative to max(1, |alpha|)
    int inverse_steps = 5;
    int max_retries = 8;
    double residual_limit = 1e-8;
    // Optional bracket for the smallest eigenvalue; verified before use.
    std::optional<double> lower_hint;
    std::optional<double> upper_hint;
};

/// Number of eigenvalues of the pencil (A, B) below sigma, B positive definite.
/// Perturbs sigma on a vanishing pivot; throws FactorizationBreakdown after max_retries.
int inertia_count(const SymBand& A, const SymBand& B, double sigma, int max_retries = 8);

/// Smallest eigenvalue of A x = alpha B x by inertia bisection plus inverse iteration.
EigenPair min_generalized_eig(const SymBand& A, const SymBand& B, const EigOptions& opts = {});

/// Largest eigenvalue, computed as the negated smallest eigenvalue of (-A, B).
EigenPair max_generalized_eig(const SymBand& A, const SymBand& B, const EigOptions& opts = {});

}  // namespace rtmhd
