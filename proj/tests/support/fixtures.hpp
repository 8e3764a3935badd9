#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "rtmhd/banded.hpp"
#include "rtmhd/model.hpp"

namespace fixtures {

using namespace rtmhd;

// rho = 1 + int bump; a single heavy-over-light layer with total jump > 0.
inline ProfileSpec canonical_spec() { return {1.0, {{1.0, 0.0, 1.0}}}; }
// Net jump < 0 with one unstable layer; finite critical number.
inline ProfileSpec finite_spec() { return {5.0, {{1.0, 1.0, 0.5}, {-3.0, -1.0, 0.5}}}; }
// Two unstable layers of different strength.
inline ProfileSpec double_spec() { return {2.0, {{0.6, -1.5, 0.8}, {1.2, 1.2, 0.6}}}; }

inline DensityProfile make(const ProfileSpec& s, const Grid1D& g) { return DensityProfile::build(s, g); }

inline Eigen::MatrixXd dense(const SymBand& A) {
    const int n = A.size();
    Eigen::MatrixXd M(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) M(i, j) = A(i, j);
    return M;
}

// Full generalized spectrum, ascending.
inline Eigen::VectorXd dense_spectrum(const SymBand& A, const SymBand& B) {
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(dense(A), dense(B), Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

struct Pencil {
    SymBand A, B;
};

// Random symmetric A and diagonally dominated SPD B with the given bandwidth.
inline Pencil random_pencil(std::mt19937_64& rng, int n, int kd) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    SymBand A(n, kd), B(n, kd);
    for (int j = 0; j < n; ++j)
        for (int d = 0; d <= kd && j + d < n; ++d) {
            A.lower(j + d, j) = u(rng);
            B.lower(j + d, j) = d == 0 ? 0.0 : 0.4 * u(rng) / kd;
        }
    for (int j = 0; j < n; ++j) B.lower(j, j) = 1.0 + 0.5 * (u(rng) + 1.0);
    return {A, B};
}

}  // namespace fixtures
