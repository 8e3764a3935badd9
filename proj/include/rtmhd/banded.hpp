#pragma once

#include <vector>

namespace rtmhd {

/// Symmetric banded matrix storing the lower band: entry (j + d, j) for d in [0, kd].
class SymBand {
public:
    SymBand() = default;
    SymBand(int n, int kd);

    int size() const { return n_; }
    int bandwidth() const { return kd_; }

    /// Element access for i >= j, i - j <= kd.
    double& lower(int i, int j) { return data_[static_cast<size_t>(i - j) * n_ + j]; }
    double lower(int i, int j) const { return data_[static_cast<size_t>(i - j) * n_ + j]; }
    /// Symmetric lookup, zero outside the band.
    double operator()(int i, int j) const;
    void add(int i, int j, double v);

    std::vector<double> apply(const std::vector<double>& x) const;
    double quadratic(const std::vector<double>& x) const;

    /// a*A + b*B with the larger bandwidth.
    static SymBand combine(double a, const SymBand& A, double b, const SymBand& B);
    SymBand& operator+=(const SymBand& other);
    SymBand& scale(double c);

    /// Gershgorin interval [lo, hi] enclosing the spectrum.
    void gershgorin(double& lo, double& hi) const;
    double max_abs() const;
    bool operator==(const SymBand& other) const = default;

private:
    int n_ = 0;
    int kd_ = 0;
    std::vector<double> data_;
};

/// LDL^T without pivoting of a symmetric band matrix (used both for inertia counts of
/// shifted pencils and for SPD solves).
class BandLdlt {
public:
    /// Factorizes A - sigma*B. Returns false if a pivot falls below pivot_floor in magnitude.
    bool factor(const SymBand& A, const SymBand* B = nullptr, double sigma = 0.0,
                double pivot_floor = 0.0);
    int negative_pivots() const { return negative_; }
    std::vector<double> solve(const std::vector<double>& rhs) const;

private:
    int n_ = 0;
    int kd_ = 0;
    std::vector<double> l_;  // unit lower factor, band storage like SymBand
    std::vector<double> d_;
    int negative_ = 0;
};

}  // namespace rtmhd
