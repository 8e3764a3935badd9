#include "rtmhd/banded.hpp"

#include <algorithm>
#include <cmath>

#include "rtmhd/errors.hpp"

namespace rtmhd {

SymBand::SymBand(int n, int kd) : n_(n), kd_(std::min(kd, n - 1)) {
    if (n <= 0 || kd < 0) throw Error(ErrorKind::InvalidArgument, "invalid band dimensions");
    data_.assign(static_cast<size_t>(kd_ + 1) * n_, 0.0);
}

double SymBand::operator()(int i, int j) const {
    if (i < j) std::swap(i, j);
    if (i - j > kd_) return 0.0;
    return lower(i, j);
}

void SymBand::add(int i, int j, double v) {
    if (i < j) std::swap(i, j);
    if (i - j > kd_) throw Error(ErrorKind::InvalidArgument, "entry outside band");
    lower(i, j) += v;
}

std::vector<double> SymBand::apply(const std::vector<double>& x) const {
    std::vector<double> y(n_, 0.0);
    for (int j = 0; j < n_; ++j) {
        y[j] += lower(j, j) * x[j];
        const int top = std::min(n_ - 1, j + kd_);
        for (int i = j + 1; i <= top; ++i) {
            const double a = lower(i, j);
            y[i] += a * x[j];
            y[j] += a * x[i];
        }
    }
    return y;
}

double SymBand::quadratic(const std::vector<double>& x) const {
    const auto y = apply(x);
    double s = 0.0;
    for (int i = 0; i < n_; ++i) s += x[i] * y[i];
    return s;
}

SymBand SymBand::combine(double a, const SymBand& A, double b, const SymBand& B) {
    if (A.n_ != B.n_) throw Error(ErrorKind::InvalidArgument, "band size mismatch");
    SymBand C(A.n_, std::max(A.kd_, B.kd_));
    for (int d = 0; d <= A.kd_; ++d)
        for (int j = 0; j + d < A.n_; ++j) C.lower(j + d, j) += a * A.lower(j + d, j);
    for (int d = 0; d <= B.kd_; ++d)
        for (int j = 0; j + d < B.n_; ++j) C.lower(j + d, j) += b * B.lower(j + d, j);
    return C;
}

SymBand& SymBand::operator+=(const SymBand& other) {
    *this = combine(1.0, *this, 1.0, other);
    return *this;
}

SymBand& SymBand::scale(double c) {
    for (double& v : data_) v *= c;
    return *this;
}

void SymBand::gershgorin(double& lo, double& hi) const {
    std::vector<double> radius(n_, 0.0);
    for (int d = 1; d <= kd_; ++d)
        for (int j = 0; j + d < n_; ++j) {
            const double a = std::abs(lower(j + d, j));
            radius[j] += a;
            radius[j + d] += a;
        }
    lo = hi = lower(0, 0);
    for (int i = 0; i < n_; ++i) {
        lo = std::min(lo, lower(i, i) - radius[i]);
        hi = std::max(hi, lower(i, i) + radius[i]);
    }
}

double SymBand::max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
}

bool BandLdlt::factor(const SymBand& A, const SymBand* B, double sigma, double pivot_floor) {
    n_ = A.size();
    kd_ = std::max(A.bandwidth(), B ? B->bandwidth() : 0);
    l_.assign(static_cast<size_t>(kd_ + 1) * n_, 0.0);
    d_.assign(n_, 0.0);
    negative_ = 0;
    auto L = [this](int i, int j) -> double& { return l_[static_cast<size_t>(i - j) * n_ + j]; };
    for (int j = 0; j < n_; ++j) {
        const int top = std::min(n_ - 1, j + kd_);
        for (int i = j; i <= top; ++i) L(i, j) = A(i, j) - (B ? sigma * (*B)(i, j) : 0.0);
    }
    // Right-looking elimination restricted to the band.
    std::vector<double> w(kd_ + 1);
    for (int j = 0; j < n_; ++j) {
        const double dj = L(j, j);
        if (!(std::abs(dj) > pivot_floor)) return false;
        d_[j] = dj;
        if (dj < 0.0) ++negative_;
        const int top = std::min(n_ - 1, j + kd_);
        for (int i = j + 1; i <= top; ++i) {
            w[i - j] = L(i, j);
            L(i, j) = w[i - j] / dj;
        }
        for (int k = j + 1; k <= top; ++k) {
            for (int i = k; i <= top; ++i) L(i, k) -= L(i, j) * w[k - j];
        }
        L(j, j) = 1.0;
    }
    return true;
}

std::vector<double> BandLdlt::solve(const std::vector<double>& rhs) const {
    std::vector<double> x = rhs;
    auto L = [this](int i, int j) { return l_[static_cast<size_t>(i - j) * n_ + j]; };
    for (int j = 0; j < n_; ++j) {
        const int top = std::min(n_ - 1, j + kd_);
        for (int i = j + 1; i <= top; ++i) x[i] -= L(i, j) * x[j];
    }
    for (int j = 0; j < n_; ++j) x[j] /= d_[j];
    for (int j = n_ - 1; j >= 0; --j) {
        const int top = std::min(n_ - 1, j + kd_);
        for (int i = j + 1; i <= top; ++i) x[j] -= L(i, j) * x[i];
    }
    return x;
}

}  // namespace rtmhd
