#include "rtmhd/operators.hpp"

#include <algorithm>
#include <cmath>

namespace rtmhd {

Vec DiffOps::d1(const Vec& node) const {
    Vec out(n + 1);
    for (int k = 0; k <= n; ++k) {
        const double right = k < n ? node[k] : 0.0;
        const double left = k > 0 ? node[k - 1] : 0.0;
        out[k] = (right - left) / h;
    }
    return out;
}

Vec DiffOps::d1_mid(const Vec& mid) const {
    Vec out(n);
    for (int i = 0; i < n; ++i) out[i] = (mid[i + 1] - mid[i]) / h;
    return out;
}

Vec DiffOps::d1_mid_ext(const Vec& mid) const {
    Vec out(n + 2);
    for (int j = 0; j <= n + 1; ++j) {
        const double right = j <= n ? mid[j] : 0.0;
        const double left = j > 0 ? mid[j - 1] : 0.0;
        out[j] = (right - left) / h;
    }
    return out;
}

Vec DiffOps::d1_ext_mid(const Vec& ext) const {
    Vec out(n + 1);
    for (int k = 0; k <= n; ++k) out[k] = (ext[k + 1] - ext[k]) / h;
    return out;
}

Vec DiffOps::d2_ext(const Vec& node) const { return d1_mid_ext(d1(node)); }

Vec DiffOps::d2(const Vec& node) const { return d1_mid(d1(node)); }

Vec DiffOps::d2_mid(const Vec& mid) const { return d1_ext_mid(d1_mid_ext(mid)); }

Vec DiffOps::d3(const Vec& node) const { return d1_ext_mid(d2_ext(node)); }

Vec mid_to_node(const Vec& mid) {
    const int n = static_cast<int>(mid.size()) - 1;
    auto at = [&](int k) { return (k < 0 || k > n) ? 0.0 : mid[k]; };
    Vec out(n);
    for (int i = 0; i < n; ++i)
        out[i] = (-at(i - 1) + 9.0 * at(i) + 9.0 * at(i + 1) - at(i + 2)) / 16.0;
    return out;
}

double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    const size_t m = std::min(a.size(), b.size());
    for (size_t i = 0; i < m; ++i) s += a[i] * b[i];
    return s;
}

double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }

}  // namespace rtmhd
