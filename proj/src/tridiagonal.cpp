#include "sll/tridiagonal.hpp"

#include <algorithm>
#include <cmath>

#include "sll/errors.hpp"

namespace sll {

std::vector<double> Tridiagonal::apply(std::span<const double> x) const {
    const std::size_t n = size();
    if (x.size() != n) throw DimensionError("tridiagonal apply: size mismatch");
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = diag[i] * x[i];
        if (i > 0) acc += lower[i] * x[i - 1];
        if (i + 1 < n) acc += upper[i] * x[i + 1];
        y[i] = acc;
    }
    return y;
}

std::vector<double> solve(const Tridiagonal& a, std::span<const double> rhs) {
    const std::size_t n = a.size();
    if (rhs.size() != n || n == 0) throw DimensionError("tridiagonal solve: size mismatch");

    std::vector<double> c(n), d(n), x(n);
    double pivot = a.diag[0];
    if (pivot == 0.0) throw NumericalFault("tridiagonal solve: zero pivot");
    c[0] = a.upper[0] / pivot;
    d[0] = rhs[0] / pivot;
    for (std::size_t i = 1; i < n; ++i) {
        pivot = a.diag[i] - a.lower[i] * c[i - 1];
        if (pivot == 0.0) throw NumericalFault("tridiagonal solve: zero pivot");
        c[i] = (i + 1 < n) ? a.upper[i] / pivot : 0.0;
        d[i] = (rhs[i] - a.lower[i] * d[i - 1]) / pivot;
    }
    x[n - 1] = d[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) x[i] = d[i] - c[i] * x[i + 1];
    return x;
}

TridiagonalFactor::TridiagonalFactor(const Tridiagonal& a)
    : a_(a), c_(a.size()), inv_pivot_(a.size()) {
    const std::size_t n = a.size();
    if (n == 0) throw DimensionError("tridiagonal factor: empty matrix");
    for (std::size_t i = 0; i < n; ++i) {
        const double pivot = a.diag[i] - (i > 0 ? a.lower[i] * c_[i - 1] : 0.0);
        if (pivot == 0.0) throw NumericalFault("tridiagonal factor: zero pivot");
        inv_pivot_[i] = 1.0 / pivot;
        c_[i] = (i + 1 < n) ? a.upper[i] * inv_pivot_[i] : 0.0;
    }
}

std::vector<double> TridiagonalFactor::solve(std::span<const double> rhs) const {
    const std::size_t n = a_.size();
    if (rhs.size() != n) throw DimensionError("tridiagonal solve: size mismatch");
    std::vector<double> x(n);
    x[0] = rhs[0] * inv_pivot_[0];
    for (std::size_t i = 1; i < n; ++i) x[i] = (rhs[i] - a_.lower[i] * x[i - 1]) * inv_pivot_[i];
    for (std::size_t i = n - 1; i-- > 0;) x[i] -= c_[i] * x[i + 1];
    return x;
}

double relative_residual(const Tridiagonal& a, std::span<const double> x,
                         std::span<const double> rhs) {
    const auto ax = a.apply(x);
    double scale = 1.0;
    double worst = 0.0;
    for (std::size_t i = 0; i < rhs.size(); ++i) {
        scale = std::max(scale, std::abs(rhs[i]));
        worst = std::max(worst, std::abs(ax[i] - rhs[i]));
    }
    return worst / scale;
}

}  // namespace sll
