#pragma once

#include <span>
#include <vector>

namespace sll {

/// Banded system stored by diagonals; lower[0] and upper[n-1] are unused.
struct Tridiagonal {
    std::vector<double> lower;
    std::vector<double> diag;
    std::vector<double> upper;

    explicit Tridiagonal(std::size_t n) : lower(n, 0.0), diag(n, 0.0), upper(n, 0.0) {}

    std::size_t size() const noexcept { return diag.size(); }

    std::vector<double> apply(std::span<const double> x) const;
};

/// Thomas algorithm, no pivoting. Callers provide diagonally dominant systems.
std::vector<double> solve(const Tridiagonal& a, std::span<const double> rhs);

/// Thomas factorization kept for repeated solves with one matrix.
class TridiagonalFactor {
public:
    explicit TridiagonalFactor(const Tridiagonal& a);

    std::vector<double> solve(std::span<const double> rhs) const;
    const Tridiagonal& matrix() const noexcept { return a_; }

private:
    Tridiagonal a_;
    std::vector<double> c_;
    std::vector<double> inv_pivot_;
};

/// max_i |(A x - rhs)_i| / max(1, max_i |rhs_i|).
double relative_residual(const Tridiagonal& a, std::span<const double> x,
                         std::span<const double> rhs);

}  // namespace sll
