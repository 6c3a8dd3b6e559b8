#include "sll/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sll/errors.hpp"
#include "sll/tridiagonal.hpp"

namespace sll {

Grid1D::Grid1D(std::size_t n_interior)
    : n_(n_interior), h_(1.0 / static_cast<double>(n_interior + 1)) {
    if (n_interior < kMinInterior) {
        throw ConfigError("Grid1D needs at least " + std::to_string(kMinInterior) +
                          " interior nodes, got " + std::to_string(n_interior));
    }
}

void Grid1D::check(std::span<const double> u) const {
    if (u.size() != n_) {
        throw DimensionError("field has " + std::to_string(u.size()) + " entries, grid has " +
                             std::to_string(n_) + " interior nodes");
    }
}

InteriorField laplacian_with_flux(std::span<const double> u, const BoundaryField& flux,
                                  const Grid1D& grid) {
    grid.check(u);
    const std::size_t n = grid.size();
    const double h = grid.h();
    const double inv_h2 = 1.0 / (h * h);
    InteriorField out(n);
    // Ghost u(0) = (4 u_1 - u_2 + 2 h g)/3 folded into the first row.
    out[0] = (2.0 / 3.0) * (u[1] - u[0] + h * flux.left) * inv_h2;
    for (std::size_t i = 1; i + 1 < n; ++i) out[i] = (u[i - 1] - 2.0 * u[i] + u[i + 1]) * inv_h2;
    out[n - 1] = (2.0 / 3.0) * (u[n - 2] - u[n - 1] + h * flux.right) * inv_h2;
    return out;
}

BoundaryField trace(std::span<const double> u, const Grid1D& grid) {
    grid.check(u);
    const std::size_t n = grid.size();
    return {2.0 * u[0] - u[1], 2.0 * u[n - 1] - u[n - 2]};
}

BoundaryField boundary_restriction(std::span<const double> u, const Grid1D& grid) {
    grid.check(u);
    return {u.front(), u.back()};
}

double inner(std::span<const double> a, std::span<const double> b, const Grid1D& grid) {
    grid.check(a);
    grid.check(b);
    const std::size_t n = grid.size();
    double interior = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) interior += a[i] * b[i];
    return grid.h() * interior + 1.5 * grid.h() * (a[0] * b[0] + a[n - 1] * b[n - 1]);
}

double squared_norm(std::span<const double> u, const Grid1D& grid) { return inner(u, u, grid); }

double squared_norm(const BoundaryField& b) { return b.left * b.left + b.right * b.right; }

double inner(const BoundaryField& a, const BoundaryField& b) {
    return a.left * b.left + a.right * b.right;
}

double dirichlet_form(std::span<const double> a, std::span<const double> b, const Grid1D& grid) {
    grid.check(a);
    grid.check(b);
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) acc += (a[i + 1] - a[i]) * (b[i + 1] - b[i]);
    return acc / grid.h();
}

FieldNorms norms(std::span<const double> u, const Grid1D& grid) {
    const double l2_sq = squared_norm(u, grid);
    const auto tr = trace(u, grid);
    const std::size_t n = grid.size();
    double faces = (u[0] - tr.left) * (u[0] - tr.left) + (tr.right - u[n - 1]) * (tr.right - u[n - 1]);
    for (std::size_t i = 0; i + 1 < n; ++i) faces += (u[i + 1] - u[i]) * (u[i + 1] - u[i]);
    return {std::sqrt(l2_sq), std::sqrt(l2_sq + faces / grid.h())};
}

FieldNorms norms(const BoundaryField& b) {
    const double l2 = std::sqrt(squared_norm(b));
    return {l2, l2};
}

double dual_norm_hminus1(std::span<const double> f, const Grid1D& grid) {
    grid.check(f);
    const std::size_t n = grid.size();
    const double inv_h2 = 1.0 / (grid.h() * grid.h());
    Tridiagonal a(n);
    for (std::size_t i = 0; i < n; ++i) {
        const bool edge = (i == 0 || i + 1 == n);
        const double s = edge ? (2.0 / 3.0) * inv_h2 : inv_h2;
        a.diag[i] = 1.0 + (edge ? s : 2.0 * s);
        if (i > 0) a.lower[i] = -s;
        if (i + 1 < n) a.upper[i] = -s;
    }
    const auto w = solve(a, f);
    if (relative_residual(a, w, f) > 1e-8) {
        throw NumericalFault("dual_norm_hminus1: Riesz solve residual above 1e-8");
    }
    // <f, w> >= 0 analytically; clamp round-off below zero.
    return std::sqrt(std::max(0.0, inner(f, w, grid)));
}

}  // namespace sll
