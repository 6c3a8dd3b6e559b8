#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sll {

/// Values carried on the interior nodes of a Grid1D.
using InteriorField = std::vector<double>;

/// Values on the two-point boundary {0, 1}. In one dimension every boundary
/// function space reduces to R^2 with the Euclidean norm.
struct BoundaryField {
    double left = 0.0;
    double right = 0.0;

    BoundaryField& operator+=(const BoundaryField& o) {
        left += o.left;
        right += o.right;
        return *this;
    }
    friend BoundaryField operator+(BoundaryField a, const BoundaryField& b) { return a += b; }
    friend BoundaryField operator-(const BoundaryField& a, const BoundaryField& b) {
        return {a.left - b.left, a.right - b.right};
    }
    friend BoundaryField operator*(double s, const BoundaryField& a) {
        return {s * a.left, s * a.right};
    }
    friend bool operator==(const BoundaryField&, const BoundaryField&) = default;
};

/// Uniform node-centred discretization of D = (0, 1).
///
/// Interior nodes sit at x_i = (i + 1) h for i = 0..n-1 with h = 1/(n + 1);
/// the endpoints are not unknowns. The node adjacent to each endpoint owns
/// the control volume [0, 3h/2] (resp. [1 - 3h/2, 1]), every other node a
/// volume of width h, so the quadrature weights sum to exactly 1. Those
/// weights define the discrete L2 inner product, and the flux Laplacian is
/// self-adjoint with respect to it.
class Grid1D {
public:
    static constexpr std::size_t kMinInterior = 3;

    explicit Grid1D(std::size_t n_interior);

    std::size_t size() const noexcept { return n_; }
    double h() const noexcept { return h_; }
    double x(std::size_t i) const noexcept { return static_cast<double>(i + 1) * h_; }
    double weight(std::size_t i) const noexcept {
        return (i == 0 || i + 1 == n_) ? 1.5 * h_ : h_;
    }

    /// Samples f at the interior nodes.
    template <typename F>
    InteriorField sample(F&& f) const {
        InteriorField out(n_);
        for (std::size_t i = 0; i < n_; ++i) out[i] = f(x(i));
        return out;
    }

    InteriorField zeros() const { return InteriorField(n_, 0.0); }

    /// Throws DimensionError unless u has one entry per interior node.
    void check(std::span<const double> u) const;

    friend bool operator==(const Grid1D& a, const Grid1D& b) { return a.n_ == b.n_; }

private:
    std::size_t n_;
    double h_;
};

struct FieldNorms {
    double l2 = 0.0;
    double h1 = 0.0;
};

/// Second-order Laplacian with the outward normal derivative prescribed at
/// both endpoints. The ghost value at each endpoint comes from the
/// three-point one-sided flux formula, which makes the stencil exact for
/// quadratics.
InteriorField laplacian_with_flux(std::span<const double> u, const BoundaryField& flux,
                                  const Grid1D& grid);

/// Boundary values by linear extrapolation from the two nearest nodes.
BoundaryField trace(std::span<const double> u, const Grid1D& grid);

/// Values of the boundary control volumes (u at the first and last node).
/// This is the boundary functional paired with the flux by discrete
/// integration by parts, so the dynamics use it for the trace coupling.
BoundaryField boundary_restriction(std::span<const double> u, const Grid1D& grid);

/// Weighted inner product h-quadrature <a, b>.
double inner(std::span<const double> a, std::span<const double> b, const Grid1D& grid);
double squared_norm(std::span<const double> u, const Grid1D& grid);
double squared_norm(const BoundaryField& b);
double inner(const BoundaryField& a, const BoundaryField& b);

/// Dirichlet form sum over interior faces (a_{i+1}-a_i)(b_{i+1}-b_i)/h.
/// Satisfies <laplacian_with_flux(u, g), w> = -dirichlet_form(u, w)
///   + <g, boundary_restriction(w)> exactly.
double dirichlet_form(std::span<const double> a, std::span<const double> b, const Grid1D& grid);

/// L2 and H1 norms. The H1 seminorm uses n + 1 faces, closing the two end
/// faces with the extrapolated trace values.
FieldNorms norms(std::span<const double> u, const Grid1D& grid);
FieldNorms norms(const BoundaryField& b);

/// Dual norm of H^1(D): sqrt(<f, w>) where (I - Laplacian) w = f with zero flux.
double dual_norm_hminus1(std::span<const double> f, const Grid1D& grid);

}  // namespace sll
