#include "sll/limits.hpp"

#include <algorithm>
#include <cmath>

#include "sll/errors.hpp"

namespace sll {

namespace {

Tridiagonal parabolic_matrix(const Grid1D& grid, double dt) {
    // I - dt (Lap - I) with zero flux, plus 1/W on the boundary rows.
    const std::size_t n = grid.size();
    const double inv_h2 = 1.0 / (grid.h() * grid.h());
    Tridiagonal a(n);
    for (std::size_t i = 0; i < n; ++i) {
        const bool edge = (i == 0 || i + 1 == n);
        const double s = dt * (edge ? (2.0 / 3.0) * inv_h2 : inv_h2);
        a.diag[i] = 1.0 + dt + (edge ? s : 2.0 * s);
        if (i > 0) a.lower[i] = -s;
        if (i + 1 < n) a.upper[i] = -s;
    }
    a.diag[0] += 1.0 / grid.weight(0);
    a.diag[n - 1] += 1.0 / grid.weight(n - 1);
    return a;
}

std::size_t step_count(double t_end, double dt) {
    const double ratio = t_end / dt;
    const double rounded = std::round(ratio);
    if (!(dt > 0.0) || rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * std::max(1.0, rounded)) {
        throw ContractError("t_end / dt must be a positive integer within 1e-9");
    }
    return static_cast<std::size_t>(rounded);
}

}  // namespace

bool ParabolicState::finite() const noexcept {
    return std::all_of(u.begin(), u.end(), [](double x) { return std::isfinite(x); }) &&
           std::isfinite(delta.left) && std::isfinite(delta.right);
}

ParabolicStepper::ParabolicStepper(const Grid1D& grid, double eps, double alpha, double dt)
    : grid_(grid), dt_(dt), noise_amp_(std::pow(eps, alpha)), matrix_(parabolic_matrix(grid, dt)),
      factor_(matrix_) {
    if (!(dt > 0.0)) throw ConfigError("parabolic dt must be positive");
}

ParabolicState ParabolicStepper::step(const ParabolicState& s, const WienerIncrement& inc) const {
    grid_.check(s.u);
    grid_.check(inc.dW1);
    if (std::abs(inc.dt - dt_) > 1e-12 * dt_) {
        throw ContractError("increment dt does not match the stepper dt");
    }
    const std::size_t n = grid_.size();
    const double wl = grid_.weight(0);
    const double wr = grid_.weight(n - 1);
    // Flux without the implicit -P(u' - u)/dt part.
    const BoundaryField g0 = -1.0 * s.delta + (noise_amp_ / dt_) * inc.dW2;

    std::vector<double> rhs(n);
    for (std::size_t i = 0; i < n; ++i) {
        rhs[i] = s.u[i] + dt_ * std::sin(s.u[i]) + noise_amp_ * inc.dW1[i];
    }
    rhs[0] += (dt_ * g0.left + s.u[0]) / wl;
    rhs[n - 1] += (dt_ * g0.right + s.u[n - 1]) / wr;

    ParabolicState out;
    out.u = factor_.solve(rhs);
    if (relative_residual(matrix_, out.u, rhs) > 1e-8) {
        throw NumericalFault("parabolic step: solve residual above 1e-8");
    }
    const BoundaryField pu_rate = (1.0 / dt_) * (boundary_restriction(out.u, grid_) -
                                                 boundary_restriction(s.u, grid_));
    out.delta = s.delta + dt_ * (g0 - pu_rate);
    out.t = s.t + dt_;
    if (!out.finite()) throw BlowUpError(out.t, "parabolic limit produced a non-finite state");
    return out;
}

ParabolicState step_parabolic(const ParabolicState& state, double eps, double alpha, double dt,
                              const WienerIncrement& inc, const Grid1D& grid) {
    return ParabolicStepper(grid, eps, alpha, dt).step(state, inc);
}

WaveState step_wave(const WaveState& state, double eps, double dt, const Grid1D& grid) {
    FullParams p;
    p.eps = eps;
    p.dt = dt;
    p.t_end = dt;
    return step_full(state, p, WienerIncrement::zero(grid, dt), grid);
}

std::vector<ParabolicState> simulate_parabolic(
    const ParabolicState& initial, double eps, double alpha, double dt, double t_end,
    const Grid1D& grid, const NoiseDriver& noise, bool keep_states,
    const std::function<void(const ParabolicState&)>& observer) {
    grid.check(initial.u);
    if (!initial.finite()) throw ContractError("simulate_parabolic: initial state is not finite");
    const std::size_t steps = step_count(t_end, dt);
    const ParabolicStepper stepper(grid, eps, alpha, dt);
    std::vector<ParabolicState> out;
    if (keep_states) out.reserve(steps + 1);
    ParabolicState s = initial;
    if (observer) observer(s);
    for (std::size_t k = 0; k < steps; ++k) {
        ParabolicState next = stepper.step(s, noise.increment(k, dt, grid));
        next.t = initial.t + static_cast<double>(k + 1) * dt;
        if (keep_states) out.push_back(std::move(s));
        s = std::move(next);
        if (observer) observer(s);
    }
    if (keep_states) out.push_back(std::move(s));
    return out;
}

}  // namespace sll
