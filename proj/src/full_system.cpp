#include "sll/full_system.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sll/errors.hpp"

namespace sll {

namespace {

bool is_integer_ratio(double num, double den, std::uint64_t& out) {
    const double ratio = num / den;
    const double rounded = std::round(ratio);
    if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * std::max(1.0, rounded)) return false;
    out = static_cast<std::uint64_t>(rounded);
    return true;
}

bool all_finite(std::span<const double> x) {
    return std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); });
}

/// (Lap - I) with zero flux, as the tridiagonal used by the implicit steps.
Tridiagonal neumann_operator_minus_identity(const Grid1D& grid) {
    const std::size_t n = grid.size();
    const double inv_h2 = 1.0 / (grid.h() * grid.h());
    Tridiagonal a(n);
    for (std::size_t i = 0; i < n; ++i) {
        const bool edge = (i == 0 || i + 1 == n);
        const double s = edge ? (2.0 / 3.0) * inv_h2 : inv_h2;
        a.diag[i] = -(edge ? s : 2.0 * s) - 1.0;
        if (i > 0) a.lower[i] = s;
        if (i + 1 < n) a.upper[i] = s;
    }
    return a;
}

Tridiagonal full_step_matrix(const Grid1D& grid, double dt, double relax) {
    // I - (b dt / 4)(Lap - I) + b beta / (2 W) at the two boundary cells.
    auto a = neumann_operator_minus_identity(grid);
    const std::size_t n = grid.size();
    const double s = relax * dt / 4.0;
    for (std::size_t i = 0; i < n; ++i) {
        a.diag[i] = 1.0 - s * a.diag[i];
        a.lower[i] *= -s;
        a.upper[i] *= -s;
    }
    const double beta = 0.5 * relax / (1.0 + s);
    const double w = grid.weight(0);
    a.diag[0] += relax * beta / (2.0 * w);
    a.diag[n - 1] += relax * beta / (2.0 * w);
    return a;
}

}  // namespace

bool alpha_admissible(double alpha) noexcept {
    return std::isfinite(alpha) && alpha >= 0.5 && alpha != 1.0;
}

void FullParams::validate() const {
    if (!(eps > 0.0 && eps < 0.5)) throw ConfigError("eps must lie in (0, 1/2)");
    if (!alpha_admissible(alpha)) {
        throw ConfigError("alpha must lie in [1/2, 1) or (1, inf); got " + std::to_string(alpha));
    }
    if (!(r > 0.0 && r < 0.5)) throw ConfigError("r must lie in (0, 1/2)");
    if (!(dt > 0.0)) throw ConfigError("dt must be positive");
    if (!(t_end > 0.0)) throw ConfigError("t_end must be positive");
    std::uint64_t n = 0;
    if (!is_integer_ratio(t_end, dt, n)) {
        throw ContractError("t_end / dt must be an integer within 1e-9 (t_end = " +
                            std::to_string(t_end) + ", dt = " + std::to_string(dt) + ")");
    }
    if (dt > eps / 10.0 * (1.0 + 1e-12)) throw ConfigError("dt must be at most eps/10");
}

std::size_t FullParams::steps() const {
    std::uint64_t n = 0;
    if (!is_integer_ratio(t_end, dt, n)) throw ContractError("t_end / dt is not an integer");
    return static_cast<std::size_t>(n);
}

bool FullState::finite() const noexcept {
    return all_finite(u) && all_finite(v) && std::isfinite(delta.left) &&
           std::isfinite(delta.right) && std::isfinite(theta.left) && std::isfinite(theta.right);
}

FullStepper::FullStepper(const Grid1D& grid, double eps, double alpha, double dt)
    : grid_(grid), eps_(eps), alpha_(alpha), dt_(dt), ou_(eps, alpha, dt),
      factor_(full_step_matrix(grid, dt, ou_.relax)) {}

FullState FullStepper::step(const FullState& s, const WienerIncrement& inc) const {
    grid_.check(s.u);
    grid_.check(s.v);
    grid_.check(inc.dW1);
    if (std::abs(inc.dt - dt_) > 1e-12 * dt_) {
        throw ContractError("increment dt does not match the stepper dt");
    }
    const std::size_t n = grid_.size();
    const double b = ou_.relax;
    const double q = b * dt_ / 4.0;
    const double w = grid_.weight(0);

    // Damping and noise: exact OU transition of both velocities.
    const auto v_star = ou_update(s.v, ou_, inc.dW1);
    const BoundaryField th_star = ou_update(s.theta, ou_, inc.dW2);

    // Midpoint coupling. theta' = rho - beta P v' from the boundary equation.
    const BoundaryField pv_star = boundary_restriction(v_star, grid_);
    const double beta = 0.5 * b / (1.0 + q);
    const BoundaryField rho =
        (1.0 / (1.0 + q)) * ((1.0 - q) * th_star - b * s.delta - (0.5 * b) * pv_star);

    InteriorField u_pred(n);
    for (std::size_t i = 0; i < n; ++i) u_pred[i] = s.u[i] + 0.25 * dt_ * v_star[i];
    const auto lap = laplacian_with_flux(u_pred, {}, grid_);
    std::vector<double> rhs(n);
    for (std::size_t i = 0; i < n; ++i) {
        rhs[i] = v_star[i] + b * (lap[i] - u_pred[i] + std::sin(s.u[i]));
    }
    rhs[0] += b * (th_star.left + rho.left) / (2.0 * w);
    rhs[n - 1] += b * (th_star.right + rho.right) / (2.0 * w);

    FullState out;
    out.v = factor_.solve(rhs);
    out.theta = rho - beta * boundary_restriction(out.v, grid_);
    out.u.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.u[i] = s.u[i] + 0.5 * dt_ * (v_star[i] + out.v[i]);
    out.delta = s.delta + (0.5 * dt_) * (th_star + out.theta);
    out.t = s.t + dt_;
    if (!out.finite()) throw BlowUpError(out.t, "full system produced a non-finite state");
    return out;
}

FullState step_full(const FullState& state, const FullParams& params, const WienerIncrement& inc,
                    const Grid1D& grid) {
    if (!state.finite()) throw ContractError("step_full: input state is not finite");
    return FullStepper(grid, params.eps, params.alpha, params.dt).step(state, inc);
}

InteriorField velocity_forcing(const FullState& before, const FullState& after, double dt,
                               const Grid1D& grid) {
    const std::size_t n = grid.size();
    InteriorField mid(n);
    for (std::size_t i = 0; i < n; ++i) mid[i] = 0.5 * (before.u[i] + after.u[i]);
    const BoundaryField flux = (1.0 / dt) * (after.delta - before.delta);
    auto f = laplacian_with_flux(mid, flux, grid);
    for (std::size_t i = 0; i < n; ++i) f[i] += -mid[i] + std::sin(before.u[i]);
    return f;
}

BoundaryField boundary_forcing(const FullState& before, const FullState& after, double dt,
                               const Grid1D& grid) {
    const BoundaryField mid_delta = 0.5 * (before.delta + after.delta);
    const BoundaryField pv = (1.0 / dt) * (boundary_restriction(after.u, grid) -
                                           boundary_restriction(before.u, grid));
    return {-mid_delta.left - pv.left, -mid_delta.right - pv.right};
}

std::uint64_t master_stride(double dt, double master_dt) {
    std::uint64_t stride = 0;
    if (!(master_dt > 0.0) || !is_integer_ratio(dt, master_dt, stride)) {
        throw ContractError("stepper dt " + std::to_string(dt) +
                            " is not an integer multiple of the master step " +
                            std::to_string(master_dt));
    }
    return stride;
}

WienerIncrement NoiseDriver::increment(std::size_t step, double dt, const Grid1D& grid) const {
    if (model == nullptr) return WienerIncrement::zero(grid, dt);
    const double master = master_dt > 0.0 ? master_dt : dt;
    const auto stride = master_stride(dt, master);
    auto inc = model->increment(NoiseStream(seed, replica, Channel::W1),
                                NoiseStream(seed, replica, Channel::W2),
                                static_cast<std::uint64_t>(step) * stride, stride, master);
    inc.dt = dt;
    return inc;
}

double pseudo_energy(const FullState& s, double r, double eps, const Grid1D& grid) {
    const std::size_t n = grid.size();
    InteriorField vr(n), cos_half(n);
    for (std::size_t i = 0; i < n; ++i) {
        vr[i] = s.v[i] + r * s.u[i];
        cos_half[i] = std::cos(0.5 * s.u[i]);
    }
    const BoundaryField thr = s.theta + r * s.delta;
    const double c = 1.0 - r + eps * r * r;
    return eps * squared_norm(vr, grid) + dirichlet_form(s.u, s.u, grid) +
           c * squared_norm(s.u, grid) + eps * squared_norm(thr) + c * squared_norm(s.delta) +
           4.0 * squared_norm(cos_half, grid) +
           2.0 * r * inner(boundary_restriction(s.u, grid), s.delta);
}

namespace {

/// Rates of every right-hand-side term of the identity at one state.
struct EnergyRates {
    std::array<double, 5> dissipation{};
    std::array<double, 3> cross{};
};

EnergyRates energy_rates(const FullState& s, double r, double eps, const Grid1D& grid) {
    const std::size_t n = grid.size();
    InteriorField vr(n), sin_u(n);
    for (std::size_t i = 0; i < n; ++i) {
        vr[i] = s.v[i] + r * s.u[i];
        sin_u[i] = std::sin(s.u[i]);
    }
    const BoundaryField thr = s.theta + r * s.delta;
    const BoundaryField pu = boundary_restriction(s.u, grid);
    const double c = 1.0 - r + eps * r * r;
    EnergyRates out;
    out.dissipation = {2.0 * (1.0 - eps * r) * squared_norm(vr, grid),
                       2.0 * r * dirichlet_form(s.u, s.u, grid),
                       2.0 * c * r * squared_norm(s.u, grid),
                       2.0 * (1.0 - eps * r) * squared_norm(thr),
                       2.0 * c * r * squared_norm(s.delta)};
    out.cross = {2.0 * r * inner(s.u, sin_u, grid), 4.0 * r * inner(pu, thr),
                 4.0 * r * r * inner(pu, s.delta)};
    return out;
}

}  // namespace

Trajectory simulate_full(const FullParams& params, const FullState& initial, const Grid1D& grid,
                         const NoiseDriver& noise, SimulateOptions opts) {
    params.validate();
    grid.check(initial.u);
    grid.check(initial.v);
    if (!initial.finite()) throw ContractError("simulate_full: initial state is not finite");
    const std::size_t steps = params.steps();
    const FullStepper stepper(grid, params.eps, params.alpha, params.dt);
    const double eps_alpha = std::pow(params.eps, params.alpha);
    const double trace_rate = std::pow(params.eps, 2.0 * params.alpha - 1.0) *
                              (noise.trace_interior() + noise.trace_boundary());

    Trajectory traj;
    if (opts.keep_states) traj.states.reserve(steps + 1);
    traj.ledger.reserve(steps + 1);

    FullState state = initial;
    EnergyRecord rec;
    rec.t = state.t;
    rec.energy = pseudo_energy(state, params.r, params.eps, grid);
    traj.ledger.push_back(rec);
    if (opts.observer) opts.observer(state);

    for (std::size_t n = 0; n < steps; ++n) {
        const auto inc = noise.increment(n, params.dt, grid);
        const auto rates = energy_rates(state, params.r, params.eps, grid);
        const std::size_t m = grid.size();
        InteriorField vr(m);
        for (std::size_t i = 0; i < m; ++i) vr[i] = state.v[i] + params.r * state.u[i];
        const BoundaryField thr = state.theta + params.r * state.delta;

        FullState next = stepper.step(state, inc);
        next.t = initial.t + static_cast<double>(n + 1) * params.dt;

        for (std::size_t j = 0; j < 5; ++j) rec.dissipation[j] += params.dt * rates.dissipation[j];
        for (std::size_t j = 0; j < 3; ++j) rec.cross[j] += params.dt * rates.cross[j];
        rec.stochastic[0] += 2.0 * eps_alpha * inner(vr, inc.dW1, grid);
        rec.stochastic[1] += 2.0 * eps_alpha * inner(thr, inc.dW2);
        rec.t = next.t;
        rec.trace_term = trace_rate * (rec.t - initial.t);
        rec.energy = pseudo_energy(next, params.r, params.eps, grid);
        traj.ledger.push_back(rec);

        if (opts.keep_states) traj.states.push_back(std::move(state));
        state = std::move(next);
        if (opts.observer) opts.observer(state);
    }
    if (opts.keep_states) traj.states.push_back(std::move(state));
    return traj;
}

std::vector<double> energy_residual(const EnergyLedger& ledger) {
    std::vector<double> out;
    if (ledger.empty()) return out;
    const double e0 = ledger.front().energy;
    out.reserve(ledger.size());
    for (const auto& rec : ledger) {
        double rhs = e0;
        for (double d : rec.dissipation) rhs -= d;
        rhs += rec.cross[0] + rec.cross[1] - rec.cross[2];
        rhs += rec.stochastic[0] + rec.stochastic[1] + rec.trace_term;
        out.push_back(rec.energy - rhs);
    }
    return out;
}

MomentSample moments_of(const FullState& s, const Grid1D& grid) {
    return {squared_norm(s.v, grid), squared_norm(s.theta), squared_norm(s.u, grid),
            dirichlet_form(s.u, s.u, grid), squared_norm(s.delta)};
}

MomentStats moment_stats(std::span<const std::vector<MomentSample>> ensemble,
                         std::span<const double> times) {
    if (ensemble.size() < 2) throw ContractError("moment_stats needs at least two replicas");
    for (const auto& series : ensemble) {
        if (series.size() != times.size()) {
            throw DimensionError("moment_stats: replica series length differs from time axis");
        }
    }
    MomentStats out;
    out.t.assign(times.begin(), times.end());
    std::vector<double> col(ensemble.size());
    auto reduce = [&](std::size_t k, double MomentSample::*field) {
        for (std::size_t r = 0; r < ensemble.size(); ++r) col[r] = ensemble[r][k].*field;
        return mean_se(col);
    };
    for (std::size_t k = 0; k < times.size(); ++k) {
        out.v.push_back(reduce(k, &MomentSample::v));
        out.theta.push_back(reduce(k, &MomentSample::theta));
        out.u.push_back(reduce(k, &MomentSample::u));
        out.grad.push_back(reduce(k, &MomentSample::grad));
        out.delta.push_back(reduce(k, &MomentSample::delta));
    }
    return out;
}

}  // namespace sll
