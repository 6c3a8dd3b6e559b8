#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "sll/geometry.hpp"
#include "sll/noise.hpp"
#include "sll/stats.hpp"
#include "sll/tridiagonal.hpp"

namespace sll {

/// Parameters of the eps-system.
struct FullParams {
    double eps = 0.25;
    double alpha = 0.5;
    double dt = 0.025;
    double t_end = 1.0;
    double r = 0.1;  ///< pseudo-energy shift, 0 < r < 1/2

    /// eps in (0, 1/2), alpha in [1/2, 1) or (1, inf), r in (0, 1/2),
    /// dt <= eps/10 (to round-off) and t_end / dt an integer within 1e-9.
    void validate() const;

    /// Number of steps to t_end.
    std::size_t steps() const;
};

/// Admissible singular-perturbation exponents: [1/2, 1) and (1, inf).
bool alpha_admissible(double alpha) noexcept;

/// (u, v = u_t, delta, theta = delta_t) at time t.
struct FullState {
    InteriorField u;
    InteriorField v;
    BoundaryField delta;
    BoundaryField theta;
    double t = 0.0;

    static FullState zero(const Grid1D& grid) { return {grid.zeros(), grid.zeros(), {}, {}, 0.0}; }
    bool finite() const noexcept;
};

/// One step of the eps-system: exact Ornstein-Uhlenbeck damping and noise
/// for both velocities, followed by an implicit-midpoint solve of the
/// conservative wave/boundary coupling with sin u frozen at the old level.
///
/// With a = e^{-dt/eps}, b = 1 - a and k the OU noise factor:
///   v*     = a v + k dW1,              theta* = a theta + k dW2
///   v'     = v* + b F,    F = Lap(u_m, theta_m) - u_m + sin(u)
///   theta' = theta* + b G,   G = -delta_m - P v_m
///   u' = u + dt v_m,   delta' = delta + dt theta_m
/// where x_m is the average of the two levels of x (v_m, theta_m use v*,
/// theta*), Lap(., g) the flux Laplacian and P the boundary restriction.
/// Hence v' = a v + b F + k dW1 with F computable from the two recorded
/// states, which is what the velocity splitting recombines against. The
/// midpoint part conserves eps(|v|^2 + |theta|^2) + (eps b/dt)(|grad u|^2 +
/// |u|^2 + |delta|^2) exactly, so the noise energy is not damped by the
/// solve. One tridiagonal solve per step.
class FullStepper {
public:
    FullStepper(const Grid1D& grid, double eps, double alpha, double dt);

    FullState step(const FullState& s, const WienerIncrement& inc) const;

    const Grid1D& grid() const noexcept { return grid_; }
    double eps() const noexcept { return eps_; }
    double alpha() const noexcept { return alpha_; }
    double dt() const noexcept { return dt_; }
    const OuCoefficients& ou() const noexcept { return ou_; }

private:
    Grid1D grid_;
    double eps_;
    double alpha_;
    double dt_;
    OuCoefficients ou_;
    TridiagonalFactor factor_;
};

FullState step_full(const FullState& state, const FullParams& params, const WienerIncrement& inc,
                    const Grid1D& grid);

/// The forcing F (resp. G) of one step, rebuilt from the recorded states
/// before and after it: u_m = (u + u')/2, theta_m = (delta' - delta)/dt,
/// P v_m = P(u' - u)/dt. Shared with the splitting module.
InteriorField velocity_forcing(const FullState& before, const FullState& after, double dt,
                               const Grid1D& grid);
BoundaryField boundary_forcing(const FullState& before, const FullState& after, double dt,
                               const Grid1D& grid);

/// Supplies Brownian increments for a stepper whose dt is an integer multiple
/// of the master step. A null model means noise-free.
struct NoiseDriver {
    const NoiseModel* model = nullptr;
    std::uint64_t seed = 0;
    std::uint64_t replica = 0;
    double master_dt = 0.0;

    /// Increment of stepper step `step` (covering [step*dt, (step+1)*dt)).
    WienerIncrement increment(std::size_t step, double dt, const Grid1D& grid) const;
    double trace_interior() const noexcept { return model ? model->trace_interior() : 0.0; }
    double trace_boundary() const noexcept { return model ? model->trace_boundary() : 0.0; }
};

/// Number of master steps per stepper step; throws ContractError unless
/// dt / master_dt is an integer within 1e-9.
std::uint64_t master_stride(double dt, double master_dt);

/// Every term of the pseudo-energy identity at one time: the functional and
/// the running left-endpoint integrals of all right-hand-side terms.
struct EnergyRecord {
    double t = 0.0;
    double energy = 0.0;
    /// 2(1-eps r)|v_r|^2, 2r|grad u|^2, 2(1-r+eps r^2) r |u|^2,
    /// 2(1-eps r)|theta_r|^2, 2(1-r+eps r^2) r |delta|^2
    std::array<double, 5> dissipation{};
    /// 2r <u, sin u>, 4r <u, theta_r>_bd, 4r^2 <u, delta>_bd
    std::array<double, 3> cross{};
    /// <2 v_r, eps^alpha dW1>, <2 theta_r, eps^alpha dW2>
    std::array<double, 2> stochastic{};
    /// eps^{2 alpha - 1} (Tr Q1 + Tr Q2) t
    double trace_term = 0.0;
};

using EnergyLedger = std::vector<EnergyRecord>;

struct Trajectory {
    std::vector<FullState> states;
    EnergyLedger ledger;
};

struct SimulateOptions {
    bool keep_states = true;
    /// Called with every state, the initial one included.
    std::function<void(const FullState&)> observer;
};

/// Iterates the stepper over [0, t_end] and fills the energy ledger.
/// Throws ContractError on a misaligned time grid and BlowUpError on a
/// non-finite state.
Trajectory simulate_full(const FullParams& params, const FullState& initial, const Grid1D& grid,
                         const NoiseDriver& noise, SimulateOptions opts = {});

/// Pseudo-energy functional built from v_r = v + r u, theta_r = theta + r delta.
double pseudo_energy(const FullState& s, double r, double eps, const Grid1D& grid);

/// E(t_n) minus the right-hand side of the pseudo-energy identity.
std::vector<double> energy_residual(const EnergyLedger& ledger);

/// Per-time second moments of one trajectory.
struct MomentSample {
    double v = 0.0;      ///< |v|^2
    double theta = 0.0;  ///< |theta|^2
    double u = 0.0;      ///< |u|^2
    double grad = 0.0;   ///< |grad u|^2 (Dirichlet form)
    double delta = 0.0;  ///< |delta|^2
};

MomentSample moments_of(const FullState& s, const Grid1D& grid);

/// Ensemble means with standard errors, one entry per recorded time.
struct MomentStats {
    std::vector<double> t;
    std::vector<MeanSe> v, theta, u, grad, delta;
};

/// ensemble[replica][time]; every replica must share `times`. Needs >= 2 replicas.
MomentStats moment_stats(std::span<const std::vector<MomentSample>> ensemble,
                         std::span<const double> times);

}  // namespace sll
