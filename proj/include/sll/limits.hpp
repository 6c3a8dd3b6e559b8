#pragma once

#include <functional>
#include <vector>

#include "sll/full_system.hpp"
#include "sll/geometry.hpp"
#include "sll/noise.hpp"
#include "sll/tridiagonal.hpp"

namespace sll {

/// State of the parabolic limit: u_t - Lap u + u - sin u = eps^alpha dW1/dt
/// with delta_t = du/dn and delta_t + delta = -u_t + eps^alpha dW2/dt.
struct ParabolicState {
    InteriorField u;
    BoundaryField delta;
    double t = 0.0;

    bool finite() const noexcept;
};

/// The wave limit carries the same unknowns as the eps-system.
using WaveState = FullState;

/// Backward Euler in (Lap - I) and the boundary coupling, sin u explicit:
///   (u' - u)/dt = Lap(u', g') - u' + sin u + eps^alpha dW1/dt
///   g' = -delta - P(u' - u)/dt + eps^alpha dW2/dt,   delta' = delta + dt g'
/// The flux g' is eliminated into the two boundary rows, so each step is one
/// tridiagonal solve. Not stiff in eps; dt is free.
class ParabolicStepper {
public:
    ParabolicStepper(const Grid1D& grid, double eps, double alpha, double dt);

    /// Throws NumericalFault if the solve residual exceeds 1e-8 and
    /// BlowUpError on a non-finite result.
    ParabolicState step(const ParabolicState& s, const WienerIncrement& inc) const;

    double dt() const noexcept { return dt_; }

private:
    Grid1D grid_;
    double dt_;
    double noise_amp_;
    Tridiagonal matrix_;
    TridiagonalFactor factor_;
};

ParabolicState step_parabolic(const ParabolicState& state, double eps, double alpha, double dt,
                              const WienerIncrement& inc, const Grid1D& grid);

/// The eps-system with zero noise.
WaveState step_wave(const WaveState& state, double eps, double dt, const Grid1D& grid);

/// Iterates the parabolic stepper to t_end; `observer` sees every state,
/// the initial one included. t_end/dt must be an integer within 1e-9.
std::vector<ParabolicState> simulate_parabolic(
    const ParabolicState& initial, double eps, double alpha, double dt, double t_end,
    const Grid1D& grid, const NoiseDriver& noise, bool keep_states = true,
    const std::function<void(const ParabolicState&)>& observer = {});

}  // namespace sll
