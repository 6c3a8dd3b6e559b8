#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sll/full_system.hpp"
#include "sll/geometry.hpp"
#include "sll/noise.hpp"

namespace sll {

/// v = v1 + v2 + v3 and theta = th1 + th2 + th3: decaying transient,
/// relaxation toward the recorded forcing, Ornstein-Uhlenbeck part.
struct SplitState {
    InteriorField v1, v2, v3;
    BoundaryField th1, th2, th3;
    double t = 0.0;

    InteriorField velocity() const;
    BoundaryField boundary_velocity() const { return th1 + th2 + th3; }
};

/// v0 e^{-t/eps} pointwise. Also used for th1.
InteriorField v1_exact(std::span<const double> v0, double eps, double t);
BoundaryField theta1_exact(const BoundaryField& th0, double eps, double t);

/// x' = F + (x - F) e^{-dt/eps} for a frozen forcing F.
InteriorField relax_toward(std::span<const double> x, std::span<const double> forcing,
                           const OuCoefficients& k);
BoundaryField relax_toward(const BoundaryField& x, const BoundaryField& forcing,
                           const OuCoefficients& k);

/// v2 over one recorded step, forced by velocity_forcing(before, after).
InteriorField step_v2(std::span<const double> v2, const FullState& before, const FullState& after,
                      double eps, double dt, const Grid1D& grid);

/// th2 over one recorded step, forced by boundary_forcing(before, after).
BoundaryField step_theta2(const BoundaryField& th2, const FullState& before,
                          const FullState& after, double eps, double dt, const Grid1D& grid);

/// Split components along a recorded trajectory and the recombination gaps.
struct SplitSeries {
    std::vector<SplitState> states;
    std::vector<double> gap_v;      ///< max_i |v - (v1 + v2 + v3)| per step
    std::vector<double> gap_theta;  ///< max |theta - (th1 + th2 + th3)| per step
    double max_gap_v() const;
    double max_gap_theta() const;
};

/// Runs the three sub-equations along `states` (uniform step params.dt,
/// states[0] the initial state), drawing v3/th3 noise from the same driver
/// that produced the trajectory. Throws ContractError if states is empty.
SplitSeries split_run(std::span<const FullState> states, const FullParams& params,
                      const Grid1D& grid, const NoiseDriver& noise, bool keep_states = true);

/// Per-time ensemble means of the dual norm of v2 and of |th2|.
struct DualNormAudit {
    std::vector<double> t;
    std::vector<MeanSe> v2_dual;
    std::vector<MeanSe> v2_l2;
    std::vector<MeanSe> theta2;
    double max_v2_dual() const;
};

/// ensemble[replica][time] of split states; every replica must share the
/// same time axis. Needs >= 2 replicas.
DualNormAudit h_minus1_audit(std::span<const std::vector<SplitState>> ensemble,
                             const Grid1D& grid);

/// (eps^{2 alpha - 1} TrQ / 2)(1 - e^{-2t/eps}), the second moment of the OU
/// part started at zero.
double ou_moment_theory(double eps, double alpha, double trace, double t);

}  // namespace sll
