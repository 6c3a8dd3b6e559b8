#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sll/geometry.hpp"

namespace sll {

enum class NoiseKind { interior, boundary };

/// Which Wiener process a stream feeds. The numeric value is part of the
/// RNG key, so it must never change.
enum class Channel : std::uint32_t { W1 = 1, W2 = 2 };

/// Trace-class covariance: lambda_i = c i^-gamma for i = 1..M on the interior,
/// or an explicit pair (lambda_L, lambda_R) on the boundary.
struct CovarianceSpec {
    NoiseKind kind = NoiseKind::interior;
    std::size_t num_modes = 50;
    double c = 1.0;
    double gamma = 2.0;
    double left = 0.5;
    double right = 0.5;

    static CovarianceSpec interior(double c, double gamma, std::size_t modes);
    static CovarianceSpec boundary(double lambda_left, double lambda_right);

    /// Throws ConfigError for negative scale, gamma <= 1 or zero modes.
    void validate() const;

    /// Eigenvalues in mode order (interior: i = 1..M; boundary: left, right).
    std::vector<double> eigenvalues() const;
};

/// Partial trace sum of the eigenvalues.
double trace_of(const CovarianceSpec& spec);

/// Logical address of a family of Gaussian samples. Samples are a pure
/// function of (seed, replica, channel, mode, master step).
class NoiseStream {
public:
    NoiseStream(std::uint64_t seed, std::uint64_t replica, Channel channel)
        : seed_(seed), replica_(replica), channel_(channel) {}

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t replica() const noexcept { return replica_; }
    Channel channel() const noexcept { return channel_; }

    /// Standard normal keyed by (mode, master_step).
    double normal(std::uint32_t mode, std::uint64_t master_step) const noexcept;

    /// Binds the master-grid step size on first use; a later call with a
    /// different dt throws ContractError because the same master step would
    /// then stand for two different time intervals.
    void bind_step(double dt);

private:
    std::uint64_t seed_;
    std::uint64_t replica_;
    Channel channel_;
    std::optional<double> master_dt_;
};

/// Brownian increments of W1 (synthesized on the grid) and W2 over one step.
struct WienerIncrement {
    InteriorField dW1;
    BoundaryField dW2;
    double dt = 0.0;

    static WienerIncrement zero(const Grid1D& grid, double dt) { return {grid.zeros(), {}, dt}; }
};

/// Precomputed sqrt(lambda_i) e_i(x_j) table with e_i(x) = sqrt(2) sin(i pi x).
/// Holding one per grid keeps per-step sampling to a matrix-vector product.
class NoiseModel {
public:
    NoiseModel(const Grid1D& grid, CovarianceSpec interior, CovarianceSpec boundary);

    const Grid1D& grid() const noexcept { return grid_; }
    const CovarianceSpec& interior() const noexcept { return interior_; }
    const CovarianceSpec& boundary() const noexcept { return boundary_; }
    double trace_interior() const noexcept { return tr_interior_; }
    double trace_boundary() const noexcept { return tr_boundary_; }

    /// Modal W1 amplitudes summed over `count` consecutive master steps.
    std::vector<double> modal_increment(const NoiseStream& w1, std::uint64_t first_step,
                                        std::uint64_t count, double master_dt) const;

    /// Increment over [first_step, first_step + count) of the master grid;
    /// with count > 1 this is the exact sum of the fine increments.
    WienerIncrement increment(const NoiseStream& w1, const NoiseStream& w2,
                              std::uint64_t first_step, std::uint64_t count,
                              double master_dt) const;

    /// Grid values of sum_i a_i sqrt(lambda_i) e_i for unit-variance amplitudes a.
    InteriorField synthesize(std::span<const double> modal) const;

private:
    Grid1D grid_;
    CovarianceSpec interior_;
    CovarianceSpec boundary_;
    std::vector<double> sqrt_lambda_;
    std::vector<double> sqrt_lambda_boundary_;
    std::vector<double> basis_;  // [mode][node], already scaled by sqrt(lambda)
    double tr_interior_;
    double tr_boundary_;
};

/// One increment for a single channel.
/// Interior channel fills dW1, boundary channel fills dW2.
WienerIncrement sample_increment(NoiseStream& stream, const CovarianceSpec& spec,
                                 std::uint64_t master_step, double dt, const Grid1D& grid);

/// e^{-dt/eps}, 1 - e^{-dt/eps} and the factor turning a Brownian increment
/// over dt into the exact transition noise of eps dx = -x dt + eps^alpha dW.
struct OuCoefficients {
    double decay;
    double relax;
    double noise_scale;

    OuCoefficients(double eps, double alpha, double dt);
};

/// Exact Ornstein-Uhlenbeck transition, reusing the Brownian increment
/// that drives the same step: x' = e^{-dt/eps} x + noise_scale * dW.
InteriorField ou_update(std::span<const double> x, const OuCoefficients& k,
                        std::span<const double> dW);
BoundaryField ou_update(const BoundaryField& x, const OuCoefficients& k, const BoundaryField& dW);

/// Convenience overload sampling the increment from a stream.
InteriorField ou_update(std::span<const double> x, double eps, double alpha,
                        const NoiseModel& model, const NoiseStream& w1,
                        std::uint64_t master_step, double dt);

}  // namespace sll
