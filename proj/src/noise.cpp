#include "sll/noise.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "sll/errors.hpp"
#include "sll/philox.hpp"

namespace sll {

CovarianceSpec CovarianceSpec::interior(double c, double gamma, std::size_t modes) {
    CovarianceSpec s;
    s.kind = NoiseKind::interior;
    s.c = c;
    s.gamma = gamma;
    s.num_modes = modes;
    s.validate();
    return s;
}

CovarianceSpec CovarianceSpec::boundary(double lambda_left, double lambda_right) {
    CovarianceSpec s;
    s.kind = NoiseKind::boundary;
    s.num_modes = 2;
    s.left = lambda_left;
    s.right = lambda_right;
    s.validate();
    return s;
}

void CovarianceSpec::validate() const {
    if (kind == NoiseKind::interior) {
        if (num_modes == 0) throw ConfigError("noise.modes must be positive");
        if (!(c >= 0.0) || !std::isfinite(c)) throw ConfigError("noise.c must be finite and >= 0");
        if (!(gamma > 1.0)) throw ConfigError("noise.gamma must exceed 1 for a trace-class covariance");
    } else {
        if (!(left >= 0.0) || !(right >= 0.0) || !std::isfinite(left) || !std::isfinite(right)) {
            throw ConfigError("boundary noise eigenvalues must be finite and >= 0");
        }
    }
}

std::vector<double> CovarianceSpec::eigenvalues() const {
    if (kind == NoiseKind::boundary) return {left, right};
    std::vector<double> out(num_modes);
    for (std::size_t i = 0; i < num_modes; ++i) {
        out[i] = c * std::pow(static_cast<double>(i + 1), -gamma);
    }
    return out;
}

double trace_of(const CovarianceSpec& spec) {
    double sum = 0.0;
    for (double l : spec.eigenvalues()) sum += l;
    return sum;
}

double NoiseStream::normal(std::uint32_t mode, std::uint64_t master_step) const noexcept {
    const Philox4x32::Counter ctr{
        mode,
        static_cast<std::uint32_t>(master_step),
        static_cast<std::uint32_t>((master_step >> 32) & 0xFFFFu) |
            (static_cast<std::uint32_t>(channel_) << 16),
        static_cast<std::uint32_t>(replica_)};
    const Philox4x32::Key key{static_cast<std::uint32_t>(seed_),
                              static_cast<std::uint32_t>(seed_ >> 32)};
    const auto r = Philox4x32::generate(ctr, key);
    constexpr double kTwo53 = 9007199254740992.0;
    const std::uint64_t a = (static_cast<std::uint64_t>(r[0]) << 32 | r[1]) >> 11;
    const std::uint64_t b = (static_cast<std::uint64_t>(r[2]) << 32 | r[3]) >> 11;
    const double u1 = (static_cast<double>(a) + 1.0) / kTwo53;  // (0, 1]
    const double u2 = static_cast<double>(b) / kTwo53;          // [0, 1)
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

void NoiseStream::bind_step(double dt) {
    if (!(dt > 0.0)) throw ContractError("noise step must be positive");
    if (!master_dt_) {
        master_dt_ = dt;
    } else if (*master_dt_ != dt) {
        throw ContractError("master step reused with dt = " + std::to_string(dt) +
                            " after binding dt = " + std::to_string(*master_dt_));
    }
}

NoiseModel::NoiseModel(const Grid1D& grid, CovarianceSpec interior, CovarianceSpec boundary)
    : grid_(grid), interior_(interior), boundary_(boundary) {
    if (interior_.kind != NoiseKind::interior || boundary_.kind != NoiseKind::boundary) {
        throw ConfigError("NoiseModel expects one interior and one boundary covariance");
    }
    interior_.validate();
    boundary_.validate();
    tr_interior_ = trace_of(interior_);
    tr_boundary_ = trace_of(boundary_);
    for (double l : interior_.eigenvalues()) sqrt_lambda_.push_back(std::sqrt(l));
    for (double l : boundary_.eigenvalues()) sqrt_lambda_boundary_.push_back(std::sqrt(l));

    const std::size_t m = interior_.num_modes;
    const std::size_t n = grid_.size();
    basis_.resize(m * n);
    for (std::size_t i = 0; i < m; ++i) {
        const double k = static_cast<double>(i + 1) * std::numbers::pi;
        for (std::size_t j = 0; j < n; ++j) {
            basis_[i * n + j] = sqrt_lambda_[i] * std::numbers::sqrt2 * std::sin(k * grid_.x(j));
        }
    }
}

std::vector<double> NoiseModel::modal_increment(const NoiseStream& w1, std::uint64_t first_step,
                                                std::uint64_t count, double master_dt) const {
    if (w1.channel() != Channel::W1) throw ContractError("interior increments need a W1 stream");
    const double sqrt_dt = std::sqrt(master_dt);
    std::vector<double> modal(interior_.num_modes, 0.0);
    for (std::size_t i = 0; i < modal.size(); ++i) {
        double acc = 0.0;
        for (std::uint64_t s = 0; s < count; ++s) {
            acc += w1.normal(static_cast<std::uint32_t>(i), first_step + s);
        }
        modal[i] = acc * sqrt_dt;
    }
    return modal;
}

InteriorField NoiseModel::synthesize(std::span<const double> modal) const {
    const std::size_t n = grid_.size();
    InteriorField out(n, 0.0);
    for (std::size_t i = 0; i < modal.size(); ++i) {
        const double a = modal[i];
        const double* row = basis_.data() + i * n;
        for (std::size_t j = 0; j < n; ++j) out[j] += a * row[j];
    }
    return out;
}

WienerIncrement NoiseModel::increment(const NoiseStream& w1, const NoiseStream& w2,
                                      std::uint64_t first_step, std::uint64_t count,
                                      double master_dt) const {
    if (w2.channel() != Channel::W2) throw ContractError("boundary increments need a W2 stream");
    if (count == 0 || !(master_dt > 0.0)) throw ContractError("empty noise increment requested");
    WienerIncrement inc;
    inc.dt = static_cast<double>(count) * master_dt;
    inc.dW1 = synthesize(modal_increment(w1, first_step, count, master_dt));
    const double sqrt_dt = std::sqrt(master_dt);
    double left = 0.0;
    double right = 0.0;
    for (std::uint64_t s = 0; s < count; ++s) {
        left += w2.normal(0, first_step + s);
        right += w2.normal(1, first_step + s);
    }
    inc.dW2 = {sqrt_lambda_boundary_[0] * sqrt_dt * left, sqrt_lambda_boundary_[1] * sqrt_dt * right};
    return inc;
}

WienerIncrement sample_increment(NoiseStream& stream, const CovarianceSpec& spec,
                                 std::uint64_t master_step, double dt, const Grid1D& grid) {
    if (!(dt > 0.0)) throw ContractError("sample_increment: dt must be positive");
    const bool interior = spec.kind == NoiseKind::interior;
    if (interior != (stream.channel() == Channel::W1)) {
        throw ContractError("sample_increment: covariance kind does not match stream channel");
    }
    stream.bind_step(dt);
    spec.validate();
    WienerIncrement inc = WienerIncrement::zero(grid, dt);
    const double sqrt_dt = std::sqrt(dt);
    const auto lambda = spec.eigenvalues();
    if (interior) {
        for (std::size_t i = 0; i < lambda.size(); ++i) {
            const double amp = std::sqrt(lambda[i]) * sqrt_dt *
                               stream.normal(static_cast<std::uint32_t>(i), master_step);
            const double k = static_cast<double>(i + 1) * std::numbers::pi;
            for (std::size_t j = 0; j < grid.size(); ++j) {
                inc.dW1[j] += amp * std::numbers::sqrt2 * std::sin(k * grid.x(j));
            }
        }
    } else {
        inc.dW2 = {std::sqrt(lambda[0]) * sqrt_dt * stream.normal(0, master_step),
                   std::sqrt(lambda[1]) * sqrt_dt * stream.normal(1, master_step)};
    }
    return inc;
}

OuCoefficients::OuCoefficients(double eps, double alpha, double dt) {
    if (!(eps > 0.0) || !(dt > 0.0)) throw ContractError("OU update needs eps > 0 and dt > 0");
    const double x = dt / eps;
    decay = std::exp(-x);
    relax = -std::expm1(-x);
    noise_scale = std::sqrt(std::pow(eps, 2.0 * alpha - 1.0) * (-std::expm1(-2.0 * x)) / (2.0 * dt));
}

InteriorField ou_update(std::span<const double> x, const OuCoefficients& k,
                        std::span<const double> dW) {
    if (x.size() != dW.size()) throw DimensionError("ou_update: field and increment differ in size");
    InteriorField out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = k.decay * x[i] + k.noise_scale * dW[i];
    return out;
}

BoundaryField ou_update(const BoundaryField& x, const OuCoefficients& k, const BoundaryField& dW) {
    return k.decay * x + k.noise_scale * dW;
}

InteriorField ou_update(std::span<const double> x, double eps, double alpha,
                        const NoiseModel& model, const NoiseStream& w1,
                        std::uint64_t master_step, double dt) {
    const OuCoefficients k(eps, alpha, dt);
    const auto dW = model.synthesize(model.modal_increment(w1, master_step, 1, dt));
    return ou_update(x, k, dW);
}

}  // namespace sll
