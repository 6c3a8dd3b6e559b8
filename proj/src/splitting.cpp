#include "sll/splitting.hpp"

#include <algorithm>
#include <cmath>

#include "sll/errors.hpp"

namespace sll {

namespace {

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace

InteriorField SplitState::velocity() const {
    InteriorField out(v1.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = v1[i] + v2[i] + v3[i];
    return out;
}

InteriorField v1_exact(std::span<const double> v0, double eps, double t) {
    const double f = std::exp(-t / eps);
    InteriorField out(v0.size());
    for (std::size_t i = 0; i < v0.size(); ++i) out[i] = v0[i] * f;
    return out;
}

BoundaryField theta1_exact(const BoundaryField& th0, double eps, double t) {
    return std::exp(-t / eps) * th0;
}

InteriorField relax_toward(std::span<const double> x, std::span<const double> forcing,
                           const OuCoefficients& k) {
    if (x.size() != forcing.size()) throw DimensionError("relax_toward: size mismatch");
    InteriorField out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = k.decay * x[i] + k.relax * forcing[i];
    return out;
}

BoundaryField relax_toward(const BoundaryField& x, const BoundaryField& forcing,
                           const OuCoefficients& k) {
    return k.decay * x + k.relax * forcing;
}

InteriorField step_v2(std::span<const double> v2, const FullState& before, const FullState& after,
                      double eps, double dt, const Grid1D& grid) {
    grid.check(v2);
    // alpha only enters the noise factor, which v2 does not use.
    const OuCoefficients k(eps, 0.5, dt);
    return relax_toward(v2, velocity_forcing(before, after, dt, grid), k);
}

BoundaryField step_theta2(const BoundaryField& th2, const FullState& before,
                          const FullState& after, double eps, double dt, const Grid1D& grid) {
    const OuCoefficients k(eps, 0.5, dt);
    return relax_toward(th2, boundary_forcing(before, after, dt, grid), k);
}

double SplitSeries::max_gap_v() const {
    return gap_v.empty() ? 0.0 : *std::max_element(gap_v.begin(), gap_v.end());
}

double SplitSeries::max_gap_theta() const {
    return gap_theta.empty() ? 0.0 : *std::max_element(gap_theta.begin(), gap_theta.end());
}

SplitSeries split_run(std::span<const FullState> states, const FullParams& params,
                      const Grid1D& grid, const NoiseDriver& noise, bool keep_states) {
    if (states.empty()) throw ContractError("split_run: empty trajectory");
    const double eps = params.eps;
    const double dt = params.dt;
    const OuCoefficients k(eps, params.alpha, dt);
    const FullState& s0 = states.front();

    SplitState cur;
    cur.v1 = s0.v;
    cur.v2 = grid.zeros();
    cur.v3 = grid.zeros();
    cur.th1 = s0.theta;
    cur.t = s0.t;

    SplitSeries out;
    auto record = [&](const SplitState& s, const FullState& full) {
        out.gap_v.push_back(max_abs_diff(full.v, s.velocity()));
        const BoundaryField d = full.theta - s.boundary_velocity();
        out.gap_theta.push_back(std::max(std::abs(d.left), std::abs(d.right)));
        if (keep_states) out.states.push_back(s);
    };
    record(cur, s0);

    for (std::size_t n = 0; n + 1 < states.size(); ++n) {
        const auto inc = noise.increment(n, dt, grid);
        const FullState& before = states[n];
        const FullState& after = states[n + 1];
        SplitState next;
        next.t = after.t;
        next.v1 = v1_exact(s0.v, eps, after.t - s0.t);
        next.th1 = theta1_exact(s0.theta, eps, after.t - s0.t);
        next.v2 = relax_toward(cur.v2, velocity_forcing(before, after, dt, grid), k);
        next.th2 = relax_toward(cur.th2, boundary_forcing(before, after, dt, grid), k);
        next.v3 = ou_update(cur.v3, k, inc.dW1);
        next.th3 = ou_update(cur.th3, k, inc.dW2);
        record(next, after);
        cur = std::move(next);
    }
    return out;
}

double DualNormAudit::max_v2_dual() const {
    double m = 0.0;
    for (const auto& x : v2_dual) m = std::max(m, x.mean);
    return m;
}

DualNormAudit h_minus1_audit(std::span<const std::vector<SplitState>> ensemble,
                             const Grid1D& grid) {
    if (ensemble.size() < 2) throw ContractError("h_minus1_audit needs at least two replicas");
    const std::size_t times = ensemble.front().size();
    for (const auto& series : ensemble) {
        if (series.size() != times) throw DimensionError("h_minus1_audit: ragged ensemble");
    }
    DualNormAudit out;
    std::vector<double> dual(ensemble.size()), l2(ensemble.size()), bd(ensemble.size());
    for (std::size_t k = 0; k < times; ++k) {
        for (std::size_t r = 0; r < ensemble.size(); ++r) {
            const auto& s = ensemble[r][k];
            dual[r] = dual_norm_hminus1(s.v2, grid);
            l2[r] = norms(s.v2, grid).l2;
            bd[r] = norms(s.th2).l2;
        }
        out.t.push_back(ensemble.front()[k].t);
        out.v2_dual.push_back(mean_se(dual));
        out.v2_l2.push_back(mean_se(l2));
        out.theta2.push_back(mean_se(bd));
    }
    return out;
}

double ou_moment_theory(double eps, double alpha, double trace, double t) {
    return 0.5 * std::pow(eps, 2.0 * alpha - 1.0) * trace * -std::expm1(-2.0 * t / eps);
}

}  // namespace sll
