#include <doctest.h>

#include <cmath>
#include <numbers>

#include "sll/errors.hpp"
#include "sll/limits.hpp"

using namespace sll;
using std::numbers::pi;

namespace {

ParabolicState bump(const Grid1D& g, double amp) {
    return {g.sample([&](double x) { return amp * std::sin(pi * x); }), {}, 0.0};
}

ParabolicState run_parabolic(const ParabolicState& init, double dt, double t_end, const Grid1D& g) {
    ParabolicState last;
    simulate_parabolic(init, 0.1, 0.5, dt, t_end, g, NoiseDriver{}, false,
                       [&](const ParabolicState& s) { last = s; });
    return last;
}

// eps(|v|^2 + |theta|^2) + |grad u|^2 + |u|^2 + |delta|^2 + 2<cos u - 1, 1>,
// the Lyapunov functional of the noise-free system.
double wave_energy(const FullState& s, double eps, const Grid1D& g) {
    double pot = 0.0;
     
    for (std::size_t i = 0; i < g.size(); ++i) pot += g.weight(i) * (std::cos(s.u[i]) - 1.0);
    return eps * (squared_norm(s.v, g) + squared_norm(s.theta)) + dirichlet_form(s.u, s.u, g) +
           squared_norm(s.u, g) + squared_norm(s.delta) + 2.0 * pot;
}

// |grad u|^2/2 + |u|^2/2 + |delta|^2/2 + <cos u - 1, 1>, nonincreasing
// along noise-free parabolic-limit solutions.
double parabolic_energy(const ParabolicState& s, const Grid1D& g) {
    double pot = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) pot += g.weight(i) * (std::cos(s.u[i]) - 1.0);
    return 0.5 * (dirichlet_form(s.u, s.u, g) + squared_norm(s.u, g) + squared_norm(s.delta)) + pot;
}

}  // namespace

TEST_CASE("parabolic limit: zero stays zero") {
    const Grid1D g(16);
    const auto out = simulate_parabolic({g.zeros(), {}, 0.0}, 0.1, 0.5, 0.01, 1.0, g, NoiseDriver{});
    REQUIRE(out.size() == 101);
    for (const auto& s : out) {
        for (double x : s.u) CHECK(x == 0.0);
        CHECK(s.delta == BoundaryField{});
    }
    CHECK(out.back().t == doctest::Approx(1.0));
}

TEST_CASE("parabolic limit: Lyapunov functional does not grow beyond O(dt^2)") {
    const Grid1D g(64);
    const double dt = 0.01;
    const auto all = simulate_parabolic(bump(g, 1.0), 0.1, 0.5, dt, 1.0, g, NoiseDriver{});
    double worst = -INFINITY;
    for (std::size_t k = 1; k < all.size(); ++k) {
        worst = std::max(worst, parabolic_energy(all[k], g) - parabolic_energy(all[k - 1], g));
    }
    MESSAGE("worst one-step growth " << worst);
    CHECK(worst <= dt * dt);
    CHECK(parabolic_energy(all.back(), g) < parabolic_energy(all.front(), g));
}

TEST_CASE("parabolic limit: first order in time") {
    const Grid1D g(32);
    const auto init = bump(g, 1.0);
    const auto ref = run_parabolic(init, 1.0 / 40960, 0.5, g);
    std::vector<double> err;
    for (double dt : {0.02, 0.01, 0.005}) {
        const auto s = run_parabolic(init, dt, 0.5, g);
        std::vector<double> d(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) d[i] = s.u[i] - ref.u[i];
        err.push_back(std::sqrt(squared_norm(d, g)));
    }
    for (std::size_t k = 1; k < err.size(); ++k) {
        const double ratio = err[k - 1] / err[k];
        CHECK(ratio >= 1.6);
        CHECK(ratio <= 2.4);
    }
}

TEST_CASE("parabolic limit: contracts") {
    const Grid1D g(16);
    const ParabolicStepper st(g, 0.1, 0.5, 0.01);
    CHECK_THROWS_AS(st.step(bump(g, 1.0), WienerIncrement::zero(g, 0.02)), ContractError);
    auto bad = WienerIncrement::zero(g, 0.01);
    bad.dW1[0] = NAN;
    CHECK_THROWS(st.step(bump(g, 1.0), bad));
    CHECK_THROWS_AS(simulate_parabolic(bump(g, 1.0), 0.1, 0.5, 0.03, 1.0, g, NoiseDriver{}), ContractError);
}

TEST_CASE("wave limit is the noise-free eps-system") {
    const Grid1D g(24);
    FullState s = FullState::zero(g);
    s.u = g.sample([](double x) { return std::cos(pi * x); });
    s.theta = {0.1, 0.2};
    FullParams p;
    p.eps = 0.2;
    p.dt = 0.02;
    const auto a = step_wave(s, p.eps, p.dt, g);
    const auto b = step_full(s, p, WienerIncrement::zero(g, p.dt), g);
    CHECK(a.u == b.u);
    CHECK(a.v == b.v);
    CHECK(a.theta == b.theta);
}

TEST_CASE("wave limit: Lyapunov functional does not grow") {
    const Grid1D g(64);
    const double eps = 0.25;
    for (double dt : {0.025, 0.0125}) {
        FullState s = FullState::zero(g);
        s.u = g.sample([](double x) { return std::cos(pi * x); });
        double prev = wave_energy(s, eps, g);
        double worst = 0.0;
        for (int n = 0; n < static_cast<int>(std::lround(1.0 / dt)); ++n) {
            s = step_wave(s, eps, dt, g);
            const double now = wave_energy(s, eps, g);
            worst = std::max(worst, now - prev);
            prev = now;
        }
        MESSAGE("dt = " << dt << " worst one-step growth " << worst);
        CHECK(worst <= dt * dt);
    }
}
