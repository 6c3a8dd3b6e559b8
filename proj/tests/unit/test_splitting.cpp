#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "sll/errors.hpp"
#include "sll/splitting.hpp"

using namespace sll;

TEST_CASE("decaying transient") {
    const std::vector<double> v0{1.0, -2.0, 0.5};
    const auto one = v1_exact(v0, 0.25, 0.25);
    for (std::size_t i = 0; i < 3; ++i) CHECK(one[i] == doctest::Approx(v0[i] * std::exp(-1.0)).epsilon(1e-15));
    const auto zero = v1_exact(v0, 0.25, 0.0);
    CHECK(zero == v0);
    const auto late = v1_exact(v0, 0.01, 1.0);
    for (double x : late) CHECK(std::abs(x) < 1e-40);
    const auto th = theta1_exact({1.0, 3.0}, 0.5, 0.5);
    CHECK(th.right == doctest::Approx(3.0 * std::exp(-1.0)));
}

TEST_CASE("relaxation toward a frozen forcing") {
    const double eps = 0.1, dt = 0.01;
    const OuCoefficients k(eps, 0.5, dt);
    std::vector<double> x{0.0, 4.0, -1.0};
    const std::vector<double> f{1.0, 2.0, 3.0};
    for (int n = 0; n < 200; ++n) x = relax_toward(x, f, k);  // t = 20 eps
    for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(x[i] - f[i]) <= 5.0 * std::exp(-20.0));
    BoundaryField b{2.0, -2.0};
    const auto b1 = relax_toward(b, BoundaryField{}, k);
    CHECK(b1.left == doctest::Approx(2.0 * k.decay));
}

TEST_CASE("components recombine along a noisy trajectory") {
    const Grid1D g(32);
    const NoiseModel model(g, CovarianceSpec::interior(1.0, 2.0, 50), CovarianceSpec::boundary(0.5, 0.5));
    FullParams p;
    p.eps = 0.05;
    p.dt = 0.005;
    p.t_end = 1.0;
    FullState init = FullState::zero(g);
    init.u = g.sample([](double x) { return std::cos(std::numbers::pi * x); });
    init.v = g.sample([](double x) { return x; });
    init.theta = {0.3, -0.2};
    const NoiseDriver noise{&model, 11, 0, p.dt};
    const auto tr = simulate_full(p, init, g, noise);
    REQUIRE(tr.states.size() == 201);
    const auto split = split_run(tr.states, p, g, noise);
    REQUIRE(split.states.size() == 201);
    CHECK(split.max_gap_v() <= 1e-10);
    CHECK(split.max_gap_theta() <= 1e-10);
    CHECK(split.states[0].v2 == g.zeros());
    CHECK(split.states[0].v1 == init.v);

    // th2 over one step from zero is b G exactly.
    const OuCoefficients k(p.eps, p.alpha, p.dt);
    const auto th2 = step_theta2({}, tr.states[3], tr.states[4], p.eps, p.dt, g);
    const auto gb = boundary_forcing(tr.states[3], tr.states[4], p.dt, g);
    CHECK(th2.left == doctest::Approx(k.relax * gb.left).epsilon(1e-14));

    CHECK_THROWS_AS(split_run(std::span<const FullState>{}, p, g, noise), ContractError);
}

TEST_CASE("dual-norm audit") {
    const Grid1D g(16);
    std::vector<std::vector<SplitState>> zero(3, std::vector<SplitState>(2));
    for (auto& rep : zero) {
        for (std::size_t k = 0; k < 2; ++k) {
            rep[k] = SplitState{g.zeros(), g.zeros(), g.zeros(), {}, {}, {}, 0.5 * static_cast<double>(k)};
        }
    }
    const auto a = h_minus1_audit(zero, g);
    CHECK(a.max_v2_dual() == 0.0);
    CHECK(a.t == std::vector<double>{0.0, 0.5});
    CHECK_THROWS_AS(h_minus1_audit(std::span(zero).first(1), g), ContractError);

    // v2 relaxing toward a bounded forcing stays below the forcing's norm.
    const double eps = 0.1, dt = 0.01;
    const OuCoefficients k(eps, 0.5, dt);
    const auto f = g.sample([](double x) { return std::sin(3.0 * x); });
    const double bound = dual_norm_hminus1(f, g);
    std::vector<std::vector<SplitState>> ens(2);
    for (auto& rep : ens) {
        SplitState s{g.zeros(), g.zeros(), g.zeros(), {}, {}, {}, 0.0};
        for (int n = 0; n <= 100; ++n) {
            rep.push_back(s);
            s.v2 = relax_toward(s.v2, f, k);
            s.t += dt;
        }
    }
    const auto audit = h_minus1_audit(ens, g);
    for (std::size_t n = 0; n < audit.t.size(); ++n) {
        CHECK(audit.v2_dual[n].mean <= bound * (1.0 - std::exp(-audit.t[n] / eps)) + 1e-12);
    }
}

TEST_CASE("OU second-moment theory") {
    CHECK(ou_moment_theory(0.25, 0.5, 1.6, 0.0) == 0.0);
    CHECK(ou_moment_theory(0.25, 0.5, 1.6, 100.0) == doctest::Approx(0.8));
    CHECK(ou_moment_theory(0.1, 2.0, 1.6, 100.0) == doctest::Approx(0.5 * 1e-3 * 1.6));
    CHECK(ou_moment_theory(0.25, 0.5, 1.0, 0.125) == doctest::Approx(0.5 * (1.0 - std::exp(-1.0))));
}
