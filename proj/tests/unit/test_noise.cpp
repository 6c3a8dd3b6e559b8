#include <doctest.h>

#include <cmath>
#include <vector>

#include "sll/errors.hpp"
#include "sll/noise.hpp"
#include "sll/parallel.hpp"
#include "sll/stats.hpp"

using namespace sll;

TEST_CASE("partial traces") {
    double direct = 0.0;
    for (int i = 1; i <= 100; ++i) direct += 1.0 / (static_cast<double>(i) * i);
    CHECK(trace_of(CovarianceSpec::interior(1.0, 2.0, 100)) == doctest::Approx(direct).epsilon(1e-15));
    CHECK(trace_of(CovarianceSpec::interior(1.0, 2.0, 100)) == doctest::Approx(1.634984).epsilon(1e-6));
    CHECK(trace_of(CovarianceSpec::boundary(0.5, 0.5)) == 1.0);
    CHECK(trace_of(CovarianceSpec::interior(0.0, 2.0, 50)) == 0.0);
    double prev = 0.0;
    for (std::size_t m : {1u, 10u, 100u, 1000u}) {
        const double t = trace_of(CovarianceSpec::interior(1.0, 1.5, m));
        CHECK(t > prev);
        prev = t;
    }
}

TEST_CASE("covariance validation") {
    CHECK_THROWS_AS(CovarianceSpec::interior(1.0, 1.0, 50), ConfigError);
    CHECK_THROWS_AS(CovarianceSpec::interior(-1.0, 2.0, 50), ConfigError);
    CHECK_THROWS_AS(CovarianceSpec::interior(1.0, 2.0, 0), ConfigError);
    CHECK_THROWS_AS(CovarianceSpec::boundary(-0.1, 0.5), ConfigError);
}

TEST_CASE("sample_increment: zero spec, determinism and key contract") {
    const Grid1D g(32);
    NoiseStream s1(7, 3, Channel::W1);
    const auto zero = sample_increment(s1, CovarianceSpec::interior(0.0, 2.0, 50), 0, 0.01, g);
    for (double x : zero.dW1) CHECK(x == 0.0);

    const auto spec = CovarianceSpec::interior(1.0, 2.0, 50);
    NoiseStream a(7, 3, Channel::W1), b(7, 3, Channel::W1);
    const auto ia = sample_increment(a, spec, 12, 0.01, g);
    const auto ib = sample_increment(b, spec, 12, 0.01, g);
    CHECK(ia.dW1 == ib.dW1);
    NoiseStream other_replica(7, 4, Channel::W1);
    CHECK(sample_increment(other_replica, spec, 12, 0.01, g).dW1 != ia.dW1);

    CHECK_THROWS_AS(sample_increment(a, spec, 13, 0.02, g), ContractError);
    NoiseStream w2(7, 3, Channel::W2);
    CHECK_THROWS_AS(sample_increment(w2, spec, 0, 0.01, g), ContractError);
    const auto bd = sample_increment(w2, CovarianceSpec::boundary(0.5, 0.5), 0, 0.01, g);
    CHECK(bd.dW2.left != 0.0);
    for (double x : bd.dW1) CHECK(x == 0.0);
}

TEST_CASE("channels and modes are decorrelated") {
    const std::size_t n = 20000;
    std::vector<double> prod_ch(n), prod_mode(n);
    NoiseStream w1(99, 0, Channel::W1), w2(99, 0, Channel::W2);
    for (std::size_t k = 0; k < n; ++k) {
        prod_ch[k] = w1.normal(0, k) * w2.normal(0, k);
        prod_mode[k] = w1.normal(0, k) * w1.normal(1, k);
    }
    const auto c1 = mean_se(prod_ch), c2 = mean_se(prod_mode);
    CHECK(std::abs(c1.mean) <= 3.0 * c1.se);
    CHECK(std::abs(c2.mean) <= 3.0 * c2.se);
}

TEST_CASE("standard normal moments") {
    NoiseStream s(5, 1, Channel::W1);
    const std::size_t n = 100000;
    std::vector<double> x(n), x2(n);
    for (std::size_t k = 0; k < n; ++k) {
        x[k] = s.normal(3, k);
        x2[k] = x[k] * x[k];
    }
    const auto m1 = mean_se(x), m2 = mean_se(x2);
    CHECK(std::abs(m1.mean) <= 3.0 * m1.se);
    CHECK(std::abs(m2.mean - 1.0) <= 3.0 * m2.se);
}

TEST_CASE("Ito isometry for one increment") {
    const Grid1D g(64);
    const NoiseModel model(g, CovarianceSpec::interior(1.0, 2.0, 50), CovarianceSpec::boundary(0.5, 0.5));
    const double dt = 0.01;
    const std::size_t n = 100000;
    std::vector<double> sq(n), sq_bd(n);
    const NoiseStream w1(2024, 0, Channel::W1), w2(2024, 0, Channel::W2);
    for (std::size_t k = 0; k < n; ++k) {
        const auto inc = model.increment(w1, w2, k, 1, dt);
        sq[k] = squared_norm(inc.dW1, g);
        sq_bd[k] = squared_norm(inc.dW2);
    }
    const auto m = mean_se(sq), mb = mean_se(sq_bd);
    CHECK(std::abs(m.mean - model.trace_interior() * dt) <= 3.0 * m.se);
    CHECK(std::abs(mb.mean - model.trace_boundary() * dt) <= 3.0 * mb.se);
}

TEST_CASE("coarse increments are sums of fine ones") {
    const Grid1D g(16);
    const NoiseModel model(g, CovarianceSpec::interior(1.0, 2.0, 10), CovarianceSpec::boundary(0.5, 0.2));
    const NoiseStream w1(1, 2, Channel::W1), w2(1, 2, Channel::W2);
    const double dt = 0.001;
    const auto coarse = model.modal_increment(w1, 8, 4, dt);
    for (std::uint32_t i = 0; i < 10; ++i) {
        double acc = 0.0;
        for (std::uint64_t s = 8; s < 12; ++s) acc += w1.normal(i, s);
        CHECK(coarse[i] == acc * std::sqrt(dt));
    }
    const auto c = model.increment(w1, w2, 8, 4, dt);
    BoundaryField sum{};
    for (std::uint64_t s = 8; s < 12; ++s) sum += model.increment(w1, w2, s, 1, dt).dW2;
    CHECK(c.dW2.left == doctest::Approx(sum.left).epsilon(1e-13));
    CHECK(c.dt == doctest::Approx(4 * dt));
}

TEST_CASE("replica results do not depend on scheduling") {
    const Grid1D g(16);
    const NoiseModel model(g, CovarianceSpec::interior(1.0, 2.0, 10), CovarianceSpec::boundary(0.5, 0.5));
    auto path = [&](std::size_t r) {
        const NoiseStream w1(3, r, Channel::W1), w2(3, r, Channel::W2);
        std::vector<double> out;
        for (std::uint64_t s = 0; s < 50; ++s) {
            const auto inc = model.increment(w1, w2, s, 1, 0.01);
            out.insert(out.end(), inc.dW1.begin(), inc.dW1.end());
        }
        return out;
    };
    const auto serial = parallel_map<std::vector<double>>(16, 1, path);
    const auto threaded = parallel_map<std::vector<double>>(16, 8, path);
    CHECK(serial == threaded);
}

TEST_CASE("OU transition: trivial cases and semigroup property") {
    const OuCoefficients k(0.25, 0.5, 0.01);
    const auto out = ou_update(std::vector<double>(4, 0.0), k, std::vector<double>(4, 0.0));
    for (double x : out) CHECK(x == 0.0);

    // One step of dt against two of dt/2: means e^{-dt/eps} and variances
    // noise^2 dt must agree.
    for (double alpha : {0.5, 0.75, 2.0}) {
        const double eps = 0.1, dt = 0.02;
        const OuCoefficients full(eps, alpha, dt), half(eps, alpha, dt / 2);
        CHECK(std::abs(full.decay - half.decay * half.decay) <= 1e-12);
        const double var_full = full.noise_scale * full.noise_scale * dt;
        const double var_half = half.decay * half.decay * half.noise_scale * half.noise_scale * dt / 2 +
                                half.noise_scale * half.noise_scale * dt / 2;
        CHECK(std::abs(var_full - var_half) <= 1e-12);
    }
}

TEST_CASE("OU stationary variance per mode") {
    // eps = 0.25, alpha = 1/2, lambda = 1: the variance tends to eps^{2 alpha - 1}/2 = 0.5.
    const double eps = 0.25, dt = 0.025;
    const OuCoefficients k(eps, 0.5, dt);
    const std::size_t paths = 10000;
    std::vector<double> sq(paths);
    for (std::size_t p = 0; p < paths; ++p) {
        const NoiseStream s(77, p, Channel::W2);
        BoundaryField x{};
        for (std::uint64_t n = 0; n < 200; ++n) {  // t = 5 = 20 eps
            x = ou_update(x, k, std::sqrt(dt) * BoundaryField{s.normal(0, n), 0.0});
        }
        sq[p] = x.left * x.left;
    }
    CHECK(std::abs(mean_se(sq).mean - 0.5) <= 0.05 * 0.5);
}
