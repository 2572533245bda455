#include "dampwave/oracle.hpp"
#include "oracle_refs.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace dampwave;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("oracle integrator reproduces the homogeneous references") {
    for (const auto& c : refs::kHomog) {
        const auto tr = integrate_mode({c.sigma, c.delta}, c.lambda, ModeForcing::zero(), {1.0, 0.5}, {0.0, 0.7});
        INFO("sigma " << c.sigma << " lambda " << c.lambda);
        CHECK_THAT(tr.u.back(), WithinRel(c.u, 1e-8));
        CHECK_THAT(tr.up.back(), WithinRel(c.up, 1e-8));
    }
}

TEST_CASE("every oracle method agrees on a forced mode") {
    const auto& c = refs::kWindow[0];
    const ModeForcing f = ModeForcing::windowed_sinusoid(1.0, 3.0, 0.2, 0.1, 0.9);
    for (auto method : {OracleMethod::Auto, OracleMethod::Dopri45, OracleMethod::Fehlberg78, OracleMethod::Exponential}) {
        OracleConfig cfg;
        cfg.method = method;
        const auto tr = integrate_mode({c.sigma, c.delta}, c.lambda, f, {}, {0.0, 0.5, 1.3}, cfg);
        CHECK_THAT(tr.u.back(), WithinAbs(c.u, 1e-10));
        CHECK_THAT(tr.up.back(), WithinAbs(c.up, 1e-10));
    }
}

TEST_CASE("oracle refuses stiff modes and bad settings") {
    CHECK_THROWS_AS(integrate_mode({2.0, 1.0}, 1e5, ModeForcing::zero(), {1.0, 0.0}, {0.0, 1.0}), OracleFailure);
    OracleConfig bad;
    bad.rel_tol = 1e-15;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    CHECK_THROWS_AS(integrate_mode({0.5, 1.0}, 4.0, ModeForcing::zero(), {}, {0.0, 1.0, 0.5}), std::invalid_argument);
}

TEST_CASE("brute-force convolution agrees with the closed-form forced response") {
    // Ramped window: the trapezoid sums need a continuous integrand.
    const ModeForcing f = ModeForcing::windowed_sinusoid(1.0, 3.0, 0.2, 0.1, 0.9, 0.05);
    double dt = 0.0;
    const auto samples = sample_uniform(f, 1.3, 2e4, dt);
    REQUIRE((samples.size() - 1) % 2 == 0);
    const auto r = roots({2.0, 1.0}, 3.0);
    const ModeState exact = forced_mode(r, f, 1.3);
    const auto u = convolve_bruteforce(r, samples, dt, 0);
    const auto up = convolve_bruteforce(r, samples, dt, 1);
    CHECK_THAT(u.value, WithinAbs(exact.u, 1e-9));
    CHECK_THAT(up.value, WithinAbs(exact.up, 1e-9));
    CHECK_THROWS_AS(convolve_bruteforce(r, samples, dt, 2), std::invalid_argument);
}
