#include "dampwave/propagator.hpp"
#include "oracle_refs.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

using namespace dampwave;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("homogeneous mode matches the matrix-exponential reference in every regime") {
    for (const auto& c : refs::kHomog) {
        const auto r = roots({c.sigma, c.delta}, c.lambda);
        const ModeState s = homogeneous_mode(r, {1.0, 0.5}, 0.7);
        INFO("sigma " << c.sigma << " delta " << c.delta << " lambda " << c.lambda);
        CHECK_THAT(s.u, WithinRel(c.u, 1e-12));
        CHECK_THAT(s.up, WithinRel(c.up, 1e-12));
    }
}

TEST_CASE("homogeneous mode reproduces its data at t = 0") {
    for (const auto& c : refs::kHomog) {
        const ModeState s = homogeneous_mode(roots({c.sigma, c.delta}, c.lambda), {1.0, 0.5}, 0.0);
        CHECK_THAT(s.u, WithinAbs(1.0, 1e-14));
        CHECK_THAT(s.up, WithinAbs(0.5, 1e-13));
    }
    CHECK_THROWS_AS(homogeneous_mode(roots({0.5, 1.0}, 2.0), {1.0, 0.0}, -1.0), std::domain_error);
}

TEST_CASE("log-weighted derivative survives a weight that overflows a double") {
    const auto r = roots({0.5, 2.0}, 100.0);
    const double t = 300.0;
    // data (1, 0): u = (x1 e^{-x2 t} - x2 e^{-x1 t}) / (x1 - x2); the fast term is far below.
    const double expected = r.x1 / (r.x1 - r.x2) * std::exp(800.0 - r.x2 * t);
    CHECK_THAT(mode_derivative_lw(r, {1.0, 0.0}, t, 0, 800.0), WithinRel(expected, 1e-10));
    CHECK_THAT(mode_derivative(r, {1.0, 0.5}, 0.7, 1, 0.5), WithinRel(10.0 * refs::kHomog[3].up, 1e-12));
    CHECK_THAT(mode_derivative(r, {1.0, 0.5}, 0.7, 0), WithinRel(refs::kHomog[3].u, 1e-12));
}

TEST_CASE("second derivative satisfies the mode equation") {
    const auto r = roots({0.75, 1.0}, 1e4);
    const ModeIC ic{1.0, 0.5};
    const double t = 0.01;
    const double u = mode_derivative(r, ic, t, 0), up = mode_derivative(r, ic, t, 1), upp = mode_derivative(r, ic, t, 2);
    CHECK_THAT(upp + 2.0 * r.damping * up + r.lambda * u, WithinAbs(0.0, 1e-9 * std::abs(upp)));
}

TEST_CASE("log time grid spans the requested decades") {
    const auto g = log_time_grid(1e-2, 1e2, 10);
    CHECK(g.front() == 0.0);
    CHECK(g.size() == 42);
    CHECK_THAT(g[1], WithinRel(1e-2, 1e-14));
    CHECK_THAT(g.back(), WithinRel(1e2, 1e-14));
    CHECK(log_time_grid(1.0, 10.0, 4, false).front() == 1.0);
    CHECK_THROWS_AS(log_time_grid(0.0, 1.0, 4), std::invalid_argument);
}

TEST_CASE("homogeneous solve is identical across thread counts") {
    const SpectrumModel m = geometric_spectrum(32, 2.0, 1.0);
    const SpectralVector U0(32, 1.0), U1(32, -0.5);
    const auto g = log_time_grid(1e-3, 10.0, 5);
    const auto a = homogeneous_solve(m, {0.75, 1.0}, U0, U1, g, 1);
    const auto b = homogeneous_solve(m, {0.75, 1.0}, U0, U1, g, 3);
    CHECK(a.u == b.u);
    CHECK(a.up == b.up);
    CHECK_THROWS_AS(homogeneous_solve(m, {0.75, 1.0}, SpectralVector(3, 1.0), U1, g), std::length_error);
}

TEST_CASE("gap scan reports one row per requested eigenvalue") {
    const SpectrumModel m = geometric_spectrum(12, 2.0, 1.0);
    GapScanConfig cfg;
    cfg.t_grid = log_time_grid(1e-3, 1e2, 5);
    cfg.lambda_grid = {m[0], m[5], m[11]};
    const auto rows = gap_scan(m, {0.25, 1.0}, cfg);
    REQUIRE(rows.size() == 3);
    for (const auto& r : rows) CHECK(r.amplification >= 1.0 - 1e-12);
    cfg.lambda_grid = {3.0};
    CHECK_THROWS_AS(gap_scan(m, {0.25, 1.0}, cfg), std::invalid_argument);
}

TEST_CASE("probe preconditions are enforced") {
    const SpectrumModel m = geometric_spectrum(8, 2.0, 1.0);
    CHECK_THROWS_AS(derivative_gap_probe(m, {2.0, 1.0}, 2.0, 0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(forward_regularity_probe(m, {0.5, 1.0}, 1.0, 1.0, 1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(forward_regularity_probe(m, {2.0, 1.0}, 1.0, 1.0, 1, 0.0), std::invalid_argument);
    CHECK(smoothing_probe(m, {0.5, 1.0}, 0.0, 0.0) == 1.0);
}
