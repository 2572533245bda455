#include "dampwave/duhamel.hpp"
#include "oracle_refs.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

using namespace dampwave;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
const ModeForcing kWindowForce = ModeForcing::windowed_sinusoid(1.0, 3.0, 0.2, 0.1, 0.9);

double kernel_sum(const std::vector<KernelTerm>& terms, double tau) {
    std::complex<double> s = 0.0;
    for (const auto& k : terms) s += k.coef * std::pow(tau, k.power) * std::exp(k.rate * tau);
    return s.real();
}
}  // namespace

TEST_CASE("kernel starts at G(0) = 0, G'(0) = 1 in every regime") {
    for (const auto& c : refs::kHomog) {
        const auto r = roots({c.sigma, c.delta}, c.lambda);
        CHECK_THAT(kernel_sum(kernel_terms(r, 0), 0.0), WithinAbs(0.0, 1e-14));
        CHECK_THAT(kernel_sum(kernel_terms(r, 1), 0.0), WithinAbs(1.0, 1e-12));
    }
}

TEST_CASE("forced response to a windowed sinusoid matches quadrature of the reference kernel") {
    for (const auto& c : refs::kWindow) {
        const ModeState s = forced_mode(roots({c.sigma, c.delta}, c.lambda), kWindowForce, 1.3);
        INFO("sigma " << c.sigma << " lambda " << c.lambda);
        CHECK_THAT(s.u, WithinRel(c.u, 1e-10));
        CHECK_THAT(s.up, WithinRel(c.up, 1e-10));
    }
}

TEST_CASE("solve_mode is the sum of the free and forced parts") {
    const auto r = roots({0.5, 2.0}, 100.0);
    const ModeState full = solve_mode(r, {1.0, 0.5}, kWindowForce, 0.7);
    const ModeState free = homogeneous_mode(r, {1.0, 0.5}, 0.7);
    const ModeState forced = forced_mode(r, kWindowForce, 0.7);
    CHECK_THAT(full.u, WithinRel(free.u + forced.u, 1e-14));
    CHECK_THAT(full.up, WithinRel(free.up + forced.up, 1e-14));
}

TEST_CASE("constant forcing responses avoid cancellation for a tiny slow root") {
    const auto r = roots({2.0, 1.0}, 1e3);
    const ModeState a = unit_step_response(r, 0.5);
    CHECK_THAT(a.u, WithinRel(refs::kUnitStepU, 1e-11));
    CHECK_THAT(a.up, WithinRel(refs::kUnitStepUp, 1e-11));
    const ModeState b = constant_forcing_mode({2.0, 1.0}, 1e3, 0.5);
    CHECK_THAT(b.u, WithinRel(refs::kUnitStepU, 1e-11));
    const ModeState c = forced_mode(r, ModeForcing::constant(1.0), 0.5);
    CHECK_THAT(c.u, WithinRel(refs::kUnitStepU, 1e-9));
}

TEST_CASE("resonant response matches the reference and tends to its limit") {
    const ModeState s = resonant_mode_response({0.0, 1.0}, 1e4, 1.0);
    CHECK_THAT(100.0 * s.u, WithinRel(refs::kResonantScaledU, 1e-11));
    CHECK_THAT(s.up, WithinRel(refs::kResonantUp, 1e-11));
    const ModeState far = resonant_mode_response({0.0, 1.0}, 1e12, 1.0);
    CHECK_THAT(1e6 * far.u, WithinRel(refs::kResonantLimit, 1e-5));
    CHECK_THAT(far.up, WithinRel(refs::kResonantLimit, 1e-5));
    CHECK_THROWS_AS(resonant_mode_response({0.75, 1.0}, 1e4, 1.0), std::domain_error);
}

TEST_CASE("graded quadrature and the stepping solver agree with the closed form") {
    const auto r = roots({0.25, 1.0}, 400.0);
    const std::vector<double> grid{0.0, 0.05, 0.3, 0.9, 1.3, 2.0};
    const auto q = duhamel_quadrature(r, kWindowForce, grid, 1e-12);
    const auto e = exact_trajectory(r, kWindowForce, {}, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const ModeState s = forced_mode(r, kWindowForce, grid[i]);
        CHECK_THAT(q.u[i], WithinAbs(s.u, 1e-12));
        CHECK_THAT(e.u[i], WithinAbs(s.u, 1e-14));
        CHECK_THAT(e.up[i], WithinAbs(s.up, 1e-13));
    }
    CHECK_FALSE(q.accuracy_warning);
}

TEST_CASE("whole-line solution of a periodic forcing is periodic and attracts") {
    const ModeForcing sq = smoothed_square_wave(1.0, 1.0, 0.1);
    CHECK(sq.period == 1.0);
    CHECK_THAT(sq.value(0.3), WithinAbs(sq.value(1.3), 1e-12));
    const auto r = roots({2.0, 1.0}, 4.0);
    const ModeState a = line_bounded_mode(r, sq, 0.2);
    const ModeState b = line_bounded_mode(r, sq, 1.2);
    CHECK_THAT(a.u, WithinAbs(b.u, 1e-14));
    const ModeState start = line_bounded_mode(r, sq, 0.0);
    const ModeState moved = solve_mode(r, {start.u, start.up}, sq, 0.2);
    CHECK_THAT(moved.u, WithinAbs(a.u, 1e-13));
    CHECK_THAT(moved.up, WithinAbs(a.up, 1e-13));
    const auto rep = asymptotic_attraction_check(r, sq, {1.0, 0.0}, 30.0 / r.x2);
    CHECK(rep.relative_error < 1e-3);
    CHECK(rep.final_gap < rep.initial_gap);
}

TEST_CASE("kernel bound constant matches its reference maxima") {
    CHECK_THAT(kernel_bound_constant(0.5, 2.0), WithinRel(refs::kKernelBound_05_2, 1e-10));
    CHECK_THAT(kernel_bound_constant(0.3, 0.3), WithinRel(refs::kKernelBound_03_03, 1e-10));
    CHECK_THAT(kernel_bound_constant(1.0, 1.5), WithinRel(refs::kKernelBound_1_15, 1e-10));
}

TEST_CASE("forced solve with zero forcing and null data stays at zero") {
    const SpectrumModel m = geometric_spectrum(6, 2.0, 1.0);
    const auto traj = forced_solve(m, {0.5, 1.0}, ForcingSpec::zero(6), {0.0, 0.5, 1.0});
    for (double x : traj.u) CHECK(x == 0.0);
    for (double x : traj.up) CHECK(x == 0.0);
}
