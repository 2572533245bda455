#include "dampwave/duhamel.hpp"
#include "dampwave/probe.hpp"
#include "oracle_refs.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

using namespace dampwave;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("line fit recovers an exact line") {
    const auto f = fit_line({0.0, 1.0, 2.0, 3.0}, {2.0, 5.0, 8.0, 11.0});
    CHECK_THAT(f.slope, WithinRel(3.0, 1e-14));
    CHECK_THAT(f.intercept, WithinRel(2.0, 1e-14));
    CHECK_THAT(f.r2, WithinRel(1.0, 1e-14));
    CHECK_THROWS_AS(fit_line({1.0}, {1.0}), std::invalid_argument);
}

TEST_CASE("membership diagnosis separates geometric convergence from linear growth") {
    std::vector<double> conv, div;
    for (int j = 0; j < 12; ++j) {
        conv.push_back(1.0 - std::pow(0.5, j + 1));
        div.push_back(j + 1.0);
    }
    CHECK(membership_diagnosis(conv).tag == Membership::Converged);
    CHECK(membership_diagnosis(div).tag == Membership::Diverging);
    CHECK_THROWS_AS(membership_diagnosis({1.0, 2.0, 3.0}), std::invalid_argument);
}

TEST_CASE("growth fits classify power laws, logarithms and plateaus") {
    std::vector<double> t, pw, lg, flat;
    for (int i = 0; i <= 40; ++i) {
        const double x = std::pow(10.0, i / 10.0);
        t.push_back(x);
        pw.push_back(std::sqrt(x));
        lg.push_back(1.0 + std::log1p(x));
        flat.push_back(2.0 - 1.0 / (1.0 + x));
    }
    const GrowthFit a = fit_growth(t, pw);
    CHECK(a.kind == GrowthKind::PowerLaw);
    CHECK_THAT(a.exponent, WithinAbs(0.5, 1e-10));
    CHECK(fit_growth(t, lg).kind == GrowthKind::Logarithmic);
    CHECK(fit_growth(t, flat).kind == GrowthKind::Bounded);
    CHECK_THROWS_AS(fit_growth({1.0, 2.0, 3.0, 4.0}, {1.0, 1.0, 1.0, 1.0}), std::invalid_argument);
}

TEST_CASE("cumulative Simpson integrates a cubic exactly") {
    std::vector<double> y;
    for (int i = 0; i <= 8; ++i) y.push_back(std::pow(i / 8.0, 3));
    const auto s = simpson_cumulative(y, 1.0 / 8.0);
    REQUIRE(s.cumulative.size() == 5);
    CHECK(s.cumulative.front() == 0.0);
    CHECK_THAT(s.cumulative.back(), WithinRel(0.25, 1e-14));
    CHECK_THROWS_AS(simpson_cumulative({0.0, 1.0}, 1.0), std::invalid_argument);
}

TEST_CASE("worst-case single-mode responses match the reference L1 norms") {
    CHECK_THAT(worst_case_mode_response(roots({0.25, 1.0}, 1e4), Component::U, 0.5),
               WithinRel(refs::kWorstU_025_1_1e4_t05, 1e-9));
    CHECK_THAT(worst_case_mode_response(roots({2.0, 0.5}, 1e3), Component::UPrime, 2.0),
               WithinRel(refs::kWorstUp_2_05_1e3_t2, 1e-9));
    CHECK(worst_case_mode_response(roots({0.5, 1.0}, 4.0), Component::U, 0.0) == 0.0);
}

TEST_CASE("threshold placement of the boundedness diagram") {
    CHECK(bounded_threshold(0.0, Component::U) == 0.5);
    CHECK(bounded_threshold(0.25, Component::U) == 0.75);
    CHECK(bounded_threshold(0.75, Component::U) == 1.0);
    CHECK(bounded_threshold(2.0, Component::U) == 1.0);
    CHECK(bounded_threshold(1.5, Component::UPrime) == 1.5);
    CHECK(bounded_region(0.25, 0.5, Component::U) == Region::Inside);
    CHECK(bounded_region(0.25, 0.75, Component::U) == Region::Boundary);
    CHECK(bounded_region(0.25, 0.9, Component::U) == Region::Outside);
    CHECK(continuity_region(2.0, 1.5, Component::U) == Region::Inside);
    CHECK(bounded_region(2.0, 1.5, Component::U) == Region::Outside);
}

TEST_CASE("boundedness scan flags growth in lambda beyond the threshold") {
    const SpectrumModel m = geometric_spectrum(40, 2.0, 1.0);
    BoundednessScanConfig cfg;
    cfg.times = log_time_grid(1.0, 1e4, 10, false);
    const auto rows = boundedness_scan(m, {0.5, 1.0}, {0.5, 1.5}, Component::U, cfg);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].verdict == BoundVerdict::Bounded);
    CHECK(rows[1].verdict == BoundVerdict::UnboundedInLambda);
    CHECK(rows[0].sup_norms.size() == cfg.times.size());
}

TEST_CASE("energy ledger holds for a bounded forcing") {
    const SpectrumModel m = geometric_spectrum(4, 2.0, 1.0);
    const DampingParams p{0.5, 1.0};
    ForcingSpec f = ForcingSpec::constant({0.5, -0.5, 0.25, 1.0});
    std::vector<double> grid;
    for (int i = 0; i <= 400; ++i) grid.push_back(i * 2.0 / 400);
    const auto traj = forced_solve(m, p, f, grid);
    const auto rep = energy_check(traj, f, m, p);
    CHECK_FALSE(rep.violated);
    CHECK(rep.quadrature_ok);
    CHECK(rep.min_margin >= 0.0);
    CHECK(rep.final_source > 0.0);
    grid.pop_back();
    CHECK_THROWS_AS(energy_check(forced_solve(m, p, f, grid), f, m, p), std::invalid_argument);
}

TEST_CASE("L2 integrals need an explicit exponent above sigma = 1") {
    const SpectrumModel m = geometric_spectrum(4, 2.0, 1.0);
    const ForcingSpec f = ForcingSpec::constant({1.0, 1.0, 1.0, 1.0});
    std::vector<double> grid;
    for (int i = 0; i <= 8; ++i) grid.push_back(i * 0.25);
    const auto traj = forced_solve(m, {2.0, 1.0}, f, grid);
    CHECK_THROWS_AS(l2_integrals(traj, m, {2.0, 1.0}), std::invalid_argument);
    const auto li = l2_integrals(traj, m, {2.0, 1.0}, 1.0);
    CHECK(li.alpha_u == 1.0);
    CHECK(li.u > 0.0);
}
