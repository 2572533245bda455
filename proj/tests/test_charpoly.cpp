#include "dampwave/charpoly.hpp"
#include "oracle_refs.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

using namespace dampwave;
using Catch::Matchers::WithinRel;

TEST_CASE("damping parameters are validated") {
    CHECK_THROWS_AS((DampingParams{-0.1, 1.0}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((DampingParams{0.5, 0.0}.validate()), std::invalid_argument);
    CHECK_NOTHROW((DampingParams{0.0, 1.0}.validate()));
    CHECK((DampingParams{0.2, 1.0}.gamma()) == 0.5);
    CHECK((DampingParams{1.5, 1.0}.gamma()) == 1.5);
}

TEST_CASE("regimes follow the sign of the discriminant") {
    CHECK(classify({0.5, 2.0}, 100.0) == Regime::RealPair);
    CHECK(classify({0.5, 0.5}, 100.0) == Regime::OscillatoryPair);
    CHECK(classify({0.5, 1.0}, 100.0) == Regime::DoubleRoot);
    CHECK(classify({2.0, 1.0}, 1.0) == Regime::DoubleRoot);
    CHECK(classify({0.0, 1.0}, 0.5) == Regime::RealPair);
    CHECK_THROWS_AS(classify({0.0, 1.0}, 0.0), std::invalid_argument);
}

TEST_CASE("roots match the extended-precision reference") {
    auto r = roots({0.75, 1.0}, 1e4);
    REQUIRE(r.regime == Regime::RealPair);
    CHECK_THAT(r.x1, WithinRel(refs::kRootsRealFirst_075_1_1e4, 1e-15));
    CHECK_THAT(r.x2, WithinRel(refs::kRootsRealSecond_075_1_1e4, 1e-15));

    r = roots({0.25, 1.0}, 1e4);
    REQUIRE(r.regime == Regime::OscillatoryPair);
    CHECK_THAT(r.a, WithinRel(refs::kRootsOscA_025_1_1e4, 1e-15));
    CHECK_THAT(r.b, WithinRel(refs::kRootsOscB_025_1_1e4, 1e-15));

    r = roots({2.0, 0.5}, 1e3);
    CHECK_THAT(r.x1, WithinRel(refs::kRootsRealFirst_2_05_1e3, 1e-15));
    CHECK_THAT(r.x2, WithinRel(refs::kRootsRealSecond_2_05_1e3, 1e-15));

    r = roots({0.5, 2.0}, 100.0);
    CHECK_THAT(r.x1, WithinRel(refs::kRootsRealFirst_05_2_100, 1e-15));
    CHECK_THAT(r.x2, WithinRel(refs::kRootsRealSecond_05_2_100, 1e-15));
    CHECK(r.slow_rate() == r.x2);
    CHECK(r.fast_rate() == r.x1);
}

TEST_CASE("slow root keeps full relative accuracy under heavy damping") {
    // x2 ~ lambda^{1 - sigma} / (2 delta): the naive formula loses every digit here.
    const auto r = roots({2.0, 1.0}, 1e7);
    CHECK_THAT(r.x2, WithinRel(1e7 / (2e14) * (1.0 + 1e7 / (4e28)), 1e-14));
    CHECK_THAT(r.x1 * r.x2, WithinRel(1e7, 1e-15));
}

TEST_CASE("double root sits at the damping rate") {
    const auto r = roots({0.5, 1.0}, 64.0);
    REQUIRE(r.regime == Regime::DoubleRoot);
    CHECK_THAT(r.r, WithinRel(8.0, 1e-15));
}

TEST_CASE("asymptotic ratios approach their limits and refuse the wrong regime") {
    const auto sup = asymptotic_ratios({0.75, 1.0}, 1e12, RatioFamily::Supercritical);
    CHECK_THAT(sup.x1_over_lambda_sigma, WithinRel(2.0, 1e-5));
    CHECK_THAT(sup.lambda_1ms_over_x2, WithinRel(2.0, 1e-5));
    const auto sub = asymptotic_ratios({0.25, 1.0}, 1e12, RatioFamily::Subcritical);
    CHECK_THAT(sub.b_over_sqrt_lambda, WithinRel(1.0, 1e-5));
    CHECK_THROWS_AS(asymptotic_ratios({0.25, 1.0}, 1e12, RatioFamily::Supercritical), std::domain_error);
    CHECK_THROWS_AS(asymptotic_ratios({0.75, 1.0}, 1e12, RatioFamily::Subcritical), std::domain_error);
}
