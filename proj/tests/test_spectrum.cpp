#include "dampwave/spectrum.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

using namespace dampwave;
using Catch::Matchers::WithinRel;

TEST_CASE("spectrum model rejects bad eigenvalues") {
    CHECK_THROWS_AS(SpectrumModel(std::vector<double>{}), std::invalid_argument);
    CHECK_THROWS_AS(SpectrumModel({1.0, -2.0}), std::invalid_argument);
    CHECK_THROWS_AS(SpectrumModel({2.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(SpectrumModel({1.0, 2.0}, 1.5), std::invalid_argument);
    CHECK_NOTHROW(SpectrumModel({1.0, 2.0}, 0.5));
}

TEST_CASE("geometric spectrum and its log form agree") {
    const SpectrumModel m = geometric_spectrum(5, 2.0, 3.0);
    REQUIRE(m.size() == 5);
    CHECK(m[0] == 3.0);
    CHECK(m[4] == 48.0);
    const auto logs = geometric_log_spectrum(5, 2.0, 3.0);
    for (std::size_t k = 0; k < 5; ++k) CHECK_THAT(std::exp(logs[k]), WithinRel(m[k], 1e-14));
    const auto shifted = geometric_log_spectrum(2, 2.0, 3.0, 3);
    CHECK_THAT(shifted[0], WithinRel(logs[3], 1e-15));
}

TEST_CASE("compensated sum keeps small terms next to a large one") {
    KahanSum s;
    s.add(1.0);
    for (int i = 0; i < 1000; ++i) s.add(1e-17);
    s.add(-1.0);
    CHECK_THAT(s.value(), WithinRel(1e-14, 1e-10));
}

TEST_CASE("sobolev norms weight each mode by a power of its eigenvalue") {
    const SpectrumModel m({1.0, 4.0, 9.0});
    const SpectralVector v{1.0, 1.0, 1.0};
    CHECK_THAT(sobolev_norm(v, 0.5, m), WithinRel(std::sqrt(14.0), 1e-15));
    CHECK_THAT(sobolev_norm_sq(v, -0.5, m), WithinRel(1.0 + 0.25 + 1.0 / 9.0, 1e-15));
    CHECK_THROWS_AS(sobolev_norm(SpectralVector{1.0}, 0.0, m), std::length_error);
}

TEST_CASE("partial sums in linear and log form agree") {
    const SpectrumModel m = geometric_spectrum(40, 2.0, 1.0);
    SpectralVector v(40);
    for (std::size_t k = 0; k < 40; ++k) v[k] = 1.0 / (k + 1.0);
    const auto levels = geometric_levels(1, 40, 8);
    const auto lin = weighted_partial_sums(v, 0.3, m, levels);
    const auto lg = weighted_partial_sums_log(v, 0.3, geometric_log_spectrum(40, 2.0, 1.0), levels);
    REQUIRE(lin.size() == levels.size());
    for (std::size_t j = 0; j < lin.size(); ++j) CHECK_THAT(lg[j], WithinRel(lin[j], 1e-12));
    CHECK_THAT(lin.back(), WithinRel(sobolev_norm_sq(v, 0.3, m), 1e-14));
}

TEST_CASE("geometric levels are increasing, deduplicated and include both ends") {
    const auto lv = geometric_levels(1, 128, 8);
    REQUIRE(lv.size() >= 2);
    CHECK(lv.front() == 1);
    CHECK(lv.back() == 128);
    for (std::size_t j = 1; j < lv.size(); ++j) CHECK(lv[j] > lv[j - 1]);
    CHECK_THROWS_AS(geometric_levels(0, 10, 4), std::invalid_argument);
}

TEST_CASE("interleaved partition covers every mode once") {
    const SpectrumModel m = geometric_spectrum(10, 2.0, 1.0);
    const auto parts = partition_interleave(m, 3);
    REQUIRE(parts.size() == 3);
    std::vector<int> seen(10, 0);
    for (const auto& p : parts)
        for (auto k : p) ++seen[k];
    for (int s : seen) CHECK(s == 1);
    CHECK(parts[0] == std::vector<std::size_t>{0, 3, 6, 9});
    const SpectrumModel sub = m.subset(parts[1]);
    CHECK(sub.size() == 3);
    CHECK(sub[0] == m[1]);
}

TEST_CASE("spectrum csv lists one row per mode") {
    const std::string csv = spectrum_csv(geometric_spectrum(3, 2.0, 1.0));
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
}
