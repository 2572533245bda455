#include "dampwave/counterexamples.hpp"
#include "dampwave/duhamel.hpp"
#include "oracle_refs.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

using namespace dampwave;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("divergent weights are normalized to eta") {
    const auto w = divergent_weights(1.0, 128);
    REQUIRE(w.amplitudes.size() == 128);
    CHECK_THAT(w.sum_sq(), WithinRel(1.0, 1e-14));
    CHECK_THAT(w.amplitudes[0], WithinRel(1.0 / std::sqrt(refs::kDivergentWeightsC2K128), 1e-14));
    CHECK_THAT(divergent_weights(0.25, 16).sum_sq(), WithinRel(0.0625, 1e-14));
}

TEST_CASE("reweighted squares start increasing at the reference index") {
    CHECK(eventual_increase_index(2.0, 0.1) == refs::kIncreaseIndexRatio2Eps01);
    CHECK(eventual_increase_index(4.0, 0.05) == refs::kIncreaseIndexRatio4Eps005);
}

TEST_CASE("threshold mode counts and the schedule constant") {
    CHECK(threshold_mode_count(1.0, 0.5) == 1850);
    CHECK(threshold_mode_count(2.0, 0.25) == 21378);
    CHECK(threshold_mode_count(3.0, 0.125) == 177600);
    CHECK(threshold_mode_count(4.0, 0.0625) == 1230917);
    CHECK(threshold_mode_count(3.0, 1.0) == 3625);
    CHECK_THAT(schedule_constant(), WithinRel(refs::kScheduleConstant, 1e-15));
}

TEST_CASE("blow-up families pick the regime and reach their constants") {
    const auto sup = blowup_triple({0.75, 1.0});
    CHECK(sup.kind == BlowupKind::Supercritical);
    CHECK_THAT(sup.c0, WithinRel(refs::kSuperC0, 1e-14));
    CHECK_THAT(sup.c1, WithinRel(refs::kSuperC1Delta1, 1e-14));
    const auto v = sup.evaluate(1e12);
    CHECK_THAT(v.scaled_u, WithinRel(refs::kSuperC0, 1e-3));
    CHECK_THAT(v.scaled_up, WithinRel(refs::kSuperC1Delta1, 1e-3));

    const auto crit = blowup_triple({0.5, 1.0});
    CHECK(crit.kind == BlowupKind::Critical);
    CHECK_THAT(crit.c0, WithinRel(refs::kCriticalC0, 1e-14));
    CHECK_THAT(crit.c1, WithinRel(refs::kCriticalC1, 1e-14));

    const auto sub = blowup_triple({0.25, 1.0});
    CHECK(sub.kind == BlowupKind::Subcritical);
    CHECK_THAT(sub.c0, WithinRel(refs::kSubC, 1e-14));
    CHECK_THAT(sub.c1, WithinRel(refs::kSubC, 1e-14));
    // Approach at rate lambda^{sigma - 1/2}.
    const double err8 = std::abs(sub.evaluate(1e8).scaled_u - refs::kSubC);
    const double err12 = std::abs(sub.evaluate(1e12).scaled_u - refs::kSubC);
    CHECK(err8 < 1e-2 * refs::kSubC);
    CHECK(err12 < 0.2 * err8);

    const auto sh = blowup_triple({0.5, 2.0});
    CHECK(sh.kind == BlowupKind::SupercriticalHalf);
    CHECK_THAT(sh.c0, WithinRel(refs::kSuperHalfDelta2C0, 1e-13));
    CHECK_THAT(sh.c1, WithinRel(refs::kSuperHalfDelta2C1, 1e-13));

    const auto bh = blowup_triple({0.5, 0.5});
    CHECK(bh.kind == BlowupKind::SubcriticalHalf);
    CHECK_THAT(bh.W, WithinRel(refs::kSubHalfDelta05W, 1e-14));
    CHECK_THAT(bh.c0, WithinRel(refs::kSubHalfDelta05C0, 1e-12));
    CHECK_THAT(bh.c1, WithinRel(refs::kSubHalfDelta05C1, 1e-12));
    const auto bv = bh.evaluate(1e6);
    CHECK_THAT(bv.scaled_u, WithinRel(refs::kSubHalfDelta05C0, 1e-9));
    CHECK_THAT(bv.scaled_up, WithinRel(refs::kSubHalfDelta05C1, 1e-9));

    CHECK_THROWS_AS(blowup_triple({1.0, 1.0}), std::domain_error);
    CHECK_THROWS_AS(blowup_triple({0.0, 1.0}), std::domain_error);
    CHECK_FALSE(derivative_blowup_pair({2.0, 1.0}).has_position());
}

TEST_CASE("shifted window keeps at least half of each constant") {
    const auto triple = blowup_triple({0.75, 1.0});
    const double lambda = 1e8;
    const WindowForce w = window_shift_force(triple, 0.0, 1.0, lambda);
    CHECK(std::abs(w.achieved.scaled_u) >= triple.c0 / 2);
    CHECK(std::abs(w.achieved.scaled_up) >= triple.c1 / 2);
    CHECK(w.B < 1.0);
    CHECK(w.B > 1.0 - w.tau);
}

TEST_CASE("constant forcing at sigma = 1 reaches its scaled limit") {
    const double lambda = 1e8;
    const ModeState s = constant_forcing_mode({1.0, 1.0}, lambda, 1.0);
    CHECK_THAT(lambda * s.u, WithinRel(refs::kConstantForceSigma1Limit, 1e-6));
    CHECK_THROWS_AS(statement3_constant_force({0.5, 1.0}, divergent_weights(1.0, 8), {0.1}), std::domain_error);
}

TEST_CASE("constant forcing certificates split at the position threshold") {
    const DampingParams p{1.5, 1.0};
    const SpectrumModel m = geometric_spectrum(96, 2.0, 1.0);
    const auto c = statement3_constant_force(p, divergent_weights(1.0, 96), {0.1});
    const auto rows = certify_constant_force(m, p, c.forcing, {1.0}, {1.5, 1.6}, geometric_levels(1, 96, 8));
    bool conv = false, div = false;
    for (const auto& r : rows) {
        if (!r.label.empty() || r.component != Component::U) continue;
        if (r.alpha == 1.5) conv = r.verdict == Membership::Converged;
        if (std::abs(r.alpha - 1.6) < 1e-12) div = r.verdict == Membership::Diverging;
    }
    CHECK(conv);
    CHECK(div);
    const std::string csv = certificate_csv(rows);
    CHECK(csv.rfind("target_time,alpha,verdict,value,component\n", 0) == 0);
}

TEST_CASE("log-domain roots match the direct roots") {
    const DampingParams p{2.0, 1.0};
    const auto lr = log_real_roots(p, std::log(1e6));
    REQUIRE(lr.has_value());
    const auto r = roots(p, 1e6);
    CHECK_THAT(std::exp(lr->log_x1), WithinRel(r.x1, 1e-12));
    CHECK_THAT(std::exp(lr->log_x2), WithinRel(r.x2, 1e-12));
    CHECK_FALSE(log_real_roots({0.25, 1.0}, std::log(1e6)).has_value());
    // Far beyond double range.
    const auto huge = log_real_roots(p, 5000.0);
    REQUIRE(huge.has_value());
    CHECK_THAT(huge->log_x2, WithinRel(-5000.0 - std::log(2.0), 1e-12));
}

TEST_CASE("threshold window value matches the reference quadrature") {
    const auto lr = log_real_roots({2.0, 1.0}, std::log(16.0));
    REQUIRE(lr.has_value());
    CHECK_THAT(threshold_mode_value(*lr, std::log(3.0), 1e-3).value(), WithinRel(refs::kThresholdValue, 1e-9));
}

TEST_CASE("threshold construction certifies the first two levels") {
    const auto spectrum = geometric_log_spectrum(40000, 2.0, 1.0);
    const UnboundedSequence s = statement4_sequence({2.0, 1.0}, spectrum, 2);
    REQUIRE(s.parts.size() == 2);
    CHECK(s.parts[0].holds);
    CHECK(s.parts[1].holds);
    CHECK(s.parts[0].Au_sq >= 1.0);
    CHECK(s.parts[1].Au_sq >= 2.0);
    CHECK(s.parts[0].Av_norm <= s.parts[0].eta);
    CHECK(s.increasing);
    CHECK(s.sup_bound <= 1.0);
}

TEST_CASE("resonant assembly respects its sup budget") {
    const SpectrumModel m = geometric_spectrum(64, std::numbers::sqrt2, 4.0);
    const Assembly a = statement1_assembly(m, {0.0, 1.0}, {0.5, 1.0});
    CHECK(a.parts.size() == 2);
    CHECK(a.sampled_sup <= a.sup_bound);
    CHECK_THAT(a.sup_bound, WithinRel(std::sqrt(0.25 + 0.0625), 1e-12));
    CHECK_FALSE(a.certificates.empty());
}

TEST_CASE("schedule recursion on an explicit list") {
    std::vector<double> alphas;
    for (int k = 0; k < 60; ++k) alphas.push_back(std::pow(2.0, -k));
    const Schedule s = unbounded_schedule(alphas);
    REQUIRE(s.k.size() >= 2);
    CHECK(s.k[0] == 0);
    for (std::size_t n = 1; n < s.k.size(); ++n) CHECK(1.0 / alphas[s.k[n]] >= s.T[n - 1]);
    CHECK_THROWS_AS(unbounded_schedule(alphas, 1000), ConstructionError);
    CHECK_THAT(schedule_integral(2.0, 0.0, 0.5), WithinRel(1.0 - std::exp(-1.0), 1e-14));
}
