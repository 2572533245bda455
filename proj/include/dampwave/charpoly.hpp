#pragma once

#include <string>

namespace dampwave {

struct DampingParams {
    double sigma = 0.0;
    double delta = 1.0;

    void validate() const;
    // Exponent gamma = max(1/2, sigma) governing the admissible phase-space gap.
    double gamma() const { return sigma > 0.5 ? sigma : 0.5; }
};

enum class Regime { OscillatoryPair, DoubleRoot, RealPair };

std::string to_string(Regime r);

// Roots -x1, -x2 of x^2 + 2 delta lambda^sigma x + lambda, or -a +- i b.
struct CharRoots {
    Regime regime = Regime::RealPair;
    double lambda = 0.0;
    double damping = 0.0;       // delta * lambda^sigma
    double discriminant = 0.0;  // delta^2 lambda^{2 sigma} - lambda
    double x1 = 0.0, x2 = 0.0;  // RealPair
    double r = 0.0;             // DoubleRoot
    double a = 0.0, b = 0.0;    // OscillatoryPair

    // Slowest decay rate among the roots (x2, r or a).
    double slow_rate() const;
    // Fastest decay rate (x1, r or a).
    double fast_rate() const;
};

// |D| <= kDoubleRootTol * max(1, lambda) selects the double-root branch.
inline constexpr double kDoubleRootTol = 1e-9;

double discriminant(const DampingParams& p, double lambda);
Regime classify(const DampingParams& p, double lambda);
CharRoots roots(const DampingParams& p, double lambda);

enum class RatioFamily { Supercritical, Subcritical };

struct AsymptoticRatios {
    RatioFamily family = RatioFamily::Supercritical;
    double x1_over_lambda_sigma = 0.0;  // Supercritical
    double lambda_1ms_over_x2 = 0.0;    // Supercritical
    double b_over_sqrt_lambda = 0.0;    // Subcritical
    double expected_limit = 0.0;
};

// Throws std::domain_error when lambda's regime does not match the family.
AsymptoticRatios asymptotic_ratios(const DampingParams& p, double lambda, RatioFamily family);

}  // namespace dampwave
