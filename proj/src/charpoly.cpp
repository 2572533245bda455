#include "dampwave/charpoly.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dampwave {

void DampingParams::validate() const {
    if (!(delta > 0.0) || !std::isfinite(delta)) throw std::invalid_argument("delta must be positive and finite");
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("sigma must be nonnegative and finite");
}

std::string to_string(Regime r) {
    switch (r) {
        case Regime::OscillatoryPair: return "oscillatory";
        case Regime::DoubleRoot: return "double";
        case Regime::RealPair: return "real";
    }
    return "unknown";
}

double CharRoots::slow_rate() const {
    switch (regime) {
        case Regime::RealPair: return x2;
        case Regime::DoubleRoot: return r;
        case Regime::OscillatoryPair: return a;
    }
    return 0.0;
}

double CharRoots::fast_rate() const {
    switch (regime) {
        case Regime::RealPair: return x1;
        case Regime::DoubleRoot: return r;
        case Regime::OscillatoryPair: return a;
    }
    return 0.0;
}

double discriminant(const DampingParams& p, double lambda) {
    // Factored form keeps the sign reliable near criticality.
    const double beta = p.delta * std::pow(lambda, p.sigma);
    const double s = std::sqrt(lambda);
    return (beta - s) * (beta + s);
}

Regime classify(const DampingParams& p, double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("classify: lambda must be positive");
    const double D = discriminant(p, lambda);
    if (std::abs(D) <= kDoubleRootTol * std::max(1.0, lambda)) return Regime::DoubleRoot;
    return D < 0.0 ? Regime::OscillatoryPair : Regime::RealPair;
}

CharRoots roots(const DampingParams& p, double lambda) {
    p.validate();
    CharRoots out;
    out.regime = classify(p, lambda);
    out.lambda = lambda;
    out.damping = p.delta * std::pow(lambda, p.sigma);
    out.discriminant = discriminant(p, lambda);
    switch (out.regime) {
        case Regime::DoubleRoot:
            out.r = std::sqrt(lambda);
            break;
        case Regime::OscillatoryPair:
            out.a = out.damping;
            out.b = std::sqrt(-out.discriminant);
            break;
        case Regime::RealPair: {
            // Extended precision so x1 rounds to the nearest double; for large lambda the
            // polynomial residual of x1 is otherwise several ulps worse than necessary.
            const long double L = lambda;
            const long double beta = static_cast<long double>(p.delta) * std::pow(L, static_cast<long double>(p.sigma));
            const long double s = std::sqrt(L);
            const long double X1 = beta + std::sqrt((beta - s) * (beta + s));
            out.x1 = static_cast<double>(X1);
            out.x2 = static_cast<double>(L / X1);
            break;
        }
    }
    return out;
}

AsymptoticRatios asymptotic_ratios(const DampingParams& p, double lambda, RatioFamily family) {
    const CharRoots r = roots(p, lambda);
    AsymptoticRatios out;
    out.family = family;
    if (family == RatioFamily::Supercritical) {
        if (r.regime != Regime::RealPair)
            throw std::domain_error("asymptotic_ratios: expected regime real, got " + to_string(r.regime));
        out.x1_over_lambda_sigma = r.x1 / std::pow(lambda, p.sigma);
        out.lambda_1ms_over_x2 = std::pow(lambda, 1.0 - p.sigma) / r.x2;
        out.expected_limit = p.sigma > 0.5 ? 2.0 * p.delta : p.delta + std::sqrt(p.delta * p.delta - 1.0);
    } else {
        if (r.regime != Regime::OscillatoryPair)
            throw std::domain_error("asymptotic_ratios: expected regime oscillatory, got " + to_string(r.regime));
        out.b_over_sqrt_lambda = r.b / std::sqrt(lambda);
        out.expected_limit = p.sigma < 0.5 ? 1.0 : std::sqrt(std::max(0.0, 1.0 - p.delta * p.delta));
    }
    return out;
}

}  // namespace dampwave
