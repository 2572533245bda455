#include "dampwave/propagator.hpp"

#include "dampwave/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

namespace dampwave {

double flushed_exp(double x) { return x < kLogUnderflow ? 0.0 : std::exp(x); }

namespace {

// sign(c) * exp(log|c| + lw), flushed.
double signed_term(double c, double lw) {
    if (c == 0.0) return 0.0;
    return std::copysign(flushed_exp(std::log(std::abs(c)) + lw), c);
}

double real_pair(const CharRoots& r, const ModeIC& ic, double t, int m, double lw) {
    const double gap = r.x1 - r.x2;
    const double A1 = -(ic.u0 * r.x2 + ic.u1) / gap;
    const double A2 = (ic.u0 * r.x1 + ic.u1) / gap;
    const double s = (m % 2) ? -1.0 : 1.0;
    const double t1 = signed_term(A1, lw + m * std::log(r.x1) - r.x1 * t);
    const double t2 = signed_term(A2, lw + m * std::log(r.x2) - r.x2 * t);
    return s * (t1 + t2);
}

double double_root(const CharRoots& r, const ModeIC& ic, double t, int m, double lw) {
    const double P = ic.u0;
    const double Q = ic.u1 + r.r * ic.u0;
    if (m == 0) return signed_term(P + Q * t, lw - r.r * t);
    // (-r)^{m-1} [ -r (P + Q t) + m Q ] e^{-r t}
    const double bracket = -r.r * (P + Q * t) + m * Q;
    const double s = ((m - 1) % 2) ? -1.0 : 1.0;
    return s * signed_term(bracket, lw + (m - 1) * std::log(r.r) - r.r * t);
}

double oscillatory(const CharRoots& r, const ModeIC& ic, double t, int m, double lw) {
    // u = Re(C e^{z t}), z = -a + i b, |z| = sqrt(lambda).
    const std::complex<double> C(ic.u0, -(ic.u1 + r.a * ic.u0) / r.b);
    const double theta = std::atan2(r.b, -r.a);
    const double phase = m * theta + r.b * t;
    const double re = C.real() * std::cos(phase) - C.imag() * std::sin(phase);
    return signed_term(re, lw + 0.5 * m * std::log(r.lambda) - r.a * t);
}

}  // namespace

double mode_derivative_lw(const CharRoots& r, const ModeIC& ic, double t, int m, double log_weight) {
    if (!(t >= 0.0)) throw std::domain_error("propagator: time must be nonnegative");
    if (m < 0) throw std::invalid_argument("propagator: derivative order must be nonnegative");
    switch (r.regime) {
        case Regime::RealPair: return real_pair(r, ic, t, m, log_weight);
        case Regime::DoubleRoot: return double_root(r, ic, t, m, log_weight);
        case Regime::OscillatoryPair: return oscillatory(r, ic, t, m, log_weight);
    }
    return 0.0;
}

double mode_derivative(const CharRoots& r, const ModeIC& ic, double t, int m, double weight) {
    return mode_derivative_lw(r, ic, t, m, weight == 0.0 ? 0.0 : weight * std::log(r.lambda));
}

ModeState homogeneous_mode(const CharRoots& r, const ModeIC& ic, double t) {
    return {mode_derivative_lw(r, ic, t, 0, 0.0), mode_derivative_lw(r, ic, t, 1, 0.0)};
}

SpectralVector Trajectory::u_slice(std::size_t ti) const {
    return SpectralVector(u.begin() + static_cast<std::ptrdiff_t>(ti * modes),
                          u.begin() + static_cast<std::ptrdiff_t>((ti + 1) * modes));
}

SpectralVector Trajectory::up_slice(std::size_t ti) const {
    return SpectralVector(up.begin() + static_cast<std::ptrdiff_t>(ti * modes),
                          up.begin() + static_cast<std::ptrdiff_t>((ti + 1) * modes));
}

Trajectory homogeneous_solve(const SpectrumModel& m, const DampingParams& p, const SpectralVector& U0,
                             const SpectralVector& U1, const std::vector<double>& t_grid, int threads) {
    if (U0.size() != m.size() || U1.size() != m.size())
        throw std::length_error("homogeneous_solve: data length does not match spectrum");
    Trajectory tr(t_grid, m.size());
    parallel_for(m.size(), threads, [&](std::size_t k) {
        const CharRoots r = roots(p, m[k]);
        const ModeIC ic{U0[k], U1[k]};
        for (std::size_t i = 0; i < t_grid.size(); ++i) {
            const ModeState s = homogeneous_mode(r, ic, t_grid[i]);
            tr.u_at(i, k) = s.u;
            tr.up_at(i, k) = s.up;
        }
    });
    return tr;
}

std::vector<double> log_time_grid(double t_min, double t_max, std::size_t per_decade, bool with_zero) {
    if (!(t_min > 0.0) || !(t_max > t_min) || per_decade == 0)
        throw std::invalid_argument("log_time_grid: need 0 < t_min < t_max");
    std::vector<double> out;
    if (with_zero) out.push_back(0.0);
    const double decades = std::log10(t_max / t_min);
    const auto n = static_cast<std::size_t>(std::ceil(decades * static_cast<double>(per_decade)));
    for (std::size_t i = 0; i <= n; ++i)
        out.push_back(t_min * std::pow(10.0, decades * static_cast<double>(i) / static_cast<double>(n)));
    out.back() = t_max;
    return out;
}

namespace {

void require_in_spectrum(const SpectrumModel& m, double lambda) {
    const auto& ev = m.eigenvalues();
    if (!std::binary_search(ev.begin(), ev.end(), lambda))
        throw std::invalid_argument("gap_scan: lambda grid entry is not an eigenvalue of the model");
}

double log_sum_exp(double a, double b) {
    if (a == -std::numeric_limits<double>::infinity()) return b;
    if (b == -std::numeric_limits<double>::infinity()) return a;
    const double mx = std::max(a, b);
    return mx + std::log(std::exp(a - mx) + std::exp(b - mx));
}

}  // namespace

std::vector<GapRow> gap_scan(const SpectrumModel& m, const DampingParams& p, const GapScanConfig& cfg, int threads) {
    if (cfg.t_grid.empty() || cfg.lambda_grid.empty()) throw std::invalid_argument("gap_scan: empty grid");
    for (double l : cfg.lambda_grid) require_in_spectrum(m, l);
    for (double t : cfg.t_grid)
        if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("gap_scan: times must be finite and >= 0");

    static const ModeIC kBasis[3] = {{1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}};
    std::vector<GapRow> out(cfg.lambda_grid.size());
    parallel_for(out.size(), threads, [&](std::size_t j) {
        const double lambda = cfg.lambda_grid[j];
        const double ll = std::log(lambda);
        const CharRoots r = roots(p, lambda);
        GapRow row{lambda, 0.0, 0.0, 0};
        const double ninf = -std::numeric_limits<double>::infinity();
        for (int b = 0; b < 3; ++b) {
            const ModeIC& ic = kBasis[b];
            const double lden = log_sum_exp(ic.u0 != 0.0 ? cfg.alpha0 * ll : ninf, ic.u1 != 0.0 ? cfg.alpha1 * ll : ninf);
            for (double t : cfg.t_grid) {
                const double v = std::abs(mode_derivative_lw(r, ic, t, 0, cfg.alpha0 * ll - lden)) +
                                 std::abs(mode_derivative_lw(r, ic, t, 1, cfg.alpha1 * ll - lden));
                if (v > row.amplification) {
                    row.amplification = v;
                    row.t_at_max = t;
                    row.ic_at_max = b;
                }
            }
        }
        out[j] = row;
    });
    return out;
}

double derivative_gap_probe(const SpectrumModel& m, const DampingParams& p, double alpha1, int m_deriv, double t) {
    if (m_deriv < 1) throw std::invalid_argument("derivative_gap_probe: order must be >= 1");
    const double need = (m_deriv - 1) * p.gamma();
    if (alpha1 < need)
        throw std::invalid_argument("derivative_gap_probe: requires alpha1 >= (m-1)*gamma for the higher-derivative bound");
    double sup = 0.0;
    for (double lambda : m.eigenvalues()) {
        const CharRoots r = roots(p, lambda);
        // weight lambda^{alpha1-(m-1)gamma} times data lambda^{-alpha1}
        const double v = mode_derivative_lw(r, {0.0, 1.0}, t, m_deriv, -need * std::log(lambda));
        sup = std::max(sup, std::abs(v));
    }
    return sup;
}

double forward_regularity_probe(const SpectrumModel& m, const DampingParams& p, double alpha0, double alpha1,
                                int m_deriv, double t) {
    if (p.sigma < 1.0) throw std::invalid_argument("forward_regularity_probe: requires sigma >= 1");
    if (!(t > 0.0)) throw std::invalid_argument("forward_regularity_probe: requires t > 0");
    const double w = alpha0 + m_deriv * (p.sigma - 1.0);
    double sup = 0.0;
    for (double lambda : m.eigenvalues()) {
        const CharRoots r = roots(p, lambda);
        const double ll = std::log(lambda);
        sup = std::max(sup, std::abs(mode_derivative_lw(r, {1.0, 0.0}, t, m_deriv, (w - alpha0) * ll)));
        sup = std::max(sup, std::abs(mode_derivative_lw(r, {0.0, 1.0}, t, m_deriv, (w - alpha1) * ll)));
    }
    return sup;
}

double smoothing_probe(const SpectrumModel& m, const DampingParams& p, double alpha, double t) {
    double sup = 0.0;
    for (double lambda : m.eigenvalues()) {
        const CharRoots r = roots(p, lambda);
        sup = std::max(sup, std::abs(mode_derivative(r, {1.0, 0.0}, t, 0, alpha)));
        sup = std::max(sup, std::abs(mode_derivative(r, {0.0, 1.0}, t, 0, alpha)));
    }
    return sup;
}

}  // namespace dampwave
