#include "dampwave/duhamel.hpp"

#include "dampwave/parallel.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dampwave {

using cplx = std::complex<double>;

namespace {

// exp(w) - 1 without cancellation for small |w|.
cplx expm1c(cplx w) {
    const double x = w.real(), y = w.imag();
    const double sh = std::sin(0.5 * y);
    return {std::expm1(x) * std::cos(y) - 2.0 * sh * sh, std::exp(x) * std::sin(y)};
}

cplx cexp_flushed(cplx w) {
    if (w.real() < kLogUnderflow) return {0.0, 0.0};
    return std::exp(w);
}

// E_n = int_0^L x^n e^{w x} dx for n = 0..2.
void moments(cplx w, double L, cplx out[3]) {
    const cplx wl = w * L;
    if (std::abs(wl) < 0.5) {
        for (int n = 0; n < 3; ++n) {
            cplx term = 1.0;  // (wL)^j / j!
            cplx acc = 0.0;
            for (int j = 0; j < 30; ++j) {
                const cplx add = term / static_cast<double>(n + j + 1);
                acc += add;
                if (std::abs(add) < 1e-18 * std::abs(acc)) break;
                term *= wl / static_cast<double>(j + 1);
            }
            out[n] = acc * std::pow(L, n + 1);
        }
        return;
    }
    const cplx e = cexp_flushed(wl);
    out[0] = expm1c(wl) / w;
    if (wl.real() < kLogUnderflow) out[0] = -1.0 / w;
    out[1] = (L * e - out[0]) / w;
    out[2] = (L * L * e - 2.0 * out[1]) / w;
}

// int over s in [lo, hi] of coef (t-s)^p e^{z(t-s)} seg(s) ds.
cplx segment_integral(const KernelTerm& k, const Segment& seg, double t, double lo, double hi) {
    const double sa = std::max(lo, seg.s0);
    const double sb = std::min(hi, seg.s1);
    if (!(sb > sa)) return 0.0;
    const double L = sb - sa;
    const double tau_a = t - sb;
    const double g0 = seg.c0 + seg.c1 * sb;
    const double theta = seg.omega * sb + seg.phi;
    // Polynomial in x of (tau_a + x)^p (g0 - c1 x).
    double poly[3] = {g0, -seg.c1, 0.0};
    if (k.power == 1) {
        poly[0] = tau_a * g0;
        poly[1] = g0 - seg.c1 * tau_a;
        poly[2] = -seg.c1;
    }
    const cplx base = k.coef * cexp_flushed(k.rate * tau_a);
    if (base == cplx(0.0)) return 0.0;
    auto half = [&](double sign) {
        cplx E[3];
        moments(k.rate - cplx(0.0, sign * seg.omega), L, E);
        return poly[0] * E[0] + poly[1] * E[1] + poly[2] * E[2];
    };
    if (seg.omega == 0.0) return base * std::cos(theta) * half(1.0);
    const cplx ph = std::exp(cplx(0.0, theta));
    return 0.5 * base * (ph * half(1.0) + std::conj(ph) * half(-1.0));
}

std::vector<Segment> sample_segments(const SampleTable& s) {
    std::vector<Segment> out;
    for (std::size_t i = 0; i + 1 < s.t.size(); ++i) {
        const double h = s.t[i + 1] - s.t[i];
        if (!(h > 0.0)) throw std::invalid_argument("sample table times must be strictly increasing");
        const double c1 = (s.v[i + 1] - s.v[i]) / h;
        out.push_back(Segment{s.t[i], s.t[i + 1], s.v[i] - c1 * s.t[i], c1, 0.0, 0.0});
    }
    return out;
}

std::vector<Segment> base_segments(const ModeForcing& f) {
    std::vector<Segment> segs = f.samples ? sample_segments(*f.samples) : f.segments;
    if (f.period > 0.0) {
        std::vector<Segment> clipped;
        for (auto s : segs) {
            s.s0 = std::max(s.s0, 0.0);
            s.s1 = std::min(s.s1, f.period);
            if (s.s1 > s.s0) clipped.push_back(s);
        }
        segs = std::move(clipped);
    }
    return segs;
}

// Segments covering [lo, hi], with periodic images when f is periodic.
std::vector<Segment> segments_over(const ModeForcing& f, double lo, double hi) {
    std::vector<Segment> base = base_segments(f);
    if (!(f.period > 0.0)) return base;
    const double P = f.period;
    const auto n0 = static_cast<long long>(std::floor(lo / P));
    const auto n1 = static_cast<long long>(std::floor(hi / P));
    if (n1 - n0 > 2000000) throw std::invalid_argument("periodic forcing: too many periods to unroll");
    std::vector<Segment> out;
    out.reserve(base.size() * static_cast<std::size_t>(n1 - n0 + 1));
    for (long long n = n0; n <= n1; ++n)
        for (const auto& s : base) out.push_back(n == 0 ? s : s.shifted(static_cast<double>(n) * P));
    return out;
}

double kernel_value(const std::vector<KernelTerm>& terms, const std::vector<Segment>& segs, double t, double lo,
                    double hi) {
    cplx acc = 0.0;
    for (const auto& k : terms)
        for (const auto& s : segs) acc += segment_integral(k, s, t, lo, hi);
    return acc.real();
}

}  // namespace

std::vector<KernelTerm> kernel_terms(const CharRoots& r, int derivative) {
    if (derivative != 0 && derivative != 1) throw std::invalid_argument("kernel_terms: derivative must be 0 or 1");
    std::vector<KernelTerm> out;
    switch (r.regime) {
        case Regime::RealPair: {
            const double g = r.x1 - r.x2;
            if (derivative == 0) {
                out.push_back({1.0 / g, 0, -r.x2});
                out.push_back({-1.0 / g, 0, -r.x1});
            } else {
                out.push_back({-r.x2 / g, 0, -r.x2});
                out.push_back({r.x1 / g, 0, -r.x1});
            }
            break;
        }
        case Regime::DoubleRoot:
            if (derivative == 0) {
                out.push_back({1.0, 1, -r.r});
            } else {
                out.push_back({1.0, 0, -r.r});
                out.push_back({-r.r, 1, -r.r});
            }
            break;
        case Regime::OscillatoryPair: {
            const cplx z(-r.a, r.b);
            const cplx c = 1.0 / cplx(0.0, r.b);
            out.push_back({derivative == 0 ? c : c * z, 0, z});
            break;
        }
    }
    return out;
}

ModeState forced_mode(const CharRoots& r, const ModeForcing& f, double t) {
    if (!(t >= 0.0)) throw std::domain_error("forced_mode: time must be nonnegative");
    if (f.empty() || t == 0.0) return {};
    const auto segs = segments_over(f, 0.0, t);
    return {kernel_value(kernel_terms(r, 0), segs, t, 0.0, t), kernel_value(kernel_terms(r, 1), segs, t, 0.0, t)};
}

ModeState solve_mode(const CharRoots& r, const ModeIC& ic, const ModeForcing& f, double t) {
    const ModeState h = homogeneous_mode(r, ic, t);
    const ModeState g = forced_mode(r, f, t);
    return {h.u + g.u, h.up + g.up};
}

ModeState unit_step_response(const CharRoots& r, double t) {
    if (!(t >= 0.0)) throw std::domain_error("unit_step_response: time must be nonnegative");
    const double lambda = r.lambda;
    switch (r.regime) {
        case Regime::RealPair: {
            const double e1 = -std::expm1(-r.x1 * t);
            const double e2 = -std::expm1(-r.x2 * t);
            const double g = r.x1 - r.x2;
            return {(r.x1 * e2 - r.x2 * e1) / (lambda * g), (e1 - e2) / g};
        }
        case Regime::DoubleRoot: {
            const double rt = r.r * t;
            const double ex = std::exp(-rt);
            return {(-std::expm1(-rt) - rt * ex) / lambda, t * ex};
        }
        case Regime::OscillatoryPair: {
            const double ex = std::exp(-r.a * t);
            const double s = std::sin(r.b * t);
            // 1 - e^{-at} cos(bt) written as -expm1 plus a bounded correction.
            const double one_minus = -std::expm1(-r.a * t) + ex * 2.0 * std::pow(std::sin(0.5 * r.b * t), 2);
            return {(one_minus - ex * (r.a / r.b) * s) / lambda, ex * s / r.b};
        }
    }
    return {};
}

ModeState constant_forcing_mode(const DampingParams& p, double lambda, double t) {
    return unit_step_response(roots(p, lambda), t);
}

ModeState resonant_mode_response(const DampingParams& p, double lambda, double T) {
    if (!(T >= 0.0)) throw std::domain_error("resonant_mode_response: time must be nonnegative");
    const CharRoots r = roots(p, lambda);
    if (r.regime != Regime::OscillatoryPair)
        throw std::domain_error("resonant_mode_response: requires an oscillatory mode, got " + to_string(r.regime));
    if (T == 0.0) return {};
    const double a = r.a, b = r.b;
    // Substituting x = T - s: integrands e^{-a x} {sin^2, cos^2, sin cos}(b x).
    const double I0 = -std::expm1(-a * T) / a;
    const cplx w(-a, 2.0 * b);
    const cplx Iw = expm1c(w * T) / w;  // I_cos + i I_sin of the doubled frequency
    const double sin2 = 0.5 * (I0 - Iw.real());
    const double cos2 = 0.5 * (I0 + Iw.real());
    const double sincos = 0.5 * Iw.imag();
    const double k = std::numbers::sqrt2 / 2.0;  // cos(bx - pi/4) = k (cos bx + sin bx)
    const double u = k / b * (sincos + sin2);
    const double up = k * (cos2 + sincos - (a / b) * (sincos + sin2));
    return {u, up};
}

namespace {

// Panel boundaries on [0, h] graded toward tau = 0 at each kernel scale, split where
// the forcing (evaluated at t_end - tau) has a breakpoint.
std::vector<double> panel_cuts(const CharRoots& r, const std::vector<double>& bps, double t_end, double h,
                               double max_freq) {
    std::vector<double> cuts{0.0, h};
    auto graded = [&](double rate) {
        if (!(rate > 0.0)) return;
        for (double x = 1.0 / rate; x < h; x *= 2.0) cuts.push_back(x);
        for (double x = 0.5 / rate; x > 1e-6 / rate && x < h; x *= 0.5) cuts.push_back(x);
    };
    graded(r.fast_rate());
    graded(r.slow_rate());
    for (double b : bps) {
        const double tau = t_end - b;
        if (tau > 0.0 && tau < h) cuts.push_back(tau);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    if (max_freq > 0.0) {
        const double len = 2.0 / max_freq;
        std::vector<double> fine;
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            const double a = cuts[i], b = cuts[i + 1];
            const auto n = static_cast<std::size_t>(std::ceil((b - a) / len));
            for (std::size_t j = 0; j < std::max<std::size_t>(n, 1); ++j)
                fine.push_back(a + (b - a) * static_cast<double>(j) / static_cast<double>(std::max<std::size_t>(n, 1)));
        }
        fine.push_back(cuts.back());
        cuts = std::move(fine);
    }
    return cuts;
}

ModeState gauss_step(const CharRoots& r, const ModeForcing& f, double t_end, const std::vector<double>& cuts,
                     int split) {
    using Q = boost::math::quadrature::gauss<double, 12>;
    double u = 0.0, up = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        for (int j = 0; j < split; ++j) {
            const double a = cuts[i] + (cuts[i + 1] - cuts[i]) * j / split;
            const double b = cuts[i] + (cuts[i + 1] - cuts[i]) * (j + 1) / split;
            u += Q::integrate(
                [&](double tau) { return homogeneous_mode(r, {0.0, 1.0}, tau).u * f.value(t_end - tau); }, a, b);
            up += Q::integrate(
                [&](double tau) { return homogeneous_mode(r, {0.0, 1.0}, tau).up * f.value(t_end - tau); }, a, b);
        }
    }
    return {u, up};
}

}  // namespace

ModeTrajectory duhamel_quadrature(const CharRoots& r, const ModeForcing& f, const std::vector<double>& t_grid,
                                  double tol, const ModeIC& ic) {
    if (!(tol > 0.0)) throw std::invalid_argument("duhamel_quadrature: tol must be positive");
    ModeTrajectory out;
    out.times = t_grid;
    double max_freq = r.regime == Regime::OscillatoryPair ? r.b : 0.0;
    for (const auto& s : base_segments(f)) max_freq = std::max(max_freq, std::abs(s.omega));

    ModeState state{ic.u0, ic.u1};
    double t_prev = 0.0;
    for (double t : t_grid) {
        if (!(t >= t_prev)) throw std::invalid_argument("duhamel_quadrature: time grid must be nondecreasing from 0");
        const double h = t - t_prev;
        if (h > 0.0) {
            const ModeState hom = homogeneous_mode(r, {state.u, state.up}, h);
            std::vector<double> bps;
            for (const auto& s : segments_over(f, t_prev, t)) {
                bps.push_back(s.s0);
                if (std::isfinite(s.s1)) bps.push_back(s.s1);
            }
            const auto cuts = panel_cuts(r, bps, t, h, max_freq);
            const ModeState coarse = gauss_step(r, f, t, cuts, 1);
            const ModeState fine = gauss_step(r, f, t, cuts, 2);
            const double err = std::max(std::abs(fine.u - coarse.u), std::abs(fine.up - coarse.up));
            out.max_error_estimate = std::max(out.max_error_estimate, err);
            if (err > tol) out.accuracy_warning = true;
            state = {hom.u + fine.u, hom.up + fine.up};
        }
        out.u.push_back(state.u);
        out.up.push_back(state.up);
        t_prev = t;
    }
    return out;
}

ModeTrajectory exact_trajectory(const CharRoots& r, const ModeForcing& f, const ModeIC& ic,
                                const std::vector<double>& t_grid) {
    ModeTrajectory out;
    out.times = t_grid;
    out.u.reserve(t_grid.size());
    out.up.reserve(t_grid.size());
    const auto k0 = kernel_terms(r, 0);
    const auto k1 = kernel_terms(r, 1);
    const bool periodic = f.period > 0.0;
    const std::vector<Segment> all = periodic ? std::vector<Segment>{} : base_segments(f);
    ModeState state{ic.u0, ic.u1};
    double t_prev = 0.0;
    for (double t : t_grid) {
        if (!(t >= t_prev)) throw std::invalid_argument("exact_trajectory: time grid must be nondecreasing from 0");
        if (t > t_prev) {
            const ModeState h = homogeneous_mode(r, {state.u, state.up}, t - t_prev);
            double fu = 0.0, fup = 0.0;
            if (!f.empty()) {
                const auto segs = periodic ? segments_over(f, t_prev, t) : all;
                fu = kernel_value(k0, segs, t, t_prev, t);
                fup = kernel_value(k1, segs, t, t_prev, t);
            }
            state = {h.u + fu, h.up + fup};
        }
        out.u.push_back(state.u);
        out.up.push_back(state.up);
        t_prev = t;
    }
    return out;
}

ModeState line_bounded_mode(const CharRoots& r, const ModeForcing& f, double t) {
    if (!(f.period > 0.0)) throw std::invalid_argument("line_bounded_mode: forcing must be periodic (period > 0)");
    const double P = f.period;
    const double tr = t - std::floor(t / P) * P;
    const auto segs = segments_over(f, tr - P, tr);
    auto eval = [&](int derivative) {
        cplx acc = 0.0;
        for (const auto& k : kernel_terms(r, derivative)) {
            const cplx q = cexp_flushed(k.rate * P);
            const cplx one_minus_q = -expm1c(k.rate * P);
            KernelTerm k0 = k;
            k0.power = 0;
            cplx I0 = 0.0;
            for (const auto& s : segs) I0 += segment_integral(k0, s, tr, tr - P, tr);
            if (k.power == 0) {
                acc += I0 / one_minus_q;
            } else {
                cplx I1 = 0.0;
                for (const auto& s : segs) I1 += segment_integral(k, s, tr, tr - P, tr);
                acc += I1 / one_minus_q + P * I0 * q / (one_minus_q * one_minus_q);
            }
        }
        return acc.real();
    };
    return {eval(0), eval(1)};
}

AttractionReport asymptotic_attraction_check(const CharRoots& r, const ModeForcing& f, const ModeIC& ic,
                                             double horizon) {
    if (!(horizon > 0.0)) throw std::invalid_argument("asymptotic_attraction_check: horizon must be positive");
    AttractionReport rep;
    rep.slow_rate = r.slow_rate();
    auto gap = [&](double t) {
        const ModeState a = solve_mode(r, ic, f, t);
        const ModeState b = line_bounded_mode(r, f, t);
        const double d = a.u - b.u, dp = a.up - b.up;
        return std::sqrt(r.lambda * d * d + dp * dp);
    };
    rep.initial_gap = gap(0.0);
    const int n = 200;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int used = 0;
    for (int i = 0; i <= n; ++i) {
        const double t = horizon * (0.5 + 0.5 * i / n);
        const double g = gap(t);
        if (i == n) rep.final_gap = g;
        if (!(g > 0.0)) continue;
        const double y = std::log(g);
        sx += t;
        sy += y;
        sxx += t * t;
        sxy += t * y;
        ++used;
    }
    if (used < 2) {
        rep.fitted_rate = 0.0;
        rep.relative_error = rep.initial_gap == 0.0 ? 0.0 : 1.0;
        return rep;
    }
    const double slope = (used * sxy - sx * sy) / (used * sxx - sx * sx);
    rep.fitted_rate = -slope;
    rep.relative_error = std::abs(rep.fitted_rate - rep.slow_rate) / rep.slow_rate;
    return rep;
}

double kernel_bound_constant(double b, double c) {
    if (b < 0.0 || c < 0.0) throw std::invalid_argument("kernel_bound_constant: exponents must be nonnegative");
    auto g = [&](double x) { return std::exp(-x) * std::max(std::pow(x, b), std::pow(x, c)); };
    // Coarse scan, then Brent refinement around the best bracket.
    const double hi = 4.0 * std::max({b, c, 1.0}) + 10.0;
    const int n = 2000;
    int best = 0;
    double best_v = g(0.0);
    for (int i = 1; i <= n; ++i) {
        const double v = g(hi * i / n);
        if (v > best_v) {
            best_v = v;
            best = i;
        }
    }
    const double lo_x = hi * std::max(best - 1, 0) / n;
    const double hi_x = hi * std::min(best + 1, n) / n;
    const auto res = boost::math::tools::brent_find_minima([&](double x) { return -g(x); }, lo_x, hi_x, 52);
    return std::max(best_v, -res.second);
}

Trajectory forced_solve(const SpectrumModel& m, const DampingParams& p, const ForcingSpec& f,
                        const std::vector<double>& t_grid, int threads, const SpectralVector* U0,
                        const SpectralVector* U1) {
    if (f.size() != m.size()) throw std::length_error("forced_solve: forcing length does not match spectrum");
    if ((U0 && U0->size() != m.size()) || (U1 && U1->size() != m.size()))
        throw std::length_error("forced_solve: data length does not match spectrum");
    Trajectory tr(t_grid, m.size());
    parallel_for(m.size(), threads, [&](std::size_t k) {
        const CharRoots r = roots(p, m[k]);
        const ModeForcing fk = f.modes[k].scaled(f.scale);
        const ModeIC ic{U0 ? (*U0)[k] : 0.0, U1 ? (*U1)[k] : 0.0};
        if (std::is_sorted(t_grid.begin(), t_grid.end()) && (t_grid.empty() || t_grid.front() >= 0.0)) {
            const ModeTrajectory mt = exact_trajectory(r, fk, ic, t_grid);
            for (std::size_t i = 0; i < t_grid.size(); ++i) {
                tr.u_at(i, k) = mt.u[i];
                tr.up_at(i, k) = mt.up[i];
            }
            return;
        }
        for (std::size_t i = 0; i < t_grid.size(); ++i) {
            const ModeState s = solve_mode(r, ic, fk, t_grid[i]);
            tr.u_at(i, k) = s.u;
            tr.up_at(i, k) = s.up;
        }
    });
    return tr;
}

ModeForcing smoothed_square_wave(double period, double amplitude, double ramp_fraction) {
    if (!(period > 0.0)) throw std::invalid_argument("smoothed_square_wave: period must be positive");
    if (!(ramp_fraction > 0.0 && ramp_fraction <= 0.5))
        throw std::invalid_argument("smoothed_square_wave: ramp_fraction must lie in (0, 0.5]");
    const double P = period, A = amplitude;
    const double w = ramp_fraction * P / 2.0;
    const double k = A / w;
    ModeForcing f;
    f.period = P;
    auto seg = [&](double s0, double s1, double c0, double c1) {
        if (s1 > s0) f.segments.push_back(Segment{s0, s1, c0, c1, 0.0, 0.0});
    };
    seg(0.0, w, 0.0, k);
    seg(w, P / 2 - w, A, 0.0);
    seg(P / 2 - w, P / 2 + w, k * P / 2, -k);
    seg(P / 2 + w, P - w, -A, 0.0);
    seg(P - w, P, -k * P, k);
    return f;
}

}  // namespace dampwave
