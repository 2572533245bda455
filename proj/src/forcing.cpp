#include "dampwave/forcing.hpp"

#include "dampwave/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dampwave {

double Segment::value(double s) const {
    if (s < s0 || s >= s1) return 0.0;
    return (c0 + c1 * s) * std::cos(omega * s + phi);
}

double Segment::bound() const {
    if (c1 == 0.0) return std::abs(c0);
    double lo = std::abs(c0 + c1 * s0);
    double hi = std::isfinite(s1) ? std::abs(c0 + c1 * s1) : kForever;
    return std::max(lo, hi);
}

Segment Segment::shifted(double dt) const {
    Segment out = *this;
    out.s0 += dt;
    out.s1 += dt;
    out.c0 -= c1 * dt;
    out.phi -= omega * dt;
    return out;
}

double SampleTable::value(double s) const {
    if (t.empty() || s < t.front() || s > t.back()) return 0.0;
    auto it = std::upper_bound(t.begin(), t.end(), s);
    if (it == t.end()) return v.back();
    const auto i = static_cast<std::size_t>(it - t.begin());
    const double w = (s - t[i - 1]) / (t[i] - t[i - 1]);
    return v[i - 1] + w * (v[i] - v[i - 1]);
}

double ModeForcing::value(double s) const {
    if (period > 0.0) s -= std::floor(s / period) * period;
    if (samples) return samples->value(s);
    double acc = 0.0;
    for (const auto& seg : segments) acc += seg.value(s);
    return acc;
}

double ModeForcing::declared_bound() const {
    if (samples) {
        double m = 0.0;
        for (double x : samples->v) m = std::max(m, std::abs(x));
        return m;
    }
    // Overlapping segments add up; disjoint ones share the bound.
    std::vector<double> cuts;
    for (const auto& s : segments) {
        cuts.push_back(s.s0);
        if (std::isfinite(s.s1)) cuts.push_back(s.s1);
    }
    std::sort(cuts.begin(), cuts.end());
    double best = 0.0;
    for (std::size_t i = 0; i < cuts.size(); ++i) {
        const double a = cuts[i];
        const double b = i + 1 < cuts.size() ? cuts[i + 1] : kForever;
        if (!(b > a)) continue;
        const double mid = std::isfinite(b) ? 0.5 * (a + b) : a + 1.0;
        double acc = 0.0;
        for (const auto& s : segments)
            if (mid >= s.s0 && mid < s.s1) acc += s.bound();
        best = std::max(best, acc);
    }
    return best;
}

std::vector<double> ModeForcing::breakpoints() const {
    std::vector<double> out;
    if (samples) return samples->t;
    for (const auto& s : segments) {
        out.push_back(s.s0);
        if (std::isfinite(s.s1)) out.push_back(s.s1);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

ModeForcing ModeForcing::constant(double c) {
    ModeForcing f;
    if (c != 0.0) f.segments.push_back(Segment{0.0, kForever, c, 0.0, 0.0, 0.0});
    return f;
}

ModeForcing ModeForcing::windowed_sinusoid(double amplitude, double omega, double phi, double s0, double s1,
                                           double ramp) {
    if (!(s1 > s0)) throw std::invalid_argument("windowed_sinusoid: empty window");
    if (ramp < 0.0 || (std::isfinite(s1) && 2.0 * ramp > s1 - s0))
        throw std::invalid_argument("windowed_sinusoid: ramp wider than half the window");
    ModeForcing f;
    if (amplitude == 0.0) return f;
    if (ramp == 0.0) {
        f.segments.push_back(Segment{s0, s1, amplitude, 0.0, omega, phi});
        return f;
    }
    const double k = amplitude / ramp;
    f.segments.push_back(Segment{s0, s0 + ramp, -k * s0, k, omega, phi});
    if (std::isfinite(s1)) {
        f.segments.push_back(Segment{s0 + ramp, s1 - ramp, amplitude, 0.0, omega, phi});
        f.segments.push_back(Segment{s1 - ramp, s1, k * s1, -k, omega, phi});
    } else {
        f.segments.push_back(Segment{s0 + ramp, kForever, amplitude, 0.0, omega, phi});
    }
    return f;
}

ModeForcing& ModeForcing::add(const ModeForcing& other) {
    if (samples || other.samples) throw std::invalid_argument("ModeForcing::add: sample tables cannot be combined");
    segments.insert(segments.end(), other.segments.begin(), other.segments.end());
    return *this;
}

ModeForcing ModeForcing::scaled(double k) const {
    ModeForcing out = *this;
    for (auto& s : out.segments) {
        s.c0 *= k;
        s.c1 *= k;
    }
    if (out.samples)
        for (auto& x : out.samples->v) x *= k;
    return out;
}

std::string to_string(ForcingKind k) {
    switch (k) {
        case ForcingKind::Zero: return "zero";
        case ForcingKind::Constant: return "constant";
        case ForcingKind::WindowedSinusoid: return "windowed_sinusoid";
        case ForcingKind::PiecewiseModeSwitch: return "mode_switch";
        case ForcingKind::Samples: return "samples";
        case ForcingKind::Mixed: return "mixed";
    }
    return "unknown";
}

double ForcingSpec::norm_at(double s) const {
    KahanSum acc;
    for (std::size_t k = 0; k < modes.size(); ++k) {
        const double v = value(k, s);
        acc.add(v * v);
    }
    return std::sqrt(acc.value());
}

double ForcingSpec::sampled_sup(double s0, double s1, std::size_t samples) const {
    std::vector<double> pts;
    for (std::size_t i = 0; i < samples; ++i)
        pts.push_back(s0 + (s1 - s0) * static_cast<double>(i) / static_cast<double>(samples > 1 ? samples - 1 : 1));
    for (const auto& m : modes)
        for (double b : m.breakpoints())
            if (b >= s0 && b <= s1) pts.push_back(b);
    double best = 0.0;
    for (double s : pts) best = std::max(best, norm_at(s));
    return best;
}

ForcingSpec ForcingSpec::zero(std::size_t K) {
    ForcingSpec f;
    f.kind = ForcingKind::Zero;
    f.modes.assign(K, ModeForcing{});
    return f;
}

ForcingSpec ForcingSpec::constant(const std::vector<double>& c) {
    ForcingSpec f;
    f.kind = ForcingKind::Constant;
    for (double x : c) f.modes.push_back(ModeForcing::constant(x));
    return f;
}

ForcingSpec ForcingSpec::mode_switch(std::size_t K, const std::vector<SwitchEntry>& schedule, double ramp) {
    ForcingSpec f = zero(K);
    f.kind = ForcingKind::PiecewiseModeSwitch;
    double last_end = -kForever;
    for (const auto& e : schedule) {
        if (e.mode >= K) throw std::out_of_range("mode_switch: mode index out of range");
        if (e.s0 < last_end) throw std::invalid_argument("mode_switch: intervals must be ordered and disjoint");
        last_end = e.s1;
        f.modes[e.mode].add(ModeForcing::windowed_sinusoid(e.amplitude, 0.0, 0.0, e.s0, e.s1, ramp));
    }
    return f;
}

}  // namespace dampwave
