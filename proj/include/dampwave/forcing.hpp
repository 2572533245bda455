#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace dampwave {

inline constexpr double kForever = std::numeric_limits<double>::infinity();

// (c0 + c1 s) * cos(omega s + phi) on [s0, s1); zero elsewhere.
struct Segment {
    double s0 = 0.0;
    double s1 = kForever;
    double c0 = 1.0;
    double c1 = 0.0;
    double omega = 0.0;
    double phi = 0.0;

    double value(double s) const;
    // sup of |value| over the segment (envelope bound).
    double bound() const;
    Segment shifted(double dt) const;  // value'(s) = value(s - dt)
};

// Piecewise-linear tabulated forcing; zero outside the table.
struct SampleTable {
    std::vector<double> t;
    std::vector<double> v;
    double value(double s) const;
};

// Forcing of a single mode: sum of segments, or a sample table.
struct ModeForcing {
    std::vector<Segment> segments;
    std::optional<SampleTable> samples;
    // Period of the extension used by whole-line solutions; 0 = not periodic.
    double period = 0.0;

    double value(double s) const;
    // Declared sup bound: sum of segment envelopes (exact for disjoint windows), or max |sample|.
    double declared_bound() const;
    std::vector<double> breakpoints() const;
    bool empty() const { return segments.empty() && !samples; }

    static ModeForcing zero() { return {}; }
    static ModeForcing constant(double c);
    // amplitude * cos(omega s + phi) on [s0, s1], with linear ramps of width `ramp` inside the window.
    static ModeForcing windowed_sinusoid(double amplitude, double omega, double phi, double s0, double s1,
                                         double ramp = 0.0);
    ModeForcing& add(const ModeForcing& other);
    ModeForcing scaled(double k) const;
};

// One active mode per interval; used by the mode-switching constructions.
struct SwitchEntry {
    double s0 = 0.0;
    double s1 = 0.0;
    std::size_t mode = 0;
    double amplitude = 1.0;
};

enum class ForcingKind { Zero, Constant, WindowedSinusoid, PiecewiseModeSwitch, Samples, Mixed };

std::string to_string(ForcingKind k);

struct ForcingSpec {
    ForcingKind kind = ForcingKind::Zero;
    std::vector<ModeForcing> modes;
    double scale = 1.0;  // global eta

    std::size_t size() const { return modes.size(); }
    double value(std::size_t k, double s) const { return scale * modes.at(k).value(s); }
    // Euclidean norm of the forcing vector at time s.
    double norm_at(double s) const;
    // Max of norm_at over `samples` uniformly spaced points of [s0, s1] plus all breakpoints.
    double sampled_sup(double s0, double s1, std::size_t samples) const;

    static ForcingSpec zero(std::size_t K);
    static ForcingSpec constant(const std::vector<double>& c);
    // Mode-switching schedule with linear ramps of width `ramp` at both ends of each interval.
    static ForcingSpec mode_switch(std::size_t K, const std::vector<SwitchEntry>& schedule, double ramp);
};

}  // namespace dampwave
