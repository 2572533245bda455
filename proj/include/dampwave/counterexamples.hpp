#pragma once

#include "dampwave/charpoly.hpp"
#include "dampwave/forcing.hpp"
#include "dampwave/probe.hpp"
#include "dampwave/spectrum.hpp"

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dampwave {

// A construction could not be completed (regime threshold not reached, bisection
// exhausted, part too small).
class ConstructionError : public std::runtime_error {
public:
    explicit ConstructionError(const std::string& what) : std::runtime_error(what) {}
};

// The spectrum ran out before the required number of modes was found.
class CapacityError : public ConstructionError {
public:
    CapacityError(const std::string& what, double max_threshold)
        : ConstructionError(what), max_achievable(max_threshold) {}
    double max_achievable;
};

// ---- certificates ----

struct CertificateRow {
    double target_time = 0.0;
    double alpha = 0.0;
    Component component = Component::U;
    Membership verdict = Membership::Inconclusive;
    double value = 0.0;  // weighted squared sum at the largest level (or |Au|^2 for statement 4)
    std::string label;   // verdict text; statement 4 uses Certified / NotCertified
};

// Columns target_time,alpha,verdict,value,component.
std::string certificate_csv(const std::vector<CertificateRow>& rows);

// Membership of (lambda_k^alpha values_k) across prefixes of the given levels.
CertificateRow certify_membership(const std::vector<double>& values, const std::vector<double>& log_lambda,
                                  double alpha, Component c, double t, const std::vector<std::size_t>& levels,
                                  const MembershipThresholds& th = {});

// ---- square-summable weights whose every positive-power reweighting diverges ----

struct DivergentWeights {
    std::vector<std::size_t> indices;  // mode positions the weights attach to
    std::vector<double> amplitudes;    // (eta / c) / (k + 1)
    double eta = 1.0;

    double sum_sq() const;
};

DivergentWeights divergent_weights(double eta, std::size_t K);

// Least k from which a_k^2 lambda_k^{2 eps} increases for a geometric spectrum with the
// given ratio between consecutive modes; beyond it the ratio only grows.
std::size_t eventual_increase_index(double ratio, double eps);

// ---- constant forcing, sigma >= 1 ----

struct ExpectedVerdict {
    double alpha = 0.0;
    Component component = Component::U;
    Membership verdict = Membership::Inconclusive;
};

struct ConstantConstruction {
    ForcingSpec forcing;
    std::vector<ExpectedVerdict> expected;  // at every t > 0
};

// f = sum_k a_k e_k with weights on modes 0..K-1; throws std::domain_error for sigma < 1.
ConstantConstruction statement3_constant_force(const DampingParams& p, const DivergentWeights& w,
                                               const std::vector<double>& eps_set);

// Runs the membership diagnosis for the constant forcing at each time and exponent.
std::vector<CertificateRow> certify_constant_force(const SpectrumModel& m, const DampingParams& p,
                                                   const ForcingSpec& f, const std::vector<double>& times,
                                                   const std::vector<double>& alphas,
                                                   const std::vector<std::size_t>& levels);

// ---- resonant forcing, sigma = 0 ----

// On the modes of `part`: a_k cos(b_k (T - s) - pi/4), with a = divergent_weights(eta, |part|).
// Every part mode must be oscillatory.
ForcingSpec statement1_resonant_force(const SpectrumModel& m, const DampingParams& p, double T, double eta,
                                      const std::vector<std::size_t>& part);

// ---- blow-up families, 0 < sigma < 1 (and the derivative-only family for sigma >= 1) ----

enum class BlowupKind { Supercritical, SupercriticalHalf, Critical, Subcritical, SubcriticalHalf, DerivativeOnly };
std::string to_string(BlowupKind k);

struct BlowupValues {
    double scaled_u = 0.0;   // lambda^sigma0 u(tau)
    double scaled_up = 0.0;  // lambda^sigma1 u'(tau)
};

struct BlowupTriple {
    DampingParams params;
    BlowupKind kind = BlowupKind::Supercritical;
    double sigma0 = 0.0;  // unused for DerivativeOnly
    double sigma1 = 0.0;
    double c0 = 0.0;
    double c1 = 0.0;
    double W = 1.0;       // oscillatory window in units of 1/a
    double psi = 0.0;     // phase of the oscillatory family
    double D = 0.0;       // (delta + sqrt(delta^2 - 1))^2 or sqrt(1 - delta^2)/delta

    bool has_position() const { return kind != BlowupKind::DerivativeOnly; }
    double tau(double lambda) const;
    // The family's forcing on [0, tau], in local time.
    ModeForcing local_forcing(double lambda) const;
    BlowupValues evaluate(double lambda) const;
};

// Regime-appropriate triple (sigma, min(sigma + 1/2, 1), sigma); std::domain_error unless 0 < sigma < 1.
BlowupTriple blowup_triple(const DampingParams& p);
// Pair (sigma, sigma) with f = 1 and tau = 1/x1, for sigma >= 1.
BlowupTriple derivative_blowup_pair(const DampingParams& p);

struct WindowForce {
    ModeForcing forcing;  // absolute time, supported in [T - tau + eps, T - eps]
    double B = 0.0;       // T - eps
    double eps = 0.0;
    double tau = 0.0;
    BlowupValues achieved;  // scaled values at T
    int halvings = 0;
};

// Shifts the family's forcing to end at T, cut off with linear ramps of width eps, and
// halves eps from tau/8 until |scaled u(T)| >= c0/2 and |scaled u'(T)| >= c1/2.
WindowForce window_shift_force(const BlowupTriple& triple, double A_lower, double T, double lambda);

struct WindowedConstruction {
    ForcingSpec forcing;
    std::vector<std::size_t> modes;  // k_n
    std::vector<double> weights;     // omega_n
    std::vector<double> B;           // window ends
    std::vector<double> u_T;         // per model mode, at T
    std::vector<double> up_T;
    double min_fraction_u = 0.0;     // min over windows of |scaled u(T)| / c0, >= 1/2 when certified
    double min_fraction_up = 0.0;
    std::vector<std::string> log;    // skipped modes and why
};

// Regularity loss at time T on the modes of `part`: windows stacked toward T, one
// mode per window, amplitudes eta * omega_n with omega_n = 1 / ln(n + 2).
WindowedConstruction statement2_force(const SpectrumModel& m, const BlowupTriple& triple, double T, double eta,
                                      const std::vector<std::size_t>& part, std::size_t max_windows = 32);

// ---- disjoint-support assembly ----

// Sum of sub-forcings; each must vanish outside its part and parts must be disjoint.
// Throws ConstructionError when a part has fewer than min_modes modes.
ForcingSpec assemble_disjoint(const std::vector<ForcingSpec>& sub, const std::vector<std::vector<std::size_t>>& parts,
                              std::size_t min_modes = 8);

struct Assembly {
    ForcingSpec forcing;
    std::vector<double> targets;
    std::vector<std::vector<std::size_t>> parts;
    std::vector<double> budgets;  // 2^{-n}, n = 1, 2, ...
    std::vector<CertificateRow> certificates;
    double sup_bound = 0.0;       // (sum of budget^2)^{1/2}
    double sampled_sup = 0.0;
};

// Resonant construction for each target on an interleaved part; certificates at each target
// use the part's projection of the assembled solution.
Assembly statement1_assembly(const SpectrumModel& m, const DampingParams& p, const std::vector<double>& targets,
                             const std::vector<double>& eps_set = {0.1});

// Windowed blow-up construction for each target on an interleaved part. Besides the
// membership rows (often Inconclusive: the omega_n series diverges only logarithmically),
// each target gets WindowBounds rows carrying the smallest certified fraction of c0 / c1.
Assembly statement2_assembly(const SpectrumModel& m, const DampingParams& p, const std::vector<double>& targets);

// ---- growth without bound, sigma > 1 ----

struct Schedule {
    std::vector<std::size_t> k;  // chosen indices
    std::vector<double> T;       // T_1..T_n
};

// (1/e)(1 - 1/e)
double schedule_constant();

// k_1 = 0, then the least index whose 1/alpha reaches the running sum; T_n = running sum.
// Throws ConstructionError if fewer than `required` entries fit in the list.
Schedule unbounded_schedule(const std::vector<double>& alphas, std::size_t required = 0);

// alpha_{k_n} int_{T_{n-1}}^{T_n} exp(-alpha_{k_n} x) dx.
double schedule_integral(double alpha, double T_prev, double T_n);

struct LogSchedule {
    std::vector<std::size_t> k;
    std::vector<double> log_T;  // ln T_1..ln T_n
};

// Same recursion with ln(alpha) inputs; stops after `limit` entries when limit > 0.
LogSchedule unbounded_schedule_log(const std::vector<double>& log_alphas, std::size_t limit = 0);

// Distinct real roots in log form; empty outside the real-pair regime.
struct LogRealRoots {
    double log_lambda = 0.0;
    double log_x1 = 0.0;
    double log_x2 = 0.0;
    double log_gap = 0.0;  // ln(x1 - x2)
};
std::optional<LogRealRoots> log_real_roots(const DampingParams& p, double log_lambda);

// The three largeness conditions on a mode used by the threshold construction.
bool threshold_mode_admissible(const LogRealRoots& r);

// Modes needed for |Au(T)|^2 >= M with forcing size eta.
std::size_t threshold_mode_count(double M, double eta);

// lambda u(T) for one mode forced by a unit trapezoid window on y = T - s in [T_prev, T_prev + 1/x2],
// ramps of width ramp_fraction / x2; x2 T_prev given as its log (or -inf for T_prev = 0).
struct ThresholdModeValue {
    double slow = 0.0;  // lambda/(x1-x2) int e^{-x2 y} psi dy
    double fast = 0.0;  // lambda/(x1-x2) int e^{-x1 y} psi dy
    double value() const { return slow - fast; }
};
ThresholdModeValue threshold_mode_value(const LogRealRoots& r, double log_T_prev, double ramp_fraction);

struct ThresholdCertificate {
    double M = 0.0;
    double eta = 0.0;
    std::size_t N = 0;
    std::vector<std::size_t> modes;  // indices into the log spectrum
    double log_T = 0.0;              // ln T = ln T_N
    double Au_sq = 0.0;              // |Au(T)|^2
    double Aw_norm = 0.0;            // slow part
    double Av_norm = 0.0;            // fast part, bounded by eta
    std::size_t skipped = 0;         // modes failing the admissibility predicate
    std::size_t next_index = 0;      // first unused spectrum index
    bool holds = false;
};

// Reversed-time mode-switching forcing of size eta driving |Au(T)|^2 past M, evaluated in
// closed form in the log domain; modes are drawn from log_lambda starting at first_index.
ThresholdCertificate statement4_force(const DampingParams& p, double M, double eta,
                                      const std::vector<double>& log_lambda, std::size_t first_index = 0,
                                      double ramp_fraction = 1e-3);

struct UnboundedSequence {
    std::vector<ThresholdCertificate> parts;  // n = 1..n_max, M = n, eta = 2^{-n}
    std::vector<double> log_t;                // ln t_n
    double sup_bound = 0.0;                   // sum 2^{-n}
    double slope = 0.0;                       // regression of |Au(t_n)|^2 on n
    bool increasing = false;
};

UnboundedSequence statement4_sequence(const DampingParams& p, const std::vector<double>& log_lambda, int n_max,
                                      double ramp_fraction = 1e-3);

struct ThresholdProfile {
    std::vector<double> times;  // T_N inside [t_min, t_max]
    std::vector<double> Au_sq;  // |Au(T_N)|^2 with the schedule truncated at N
    Schedule schedule;
    std::vector<std::size_t> admissible;  // model indices used by the schedule
};

// The threshold construction on an ordinary spectrum, simulated directly with the exact
// per-mode solver; eta = 1.
ThresholdProfile statement4_profile(const SpectrumModel& m, const DampingParams& p, double t_min, double t_max,
                                    double ramp_fraction = 1e-3);

// Forcing of the construction above truncated at N (T = T_N), on the whole model.
ForcingSpec statement4_profile_forcing(const SpectrumModel& m, const ThresholdProfile& prof, std::size_t N,
                                       double ramp_fraction = 1e-3);

}  // namespace dampwave
