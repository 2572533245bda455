#include "dampwave/counterexamples.hpp"

#include "dampwave/csv.hpp"
#include "dampwave/duhamel.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

namespace dampwave {

namespace {

constexpr double kInvE = 0.36787944117144233;  // 1/e

double log_add_exp(double a, double b) {
    if (a == -std::numeric_limits<double>::infinity()) return b;
    if (b == -std::numeric_limits<double>::infinity()) return a;
    const double hi = std::max(a, b), lo = std::min(a, b);
    return hi + std::log1p(std::exp(lo - hi));
}

std::vector<double> logs_of(const SpectrumModel& m, const std::vector<std::size_t>& idx) {
    std::vector<double> out;
    out.reserve(idx.size());
    for (std::size_t k : idx) out.push_back(std::log(m[k]));
    return out;
}

std::vector<double> all_logs(const SpectrumModel& m) {
    std::vector<double> out(m.size());
    for (std::size_t k = 0; k < m.size(); ++k) out[k] = std::log(m[k]);
    return out;
}

ModeForcing shifted(const ModeForcing& f, double dt) {
    ModeForcing out;
    out.period = f.period;
    for (const auto& s : f.segments) out.segments.push_back(s.shifted(dt));
    return out;
}

std::vector<std::size_t> part_levels(std::size_t n) {
    if (n < 8) throw ConstructionError("part has " + std::to_string(n) + " modes; membership needs at least 8");
    auto lv = geometric_levels(1, n, 8);
    if (lv.size() < 8) {
        lv.clear();
        for (std::size_t k = n - 7; k <= n; ++k) lv.push_back(k);
    }
    return lv;
}

// (1 - e^{-r}(1 + r)) / r, the rising-ramp weight of int_0^r e^{-x} x/r dx.
double ramp_weight(double r) {
    if (r == 0.0) return 0.0;
    if (r < 0.05) {
        // sum_{k>=2} (-1)^k (k-1) r^{k-1} / k!
        double term = 1.0, sum = 0.0;  // term = r^{k-1}/k!
        for (int k = 2; k < 20; ++k) {
            term = (k == 2) ? r / 2.0 : term * r / k;
            sum += ((k % 2 == 0) ? 1.0 : -1.0) * (k - 1) * term;
        }
        return sum;
    }
    if (!std::isfinite(r)) return 0.0;
    return (-std::expm1(-r) - r * std::exp(-r)) / r;
}

// int e^{-z} psi(z) dz for psi the unit trapezoid on [a, a + L] with ramps r <= L/2.
double trapezoid_exp_integral(double a, double L, double r) {
    const double ea = flushed_exp(-a);
    if (ea == 0.0) return 0.0;
    const double rise = ea * ramp_weight(r);
    double middle, fall;
    if (!std::isfinite(L) || L - r > 800.0) {
        middle = flushed_exp(-(a + r));
        fall = 0.0;
    } else {
        const double e_end = flushed_exp(-(a + L - r));
        middle = flushed_exp(-(a + r)) - e_end;
        fall = e_end * (-std::expm1(-r) - ramp_weight(r));
    }
    return rise + middle + fall;
}

}  // namespace

// ---- certificates ----

std::string certificate_csv(const std::vector<CertificateRow>& rows) {
    CsvWriter w({"target_time", "alpha", "verdict", "value", "component"});
    for (const auto& r : rows)
        w.row(r.target_time, r.alpha, r.label.empty() ? to_string(r.verdict) : r.label, r.value,
              to_string(r.component));
    return w.str();
}

CertificateRow certify_membership(const std::vector<double>& values, const std::vector<double>& log_lambda,
                                  double alpha, Component c, double t, const std::vector<std::size_t>& levels,
                                  const MembershipThresholds& th) {
    const auto sums = weighted_partial_sums_log(values, alpha, log_lambda, levels);
    const auto v = membership_diagnosis(sums, th);
    CertificateRow row;
    row.target_time = t;
    row.alpha = alpha;
    row.component = c;
    row.verdict = v.tag;
    row.value = sums.back();
    return row;
}

// ---- weights ----

double DivergentWeights::sum_sq() const {
    KahanSum s;
    for (auto it = amplitudes.rbegin(); it != amplitudes.rend(); ++it) s.add(*it * *it);
    return s.value();
}

DivergentWeights divergent_weights(double eta, std::size_t K) {
    if (!(eta > 0.0)) throw std::invalid_argument("divergent_weights: eta must be positive");
    if (K == 0) throw std::invalid_argument("divergent_weights: K must be positive");
    KahanSum c2;
    for (std::size_t k = K; k-- > 0;) c2.add(1.0 / (static_cast<double>(k + 1) * static_cast<double>(k + 1)));
    const double c = std::sqrt(c2.value());
    DivergentWeights w;
    w.eta = eta;
    for (std::size_t k = 0; k < K; ++k) {
        w.indices.push_back(k);
        w.amplitudes.push_back(eta / c / static_cast<double>(k + 1));
    }
    return w;
}

std::size_t eventual_increase_index(double ratio, double eps) {
    if (!(ratio > 1.0) || !(eps > 0.0)) throw std::invalid_argument("eventual_increase_index: need ratio > 1, eps > 0");
    // ratio^{2 eps} ((k+1)/(k+2))^2 > 1  <=>  k + 1 > 1 / (ratio^eps - 1)
    const double g = std::pow(ratio, eps) - 1.0;
    auto k = static_cast<std::size_t>(std::floor(std::max(0.0, 1.0 / g - 1.0)));
    auto ok = [&](std::size_t j) {
        const double q = static_cast<double>(j + 1) / static_cast<double>(j + 2);
        return std::pow(ratio, 2.0 * eps) * q * q > 1.0;
    };
    while (k > 0 && ok(k - 1)) --k;
    while (!ok(k)) ++k;
    return k;
}

// ---- statement 3 ----

ConstantConstruction statement3_constant_force(const DampingParams& p, const DivergentWeights& w,
                                               const std::vector<double>& eps_set) {
    p.validate();
    if (p.sigma < 1.0) throw std::domain_error("statement3_constant_force: needs sigma >= 1");
    std::size_t K = 0;
    for (std::size_t k : w.indices) K = std::max(K, k + 1);
    std::vector<double> c(K, 0.0);
    for (std::size_t j = 0; j < w.indices.size(); ++j) c[w.indices[j]] = w.amplitudes[j];
    ConstantConstruction out;
    out.forcing = ForcingSpec::constant(c);
    out.expected.push_back({p.sigma, Component::U, Membership::Converged});
    for (double e : eps_set) out.expected.push_back({p.sigma + e, Component::U, Membership::Diverging});
    return out;
}

std::vector<CertificateRow> certify_constant_force(const SpectrumModel& m, const DampingParams& p,
                                                   const ForcingSpec& f, const std::vector<double>& times,
                                                   const std::vector<double>& alphas,
                                                   const std::vector<std::size_t>& levels) {
    if (f.size() != m.size()) throw std::invalid_argument("certify_constant_force: forcing / spectrum size mismatch");
    const auto logs = all_logs(m);
    std::vector<CharRoots> rts;
    for (std::size_t k = 0; k < m.size(); ++k) rts.push_back(roots(p, m[k]));
    std::vector<CertificateRow> rows;
    for (double t : times) {
        std::vector<double> u(m.size());
        for (std::size_t k = 0; k < m.size(); ++k) u[k] = f.value(k, 0.0) * unit_step_response(rts[k], t).u;
        for (double a : alphas) rows.push_back(certify_membership(u, logs, a, Component::U, t, levels));
    }
    return rows;
}

// ---- statement 1 ----

ForcingSpec statement1_resonant_force(const SpectrumModel& m, const DampingParams& p, double T, double eta,
                                      const std::vector<std::size_t>& part) {
    p.validate();
    if (p.sigma != 0.0) throw std::domain_error("statement1_resonant_force: resonance construction needs sigma = 0");
    if (!(T > 0.0)) throw std::invalid_argument("statement1_resonant_force: T must be positive");
    if (part.empty()) throw ConstructionError("statement1_resonant_force: empty part");
    const auto w = divergent_weights(eta, part.size());
    ForcingSpec f = ForcingSpec::zero(m.size());
    f.kind = ForcingKind::WindowedSinusoid;
    for (std::size_t j = 0; j < part.size(); ++j) {
        const std::size_t k = part[j];
        const CharRoots r = roots(p, m[k]);
        if (r.regime != Regime::OscillatoryPair)
            throw ConstructionError("statement1_resonant_force: mode " + std::to_string(k) + " (lambda " +
                                    format_double(m[k]) + ") is not oscillatory");
        // cos(b (T - s) - pi/4) = cos(b s + pi/4 - b T)
        f.modes[k] = ModeForcing::windowed_sinusoid(w.amplitudes[j], r.b, std::numbers::pi / 4.0 - r.b * T, 0.0,
                                                    kForever);
    }
    return f;
}

// ---- blow-up families ----

std::string to_string(BlowupKind k) {
    switch (k) {
        case BlowupKind::Supercritical: return "supercritical";
        case BlowupKind::SupercriticalHalf: return "supercritical_half";
        case BlowupKind::Critical: return "critical";
        case BlowupKind::Subcritical: return "subcritical";
        case BlowupKind::SubcriticalHalf: return "subcritical_half";
        case BlowupKind::DerivativeOnly: return "derivative_only";
    }
    return "unknown";
}

namespace {

bool constant_family(BlowupKind k) {
    return k != BlowupKind::Subcritical && k != BlowupKind::SubcriticalHalf;
}

Regime family_regime(BlowupKind k) {
    switch (k) {
        case BlowupKind::Critical: return Regime::DoubleRoot;
        case BlowupKind::Subcritical:
        case BlowupKind::SubcriticalHalf: return Regime::OscillatoryPair;
        default: return Regime::RealPair;
    }
}

CharRoots family_roots(const BlowupTriple& t, double lambda) {
    const CharRoots r = roots(t.params, lambda);
    if (r.regime != family_regime(t.kind))
        throw ConstructionError("blow-up family " + to_string(t.kind) + ": lambda " + format_double(lambda) +
                                " is in the " + to_string(r.regime) + " regime");
    return r;
}

// int_0^W e^{-x} cos(k x) dx and the sine counterpart.
std::complex<double> damped_trig_integral(double k, double W) {
    const std::complex<double> z(-1.0, k);
    return (std::exp(z * W) - 1.0) / z;
}

BlowupValues scaled(const BlowupTriple& t, double lambda, const ModeState& st) {
    BlowupValues v;
    v.scaled_u = t.has_position() ? std::pow(lambda, t.sigma0) * st.u : 0.0;
    v.scaled_up = std::pow(lambda, t.sigma1) * st.up;
    return v;
}

}  // namespace

double BlowupTriple::tau(double lambda) const {
    const CharRoots r = family_roots(*this, lambda);
    switch (kind) {
        case BlowupKind::Critical: return 1.0 / r.r;
        case BlowupKind::Subcritical:
        case BlowupKind::SubcriticalHalf: return W / r.a;
        case BlowupKind::DerivativeOnly: return 1.0 / r.x1;
        default: return 1.0 / r.x2;
    }
}

ModeForcing BlowupTriple::local_forcing(double lambda) const {
    const double t = tau(lambda);
    if (constant_family(kind)) return ModeForcing::windowed_sinusoid(1.0, 0.0, 0.0, 0.0, t);
    const CharRoots r = family_roots(*this, lambda);
    // sin(b (tau - s) + psi) = cos(b s - b tau - psi + pi/2)
    return ModeForcing::windowed_sinusoid(1.0, r.b, std::numbers::pi / 2.0 - r.b * t - psi, 0.0, t);
}

BlowupValues BlowupTriple::evaluate(double lambda) const {
    const CharRoots r = family_roots(*this, lambda);
    const double t = tau(lambda);
    const ModeState st = constant_family(kind) ? unit_step_response(r, t) : forced_mode(r, local_forcing(lambda), t);
    return scaled(*this, lambda, st);
}

BlowupTriple blowup_triple(const DampingParams& p) {
    p.validate();
    if (!(p.sigma > 0.0 && p.sigma < 1.0)) throw std::domain_error("blowup_triple: needs 0 < sigma < 1");
    BlowupTriple t;
    t.params = p;
    t.sigma0 = std::min(p.sigma + 0.5, 1.0);
    t.sigma1 = p.sigma;
    const double d = p.delta;
    if (p.sigma > 0.5) {
        t.kind = BlowupKind::Supercritical;
        t.c0 = 1.0 - kInvE;
        t.c1 = kInvE / (2.0 * d);
    } else if (p.sigma == 0.5 && d > 1.0) {
        t.kind = BlowupKind::SupercriticalHalf;
        const double s = std::sqrt(d * d - 1.0);
        t.D = (d + s) * (d + s);
        t.c0 = 1.0 + (std::exp(-t.D) - t.D * kInvE) / (t.D - 1.0);
        t.c1 = (kInvE - std::exp(-t.D)) / (2.0 * s);
    } else if (p.sigma == 0.5 && d == 1.0) {
        t.kind = BlowupKind::Critical;
        t.c0 = 1.0 - 2.0 * kInvE;
        t.c1 = kInvE;
    } else if (p.sigma == 0.5) {
        t.kind = BlowupKind::SubcriticalHalf;
        const double s = std::sqrt(1.0 - d * d);
        t.D = s / d;
        t.psi = std::numbers::pi / 2.0;
        t.W = std::min(1.0, std::numbers::pi / (4.0 * t.D));
        const std::complex<double> I2 = damped_trig_integral(2.0 * t.D, t.W);
        const double sc = 0.5 * I2.imag();                         // int e^{-x} sin cos
        const double cc = 0.5 * (-std::expm1(-t.W) + I2.real());   // int e^{-x} cos^2
        t.c0 = sc / (d * s);
        t.c1 = cc / d - sc / s;
        if (!(t.c0 > 0.0 && t.c1 > 0.0)) throw ConstructionError("blowup_triple: window W gives nonpositive limits");
    } else {
        t.kind = BlowupKind::Subcritical;
        t.W = 1.0;
        t.psi = std::numbers::pi / 4.0;
        const double base = -std::expm1(-t.W) / (2.0 * d);
        t.c0 = base * std::cos(t.psi);
        t.c1 = base * std::sin(t.psi);
    }
    return t;
}

BlowupTriple derivative_blowup_pair(const DampingParams& p) {
    p.validate();
    if (p.sigma < 1.0) throw std::domain_error("derivative_blowup_pair: needs sigma >= 1");
    BlowupTriple t;
    t.params = p;
    t.kind = BlowupKind::DerivativeOnly;
    t.sigma0 = std::numeric_limits<double>::quiet_NaN();
    t.sigma1 = p.sigma;
    t.c1 = (1.0 - kInvE) / (2.0 * p.delta);
    return t;
}

WindowForce window_shift_force(const BlowupTriple& triple, double A_lower, double T, double lambda) {
    if (!(A_lower >= 0.0) || !(T > 0.0)) throw std::invalid_argument("window_shift_force: need A >= 0, T > 0");
    if (!(T - A_lower > 1e-12 * T)) throw ConstructionError("window_shift_force: no room left below T");
    const BlowupValues lim = triple.evaluate(lambda);
    const bool pos = triple.has_position();
    if ((pos && std::abs(lim.scaled_u) < 0.75 * triple.c0) || std::abs(lim.scaled_up) < 0.75 * triple.c1)
        throw ConstructionError("window_shift_force: lambda " + format_double(lambda) +
                                " is below the regime threshold (limits not within 25%)");
    const double tau = triple.tau(lambda);
    if (tau > T - A_lower)
        throw ConstructionError("window_shift_force: tau " + format_double(tau) + " exceeds T - A");
    const CharRoots r = family_roots(triple, lambda);
    const ModeForcing base = triple.local_forcing(lambda);
    const Segment& s = base.segments.front();

    WindowForce out;
    out.tau = tau;
    double eps = tau / 8.0;
    for (int h = 0; h <= 12; ++h, eps *= 0.5) {
        if (!(eps > 1e-12 * T)) break;  // window edges no longer resolvable in double
        const ModeForcing g = ModeForcing::windowed_sinusoid(1.0, s.omega, s.phi, eps, tau - eps, eps);
        const BlowupValues v = scaled(triple, lambda, forced_mode(r, g, tau));
        out.achieved = v;
        out.halvings = h;
        if ((!pos || std::abs(v.scaled_u) >= 0.5 * triple.c0) && std::abs(v.scaled_up) >= 0.5 * triple.c1) {
            out.forcing = shifted(g, T - tau);
            out.eps = eps;
            out.B = T - eps;
            return out;
        }
    }
    throw ConstructionError("window_shift_force: no cutoff within 12 halvings; achieved fractions " +
                            format_double(pos ? out.achieved.scaled_u / triple.c0 : 0.0) + " and " +
                            format_double(out.achieved.scaled_up / triple.c1));
}

WindowedConstruction statement2_force(const SpectrumModel& m, const BlowupTriple& triple, double T, double eta,
                                      const std::vector<std::size_t>& part, std::size_t max_windows) {
    if (!(eta > 0.0) || !(T > 0.0)) throw std::invalid_argument("statement2_force: need eta > 0, T > 0");
    WindowedConstruction out;
    out.forcing = ForcingSpec::zero(m.size());
    out.forcing.kind = triple.kind == BlowupKind::Subcritical || triple.kind == BlowupKind::SubcriticalHalf
                           ? ForcingKind::WindowedSinusoid
                           : ForcingKind::PiecewiseModeSwitch;
    out.u_T.assign(m.size(), 0.0);
    out.up_T.assign(m.size(), 0.0);
    double A = 0.0;
    out.min_fraction_u = out.min_fraction_up = std::numeric_limits<double>::infinity();
    for (std::size_t k : part) {
        if (out.modes.size() >= max_windows) break;
        try {
            const WindowForce w = window_shift_force(triple, A, T, m[k]);
            const double omega = 1.0 / std::log(static_cast<double>(out.modes.size()) + 3.0);
            const double amp = eta * omega;
            out.forcing.modes[k] = w.forcing.scaled(amp);
            out.modes.push_back(k);
            out.weights.push_back(omega);
            out.B.push_back(w.B);
            if (triple.has_position()) out.u_T[k] = amp * w.achieved.scaled_u / std::pow(m[k], triple.sigma0);
            out.up_T[k] = amp * w.achieved.scaled_up / std::pow(m[k], triple.sigma1);
            if (triple.has_position())
                out.min_fraction_u = std::min(out.min_fraction_u, std::abs(w.achieved.scaled_u) / triple.c0);
            out.min_fraction_up = std::min(out.min_fraction_up, std::abs(w.achieved.scaled_up) / triple.c1);
            A = w.B;
        } catch (const ConstructionError& e) {
            out.log.push_back("mode " + std::to_string(k) + " skipped: " + e.what());
        }
    }
    if (out.modes.empty()) throw ConstructionError("statement2_force: no mode of the part admits a window");
    return out;
}

// ---- assembly ----

ForcingSpec assemble_disjoint(const std::vector<ForcingSpec>& sub, const std::vector<std::vector<std::size_t>>& parts,
                              std::size_t min_modes) {
    if (sub.size() != parts.size()) throw std::invalid_argument("assemble_disjoint: one part per sub-forcing");
    if (sub.empty()) throw std::invalid_argument("assemble_disjoint: nothing to assemble");
    const std::size_t K = sub.front().size();
    std::vector<int> owner(K, -1);
    for (std::size_t n = 0; n < parts.size(); ++n) {
        if (parts[n].size() < min_modes)
            throw ConstructionError("assemble_disjoint: part " + std::to_string(n) + " has " +
                                    std::to_string(parts[n].size()) + " modes, need " + std::to_string(min_modes));
        if (sub[n].size() != K) throw std::invalid_argument("assemble_disjoint: sub-forcings differ in size");
        for (std::size_t k : parts[n]) {
            if (k >= K) throw std::out_of_range("assemble_disjoint: part index out of range");
            if (owner[k] >= 0) throw std::invalid_argument("assemble_disjoint: parts overlap at mode " + std::to_string(k));
            owner[k] = static_cast<int>(n);
        }
    }
    ForcingSpec out = ForcingSpec::zero(K);
    out.kind = sub.front().kind;
    for (std::size_t n = 0; n < sub.size(); ++n) {
        if (sub[n].kind != out.kind) out.kind = ForcingKind::Mixed;
        for (std::size_t k = 0; k < K; ++k) {
            if (sub[n].modes[k].empty()) continue;
            if (owner[k] != static_cast<int>(n))
                throw std::invalid_argument("assemble_disjoint: sub-forcing " + std::to_string(n) +
                                            " drives mode " + std::to_string(k) + " outside its part");
            out.modes[k] = sub[n].modes[k].scaled(sub[n].scale);
        }
    }
    return out;
}

namespace {

Assembly assembly_frame(const SpectrumModel& m, const std::vector<double>& targets) {
    if (targets.empty()) throw std::invalid_argument("assembly: no target times");
    Assembly a;
    a.targets = targets;
    a.parts = partition_interleave(m, static_cast<int>(targets.size()));
    double s2 = 0.0;
    for (std::size_t n = 0; n < targets.size(); ++n) {
        if (!(targets[n] > 0.0)) throw std::invalid_argument("assembly: target times must be positive");
        a.budgets.push_back(std::ldexp(1.0, -static_cast<int>(n + 1)));
        s2 += a.budgets.back() * a.budgets.back();
    }
    a.sup_bound = std::sqrt(s2);
    return a;
}

double assembled_sampled_sup(const Assembly& a) {
    const double t_max = *std::max_element(a.targets.begin(), a.targets.end());
    return a.forcing.sampled_sup(0.0, t_max, 10001);
}

}  // namespace

Assembly statement1_assembly(const SpectrumModel& m, const DampingParams& p, const std::vector<double>& targets,
                             const std::vector<double>& eps_set) {
    Assembly a = assembly_frame(m, targets);
    std::vector<ForcingSpec> sub;
    for (std::size_t n = 0; n < targets.size(); ++n)
        sub.push_back(statement1_resonant_force(m, p, targets[n], a.budgets[n], a.parts[n]));
    a.forcing = assemble_disjoint(sub, a.parts);
    for (std::size_t n = 0; n < targets.size(); ++n) {
        const auto& part = a.parts[n];
        const auto logs = logs_of(m, part);
        const auto levels = part_levels(part.size());
        std::vector<double> u, up;
        for (std::size_t k : part) {
            const ModeState st = forced_mode(roots(p, m[k]), a.forcing.modes[k], targets[n]);
            u.push_back(st.u);
            up.push_back(st.up);
        }
        a.certificates.push_back(certify_membership(u, logs, 0.5, Component::U, targets[n], levels));
        for (double e : eps_set)
            a.certificates.push_back(certify_membership(u, logs, 0.5 + e, Component::U, targets[n], levels));
        a.certificates.push_back(certify_membership(up, logs, 0.0, Component::UPrime, targets[n], levels));
        for (double e : eps_set)
            a.certificates.push_back(certify_membership(up, logs, e, Component::UPrime, targets[n], levels));
    }
    a.sampled_sup = assembled_sampled_sup(a);
    return a;
}

Assembly statement2_assembly(const SpectrumModel& m, const DampingParams& p, const std::vector<double>& targets) {
    Assembly a = assembly_frame(m, targets);
    const BlowupTriple triple = blowup_triple(p);
    std::vector<ForcingSpec> sub;
    std::vector<WindowedConstruction> built;
    for (std::size_t n = 0; n < targets.size(); ++n) {
        built.push_back(statement2_force(m, triple, targets[n], a.budgets[n], a.parts[n]));
        sub.push_back(built.back().forcing);
    }
    a.forcing = assemble_disjoint(sub, a.parts);
    for (std::size_t n = 0; n < targets.size(); ++n) {
        // the divergent series runs over the window modes k_n only
        const auto& chosen = built[n].modes;
        const auto logs = logs_of(m, chosen);
        const auto levels = part_levels(chosen.size());
        std::vector<double> u, up;
        for (std::size_t k : chosen) {
            u.push_back(built[n].u_T[k]);
            up.push_back(built[n].up_T[k]);
        }
        a.certificates.push_back(certify_membership(u, logs, triple.sigma0, Component::U, targets[n], levels));
        a.certificates.push_back(certify_membership(up, logs, triple.sigma1, Component::UPrime, targets[n], levels));
        for (Component c : {Component::U, Component::UPrime}) {
            CertificateRow r;
            r.target_time = targets[n];
            r.alpha = c == Component::U ? triple.sigma0 : triple.sigma1;
            r.component = c;
            r.value = c == Component::U ? built[n].min_fraction_u : built[n].min_fraction_up;
            r.label = r.value >= 0.5 ? "WindowBoundsHold" : "WindowBoundsFail";
            a.certificates.push_back(r);
        }
    }
    a.sampled_sup = assembled_sampled_sup(a);
    return a;
}

// ---- statement 4 ----

double schedule_constant() { return kInvE * (1.0 - kInvE); }

double schedule_integral(double alpha, double T_prev, double T_n) {
    return std::exp(-alpha * T_prev) * -std::expm1(-alpha * (T_n - T_prev));
}

Schedule unbounded_schedule(const std::vector<double>& alphas, std::size_t required) {
    for (double a : alphas)
        if (!(a > 0.0)) throw std::invalid_argument("unbounded_schedule: alphas must be positive");
    Schedule s;
    double T = 0.0;
    for (std::size_t j = 0; j < alphas.size(); ++j) {
        if (s.k.empty() || 1.0 / alphas[j] >= T) {
            s.k.push_back(j);
            T += 1.0 / alphas[j];
            s.T.push_back(T);
        }
    }
    if (s.k.size() < required)
        throw ConstructionError("unbounded_schedule: only " + std::to_string(s.k.size()) + " of " +
                                std::to_string(required) + " entries fit; alphas do not decay fast enough");
    return s;
}

LogSchedule unbounded_schedule_log(const std::vector<double>& log_alphas, std::size_t limit) {
    LogSchedule s;
    double logT = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < log_alphas.size(); ++j) {
        if (limit > 0 && s.k.size() >= limit) break;
        if (s.k.empty() || -log_alphas[j] >= logT) {
            s.k.push_back(j);
            logT = log_add_exp(logT, -log_alphas[j]);
            s.log_T.push_back(logT);
        }
    }
    return s;
}

std::optional<LogRealRoots> log_real_roots(const DampingParams& p, double log_lambda) {
    const double ld = std::log(p.delta);
    // lambda / (delta^2 lambda^{2 sigma}) < 1 selects distinct real roots
    const double lq = log_lambda - 2.0 * ld - 2.0 * p.sigma * log_lambda;
    if (!(lq < std::log1p(-1e-9))) return std::nullopt;
    const double q = std::exp(lq);
    LogRealRoots r;
    r.log_lambda = log_lambda;
    r.log_x1 = ld + p.sigma * log_lambda + std::log1p(std::sqrt(1.0 - q));
    r.log_x2 = log_lambda - r.log_x1;
    r.log_gap = r.log_x1 + std::log1p(-std::exp(r.log_x2 - r.log_x1));
    return r;
}

bool threshold_mode_admissible(const LogRealRoots& r) {
    return r.log_lambda - r.log_gap <= 0.0 && r.log_x1 >= 0.0 &&
           r.log_lambda - r.log_gap - r.log_x2 >= -std::numbers::ln2;
}

std::size_t threshold_mode_count(double M, double eta) {
    if (!(M >= 0.0) || !(eta > 0.0)) throw std::invalid_argument("threshold_mode_count: need M >= 0, eta > 0");
    const double c = eta * eta * schedule_constant() * schedule_constant() / 4.0;
    return static_cast<std::size_t>(std::ceil((2.0 * M + eta) * (2.0 * M + eta) / c));
}

ThresholdModeValue threshold_mode_value(const LogRealRoots& r, double log_T_prev, double ramp_fraction) {
    if (!(ramp_fraction >= 0.0 && ramp_fraction <= 0.5))
        throw std::invalid_argument("threshold_mode_value: ramp fraction must lie in [0, 1/2]");
    const double ninf = -std::numeric_limits<double>::infinity();
    const double z_slow = log_T_prev == ninf ? 0.0 : std::exp(log_T_prev + r.log_x2);
    const double z_fast = log_T_prev == ninf ? 0.0 : std::exp(log_T_prev + r.log_x1);
    const double L_fast = std::exp(r.log_x1 - r.log_x2);
    ThresholdModeValue v;
    v.slow = std::exp(r.log_x1 - r.log_gap) * trapezoid_exp_integral(z_slow, 1.0, ramp_fraction);
    v.fast = std::exp(r.log_x2 - r.log_gap) * trapezoid_exp_integral(z_fast, L_fast, ramp_fraction * L_fast);
    return v;
}

ThresholdCertificate statement4_force(const DampingParams& p, double M, double eta,
                                      const std::vector<double>& log_lambda, std::size_t first_index,
                                      double ramp_fraction) {
    p.validate();
    if (!(p.sigma > 1.0)) throw std::domain_error("statement4_force: needs sigma > 1");
    ThresholdCertificate c;
    c.M = M;
    c.eta = eta;
    c.N = threshold_mode_count(M, eta);
    const double ninf = -std::numeric_limits<double>::infinity();
    double logT = ninf;
    KahanSum au, aw, av;
    std::size_t j = first_index;
    for (; j < log_lambda.size() && c.modes.size() < c.N; ++j) {
        const auto r = log_real_roots(p, log_lambda[j]);
        if (!r || !threshold_mode_admissible(*r)) {
            ++c.skipped;
            continue;
        }
        if (!c.modes.empty() && -r->log_x2 < logT) continue;
        const ThresholdModeValue v = threshold_mode_value(*r, logT, ramp_fraction);
        au.add(eta * eta * v.value() * v.value());
        aw.add(eta * eta * v.slow * v.slow);
        av.add(eta * eta * v.fast * v.fast);
        c.modes.push_back(j);
        logT = log_add_exp(logT, -r->log_x2);
    }
    c.next_index = j;
    if (c.modes.size() < c.N) {
        const double n = static_cast<double>(c.modes.size());
        const double m_max = std::max(0.0, (eta * std::sqrt(schedule_constant() * schedule_constant() / 4.0 * n) - eta) / 2.0);
        throw CapacityError("statement4_force: spectrum exhausted after " + std::to_string(c.modes.size()) + " of " +
                                std::to_string(c.N) + " modes; largest reachable M is " + format_double(m_max),
                            m_max);
    }
    c.log_T = logT;
    c.Au_sq = au.value();
    c.Aw_norm = std::sqrt(aw.value());
    c.Av_norm = std::sqrt(av.value());
    c.holds = c.Au_sq >= M;
    return c;
}

UnboundedSequence statement4_sequence(const DampingParams& p, const std::vector<double>& log_lambda, int n_max,
                                      double ramp_fraction) {
    if (n_max < 1) throw std::invalid_argument("statement4_sequence: n_max must be >= 1");
    UnboundedSequence s;
    std::size_t next = 0;
    std::vector<double> xs, ys;
    for (int n = 1; n <= n_max; ++n) {
        const double eta = std::ldexp(1.0, -n);
        s.parts.push_back(statement4_force(p, n, eta, log_lambda, next, ramp_fraction));
        next = s.parts.back().next_index;
        s.log_t.push_back(s.parts.back().log_T);
        s.sup_bound += eta;
        xs.push_back(n);
        ys.push_back(s.parts.back().Au_sq);
    }
    s.increasing = std::is_sorted(s.log_t.begin(), s.log_t.end()) &&
                   std::adjacent_find(s.log_t.begin(), s.log_t.end()) == s.log_t.end();
    s.slope = xs.size() >= 2 ? fit_line(xs, ys).slope : 0.0;
    return s;
}

ThresholdProfile statement4_profile(const SpectrumModel& m, const DampingParams& p, double t_min, double t_max,
                                    double ramp_fraction) {
    p.validate();
    if (!(p.sigma > 1.0)) throw std::domain_error("statement4_profile: needs sigma > 1");
    ThresholdProfile prof;
    std::vector<double> alphas;
    for (std::size_t k = 0; k < m.size(); ++k) {
        const auto r = log_real_roots(p, std::log(m[k]));
        if (!r || !threshold_mode_admissible(*r)) continue;
        prof.admissible.push_back(k);
        alphas.push_back(std::exp(r->log_x2));
    }
    prof.schedule = unbounded_schedule(alphas, 1);
    for (std::size_t N = 1; N <= prof.schedule.k.size(); ++N) {
        const double T = prof.schedule.T[N - 1];
        if (T < t_min || T > t_max) continue;
        const ForcingSpec f = statement4_profile_forcing(m, prof, N, ramp_fraction);
        KahanSum s;
        for (std::size_t n = 0; n < N; ++n) {
            const std::size_t k = prof.admissible[prof.schedule.k[n]];
            const double Au = m[k] * forced_mode(roots(p, m[k]), f.modes[k], T).u;
            s.add(Au * Au);
        }
        prof.times.push_back(T);
        prof.Au_sq.push_back(s.value());
    }
    return prof;
}

ForcingSpec statement4_profile_forcing(const SpectrumModel& m, const ThresholdProfile& prof, std::size_t N,
                                       double ramp_fraction) {
    if (N == 0 || N > prof.schedule.k.size()) throw std::out_of_range("statement4_profile_forcing: bad N");
    ForcingSpec f = ForcingSpec::zero(m.size());
    f.kind = ForcingKind::PiecewiseModeSwitch;
    const double T = prof.schedule.T[N - 1];
    for (std::size_t n = 0; n < N; ++n) {
        const double lo = n == 0 ? 0.0 : prof.schedule.T[n - 1];
        const double hi = prof.schedule.T[n];
        const std::size_t k = prof.admissible[prof.schedule.k[n]];
        f.modes[k] = ModeForcing::windowed_sinusoid(1.0, 0.0, 0.0, T - hi, T - lo, ramp_fraction * (hi - lo));
    }
    return f;
}

}  // namespace dampwave
