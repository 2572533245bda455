#include "dampwave/acceptance.hpp"

#include "dampwave/charpoly.hpp"
#include "dampwave/counterexamples.hpp"
#include "dampwave/csv.hpp"
#include "dampwave/duhamel.hpp"
#include "dampwave/oracle.hpp"
#include "dampwave/probe.hpp"
#include "dampwave/propagator.hpp"
#include "dampwave/spectrum.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

namespace dampwave {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Recorder {
    CriterionResult& out;
    void le(const std::string& name, double value, double limit) {
        out.checks.push_back({name, value, limit, value <= limit});
    }
    void ge(const std::string& name, double value, double limit) {
        out.checks.push_back({name, value, limit, value >= limit});
    }
    void flag(const std::string& name, bool ok) { out.checks.push_back({name, ok ? 1.0 : 0.0, 1.0, ok}); }
};

std::string num(double x) {
    std::ostringstream os;
    os << x;
    return os.str();
}

std::string tag(const DampingParams& p) { return "sigma=" + num(p.sigma) + " delta=" + num(p.delta); }

// ---- AC1 ----

long double real_residual(long double beta, long double lambda, long double x) {
    // p(-x) = x^2 - 2 beta x + lambda
    return std::fabs(x * x - 2.0L * beta * x + lambda);
}

void ac1(CriterionResult& res, const AcceptanceOptions&) {
    Recorder rec{res};
    const auto t0 = Clock::now();
    std::size_t total = 0, literal_ok = 0, unattainable = 0, literal_missed = 0;
    double max_ulps = 0.0, max_sum = 0.0, max_prod = 0.0, max_res = 0.0;
    for (double sigma : {0.0, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0}) {
        for (double delta : {0.5, 1.0, 2.0}) {
            for (int j = 0; j <= 8; ++j) {
                const double lambda = std::pow(10.0, j);
                const DampingParams p{sigma, delta};
                const CharRoots r = roots(p, lambda);
                const long double L = lambda;
                const long double beta = static_cast<long double>(delta) * std::pow(L, static_cast<long double>(sigma));
                const long double sl = std::sqrt(L);
                const long double scale = std::max(1.0L, L);
                const long double tol = 1e-9L * scale;

                auto check_real = [&](double x, long double exact) {
                    ++total;
                    const long double rr = real_residual(beta, L, x);
                    if (rr <= tol) {
                        ++literal_ok;
                        max_res = std::max(max_res, static_cast<double>(rr / scale));
                        return;
                    }
                    const double nearest = static_cast<double>(exact);
                    bool reachable = false;
                    for (double d : {std::nextafter(nearest, -INFINITY), nearest, std::nextafter(nearest, INFINITY)})
                        reachable = reachable || real_residual(beta, L, d) <= tol;
                    if (reachable) {
                        ++literal_missed;
                        return;
                    }
                    ++unattainable;
                    const double ulp = std::nextafter(x, INFINITY) - x;
                    max_ulps = std::max(max_ulps, static_cast<double>(std::fabs(x - exact) / ulp));
                };

                switch (r.regime) {
                    case Regime::RealPair: {
                        const long double X1 = beta + std::sqrt((beta - sl) * (beta + sl));
                        check_real(r.x1, X1);
                        check_real(r.x2, L / X1);
                        max_sum = std::max(max_sum, static_cast<double>(std::fabs((r.x1 + static_cast<long double>(r.x2)) - 2 * beta) / (2 * beta)));
                        max_prod = std::max(max_prod, static_cast<double>(std::fabs(static_cast<long double>(r.x1) * r.x2 - L) / L));
                        break;
                    }
                    case Regime::DoubleRoot:
                        check_real(r.r, sl);
                        max_sum = std::max(max_sum, static_cast<double>(std::fabs(2.0L * r.r - 2 * beta) / (2 * beta)));
                        max_prod = std::max(max_prod, static_cast<double>(std::fabs(static_cast<long double>(r.r) * r.r - L) / L));
                        break;
                    case Regime::OscillatoryPair: {
                        ++total;
                        const long double a = r.a, b = r.b;
                        const long double re = a * a - b * b - 2 * beta * a + L;
                        const long double im = 2 * b * (beta - a);
                        const long double rr = std::sqrt(re * re + im * im);
                        if (rr <= tol) {
                            ++literal_ok;
                            max_res = std::max(max_res, static_cast<double>(rr / scale));
                        } else {
                            ++literal_missed;
                        }
                        max_sum = std::max(max_sum, static_cast<double>(std::fabs(2 * a - 2 * beta) / (2 * beta)));
                        max_prod = std::max(max_prod, static_cast<double>(std::fabs(a * a + b * b - L) / L));
                        break;
                    }
                }
            }
        }
    }
    rec.le("roots missing a residual some double meets", static_cast<double>(literal_missed), 0.0);
    rec.le("max residual over max(1 lambda)", max_res, 1e-9);
    rec.ge("roots meeting the residual bound", static_cast<double>(literal_ok), static_cast<double>(total - unattainable));
    rec.le("max ulp distance where no double meets the residual", max_ulps, 2.0);
    rec.le("max relative error of the root sum", max_sum, 1e-12);
    rec.le("max relative error of the root product", max_prod, 1e-12);
    rec.le("runtime seconds", seconds_since(t0), 1.0);
}

// ---- AC2 ----

void ac2(CriterionResult& res, const AcceptanceOptions&) {
    Recorder rec{res};
    const double lambda = 1e10;
    for (double sigma : {0.75, 1.0, 2.0}) {
        for (double delta : {0.5, 1.0, 2.0}) {
            const DampingParams p{sigma, delta};
            const auto a = asymptotic_ratios(p, lambda, RatioFamily::Supercritical);
            rec.le(tag(p) + " |x1/lambda^sigma - 2 delta| / (2 delta)",
                   std::abs(a.x1_over_lambda_sigma - 2 * delta) / (2 * delta), 1e-3);
        }
    }
    for (double delta : {0.5, 1.0, 2.0}) {
        const DampingParams p{0.25, delta};
        const auto a = asymptotic_ratios(p, lambda, RatioFamily::Subcritical);
        rec.le(tag(p) + " |b/sqrt(lambda) - 1|", std::abs(a.b_over_sqrt_lambda - 1.0), 1e-4);
    }
}

// ---- AC3 ----

void ac3(CriterionResult& res, const AcceptanceOptions& opt) {
    Recorder rec{res};
    const auto t0 = Clock::now();
    std::vector<double> grid;
    for (int i = 0; i <= 200; ++i) grid.push_back(0.05 * i);
    struct Combo {
        DampingParams p;
        double lambda;
    };
    std::vector<Combo> combos;
    for (double sigma : {0.0, 0.25, 0.5, 1.0, 2.0})
        for (double delta : {0.5, 1.0, 2.0})
            for (double lambda : {1.0, 10.0, 100.0}) combos.push_back({{sigma, delta}, lambda});
    const std::vector<ModeIC> ics{{1.0, 0.0}, {0.0, 1.0}};
    std::vector<double> err(combos.size() * ics.size(), 0.0);
    std::vector<int> refused(err.size(), 0);
    for (std::size_t i = 0; i < err.size(); ++i) {
        const Combo& c = combos[i / ics.size()];
        const ModeIC& ic = ics[i % ics.size()];
        const CharRoots r = roots(c.p, c.lambda);
        try {
            const ModeTrajectory o = integrate_mode(c.p, c.lambda, ModeForcing::zero(), ic, grid);
            double e = 0.0;
            for (std::size_t j = 0; j < grid.size(); ++j) {
                const ModeState s = homogeneous_mode(r, ic, grid[j]);
                e = std::max({e, std::abs(s.u - o.u[j]), std::abs(s.up - o.up[j])});
            }
            err[i] = e;
        } catch (const OracleFailure&) {
            refused[i] = 1;
        }
    }
    (void)opt;
    double worst = 0.0;
    for (double e : err) worst = std::max(worst, e);
    rec.ge("cases compared", static_cast<double>(err.size()), 90.0);
    rec.le("oracle refusals", static_cast<double>(std::count(refused.begin(), refused.end(), 1)), 0.0);
    rec.le("max abs error on [0 10]", worst, 1e-8);
    rec.le("runtime seconds", seconds_since(t0), 30.0);
}

// ---- AC4 ----

std::vector<GapRow> scan_gap(const SpectrumModel& m, const DampingParams& p, double gap, int threads) {
    GapScanConfig cfg;
    cfg.alpha0 = gap >= 0.0 ? gap : 0.0;
    cfg.alpha1 = gap >= 0.0 ? 0.0 : -gap;
    cfg.t_grid = log_time_grid(1e-30, 1e3, 10);
    cfg.lambda_grid = m.eigenvalues();
    return gap_scan(m, p, cfg, threads);
}

void ac4(CriterionResult& res, const AcceptanceOptions& opt) {
    Recorder rec{res};
    const SpectrumModel m = geometric_spectrum(41, 2.0, 1.0);
    auto spread = [](const std::vector<GapRow>& rows) {
        double lo = INFINITY, hi = 0.0;
        for (const auto& g : rows) {
            lo = std::min(lo, g.amplification);
            hi = std::max(hi, g.amplification);
        }
        return hi / lo;
    };
    auto growth = [](const std::vector<GapRow>& rows) {
        double hi = 0.0;
        for (const auto& g : rows) hi = std::max(hi, g.amplification);
        return hi / rows.front().amplification;
    };
    const DampingParams s2{2.0, 1.0}, s025{0.25, 1.0};
    for (double gap : {-1.0, 0.5, 2.0})
        rec.le("sigma=2 gap=" + num(gap) + " max/min amplification", spread(scan_gap(m, s2, gap, opt.threads)), 5.0);
    rec.ge("sigma=2 gap=-1.5 max amplification / value at lambda=1", growth(scan_gap(m, s2, -1.5, opt.threads)), 10.0);
    rec.le("sigma=0.25 gap=0.5 max/min amplification", spread(scan_gap(m, s025, 0.5, opt.threads)), 5.0);
    for (double gap : {0.3, 0.7})
        rec.ge("sigma=0.25 gap=" + num(gap) + " max amplification / value at lambda=1",
               growth(scan_gap(m, s025, gap, opt.threads)), 10.0);
}

// ---- AC5 ----

SpectrumModel lower_half(const SpectrumModel& m) {
    std::vector<std::size_t> idx;
    for (std::size_t k = 0; k < (m.size() + 1) / 2; ++k) idx.push_back(k);
    return m.subset(idx);
}

void ac5(CriterionResult& res, const AcceptanceOptions&) {
    Recorder rec{res};
    const SpectrumModel m = geometric_spectrum(41, 2.0, 1.0);
    const SpectrumModel half = lower_half(m);
    const DampingParams p{2.0, 1.0};
    const auto times = log_time_grid(1e-30, 1e3, 10);
    double full = 0.0, low = 0.0;
    for (double t : times) {
        full = std::max(full, derivative_gap_probe(m, p, 2.0, 2, t));
        low = std::max(low, derivative_gap_probe(half, p, 2.0, 2, t));
    }
    rec.flag("derivative gap m=2 sup is finite", std::isfinite(full));
    rec.le("derivative gap m=2 sup all lambda / sup lower half", full / low, 1.5);
    for (int md : {1, 2}) {
        const double f = forward_regularity_probe(m, p, 1.0, 1.0, md, 0.5);
        const double h = forward_regularity_probe(half, p, 1.0, 1.0, md, 0.5);
        rec.flag("forward regularity m=" + std::to_string(md) + " sup is finite", std::isfinite(f));
        rec.le("forward regularity m=" + std::to_string(md) + " sup all lambda / sup lower half", f / h, 1.5);
    }
}

// ---- AC6 ----

void ac6(CriterionResult& res, const AcceptanceOptions& opt) {
    Recorder rec{res};
    const auto t0 = Clock::now();
    const SpectrumModel m = geometric_spectrum(48, 2.0, 1.5);
    BoundednessScanConfig cfg;
    cfg.times = log_time_grid(1.0, 1e4, 10, false);
    const DampingParams s2{2.0, 1.0}, s1{1.0, 1.0};

    const auto u2 = boundedness_scan(m, s2, {0.9, 1.5}, Component::U, cfg, opt.threads);
    rec.flag("sigma=2 u alpha=0.9 Bounded (" + to_string(u2[0].verdict) + ")", u2[0].verdict == BoundVerdict::Bounded);
    rec.flag("sigma=2 u alpha=1.5 PowerLaw (" + to_string(u2[1].fit.kind) + ")",
             u2[1].verdict == BoundVerdict::Growing && u2[1].fit.kind == GrowthKind::PowerLaw);
    rec.le("sigma=2 u alpha=1.5 |exponent - 0.5|", std::abs(u2[1].fit.exponent - 0.5), 0.05);

    const auto up2 = boundedness_scan(m, s2, {1.9}, Component::UPrime, cfg, opt.threads);
    rec.flag("sigma=2 u' alpha=1.9 Bounded (" + to_string(up2[0].verdict) + ")", up2[0].verdict == BoundVerdict::Bounded);

    const auto u1 = boundedness_scan(m, s1, {1.0}, Component::U, cfg, opt.threads);
    rec.flag("sigma=1 u alpha=1 Bounded (" + to_string(u1[0].verdict) + ")", u1[0].verdict == BoundVerdict::Bounded);

    const SpectrumModel fine = geometric_spectrum(48, std::pow(2.0, 0.25), 1.0);
    const ThresholdProfile prof = statement4_profile(fine, s2, 1.0, 1e4);
    const GrowthFit g = fit_growth(prof.times, prof.Au_sq);
    rec.flag("sigma=2 u alpha=1 threshold construction Logarithmic (" + to_string(g.kind) + ")",
             g.kind == GrowthKind::Logarithmic);
    rec.le("runtime seconds", seconds_since(t0), 120.0);
}

// ---- AC7 ----

void ac7(CriterionResult& res, const AcceptanceOptions&) {
    Recorder rec{res};
    const double lambda = 1e8;
    const double e1 = std::exp(-1.0);
    struct Case {
        DampingParams p;
        double c0, c1, tol;
    };
    const double osc = 0.5 * (1.0 - e1) * std::numbers::sqrt2 / 2.0;
    const std::vector<Case> cases{
        {{0.75, 1.0}, 1.0 - e1, e1 / 2.0, 0.02},
        {{0.5, 1.0}, 1.0 - 2.0 * e1, e1, 1e-10},
        {{0.25, 1.0}, osc, osc, 0.02},
    };
    for (const Case& c : cases) {
        const BlowupTriple t = blowup_triple(c.p);
        const BlowupValues v = t.evaluate(lambda);
        rec.le(tag(c.p) + " " + to_string(t.kind) + " scaled u relative error", std::abs(v.scaled_u - c.c0) / c.c0, c.tol);
        rec.le(tag(c.p) + " " + to_string(t.kind) + " scaled u' relative error", std::abs(v.scaled_up - c.c1) / c.c1,
               c.tol);
    }
}

// ---- AC8 ----

void ac8(CriterionResult& res, const AcceptanceOptions&) {
    Recorder rec{res};
    const double limit = std::numbers::sqrt2 / 4.0 * (1.0 - std::exp(-1.0));
    const double lambda = 1e10;
    const ModeState s = resonant_mode_response({0.0, 1.0}, lambda, 1.0);
    rec.le("|sqrt(lambda) u(T) - limit|", std::abs(std::sqrt(lambda) * s.u - limit), 1e-3);
    rec.le("|u'(T) - limit|", std::abs(s.up - limit), 1e-3);
}

// ---- AC9 ----

bool verdict_is(const std::vector<CertificateRow>& rows, double t, double alpha, Component c, Membership want) {
    for (const auto& r : rows)
        if (r.target_time == t && std::abs(r.alpha - alpha) < 1e-12 && r.component == c && r.label.empty())
            return r.verdict == want;
    return false;
}

void ac9(CriterionResult& res, const AcceptanceOptions&) {
    Recorder rec{res};
    {
        const DampingParams p{2.0, 1.0};
        const SpectrumModel m = geometric_spectrum(128, 2.0, 1.0);
        const auto c = statement3_constant_force(p, divergent_weights(1.0, 128), {0.1});
        const auto rows = certify_constant_force(m, p, c.forcing, {0.5, 1.0, 2.0}, {2.0, 2.1},
                                                 geometric_levels(1, 128, 8));
        for (double t : {0.5, 1.0, 2.0}) {
            rec.flag("constant force t=" + num(t) + " alpha=2 Converged",
                     verdict_is(rows, t, 2.0, Component::U, Membership::Converged));
            rec.flag("constant force t=" + num(t) + " alpha=2.1 Diverging",
                     verdict_is(rows, t, 2.1, Component::U, Membership::Diverging));
        }
    }
    {
        const DampingParams p{0.0, 1.0};
        const SpectrumModel m = geometric_spectrum(64, std::numbers::sqrt2, 4.0);
        const Assembly a = statement1_assembly(m, p, {0.5, 1.0});
        for (double t : {0.5, 1.0}) {
            rec.flag("resonant assembly t=" + num(t) + " u alpha=0.6 Diverging",
                     verdict_is(a.certificates, t, 0.6, Component::U, Membership::Diverging));
            rec.flag("resonant assembly t=" + num(t) + " u' alpha=0.1 Diverging",
                     verdict_is(a.certificates, t, 0.1, Component::UPrime, Membership::Diverging));
        }
        rec.le("resonant assembly sampled sup |f| / budget bound", a.sampled_sup / a.sup_bound, 1.0);
    }
    {
        const DampingParams p{2.0, 1.0};
        const auto spectrum = geometric_log_spectrum(1500000, 2.0, 1.0);
        const UnboundedSequence s = statement4_sequence(p, spectrum, 4);
        for (std::size_t n = 0; n < s.parts.size(); ++n)
            rec.ge("threshold construction n=" + std::to_string(n + 1) + " |Au(t_n)|^2", s.parts[n].Au_sq,
                   static_cast<double>(n + 1));
        rec.flag("ln t_n strictly increasing", s.increasing);
        rec.le("sup |f| bound (sum of 2^-n)", s.sup_bound, 1.0);
    }
}

// ---- AC10 ----

ForcingSpec random_bounded_forcing(std::size_t K, double T, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> amp(-1.0, 1.0), unit(0.0, 1.0);
    ForcingSpec f;
    f.kind = ForcingKind::WindowedSinusoid;
    const double per_mode = 1.0 / std::sqrt(static_cast<double>(K));
    for (std::size_t k = 0; k < K; ++k) {
        const double s0 = 0.5 * T * unit(rng);
        const double s1 = s0 + (T - s0) * (0.25 + 0.75 * unit(rng));
        const double omega = 20.0 * unit(rng);
        const double phi = 2.0 * std::numbers::pi * unit(rng);
        f.modes.push_back(ModeForcing::windowed_sinusoid(per_mode * amp(rng), omega, phi, s0, s1, 0.05 * (s1 - s0)));
    }
    return f;
}

void ac10(CriterionResult& res, const AcceptanceOptions& opt) {
    Recorder rec{res};
    const std::size_t K = 16;
    const double T = 2.0;
    const SpectrumModel m = geometric_spectrum(static_cast<int>(K), 2.0, 1.0);
    std::vector<double> grid;
    for (int i = 0; i <= 2048; ++i) grid.push_back(T * i / 2048.0);
    std::mt19937_64 rng(opt.seed);
    for (double sigma : {0.25, 1.0, 2.0}) {
        const DampingParams p{sigma, 1.0};
        double worst = INFINITY;
        int quad_bad = 0;
        for (int trial = 0; trial < 100; ++trial) {
            const ForcingSpec f = random_bounded_forcing(K, T, rng);
            const Trajectory traj = forced_solve(m, p, f, grid, opt.threads);
            const EnergyReport e = energy_check(traj, f, m, p);
            if (e.violated) worst = std::min(worst, e.min_margin / e.final_source);
            const EnergyLedger& l = e.ledger;
            for (std::size_t j = 0; j < l.times.size(); ++j)
                if (l.source[j] > 0.0)
                    worst = std::min(worst, (l.source[j] - l.energy[j] - l.dissipation[j]) / l.source[j]);
            quad_bad += e.quadrature_ok ? 0 : 1;
        }
        rec.ge("sigma=" + num(sigma) + " min energy margin / running source over 100 forcings", worst, -1e-9);
        rec.le("sigma=" + num(sigma) + " forcings with unresolved quadrature", quad_bad, 0.0);
    }

    const SpectrumModel full = geometric_spectrum(64, std::pow(2.0, 0.25), 1.0);
    std::vector<double> amps;
    for (std::size_t k = 0; k < full.size(); ++k) amps.push_back(1.0 / ((k + 1.0) * (k + 1.0)));
    const ForcingSpec f = ForcingSpec::constant(amps);
    for (double sigma : {0.25, 1.0, 2.0}) {
        const DampingParams p{sigma, 1.0};
        const L2Report r = l2_regularity_check(full, f, p, T, 2048, {16, 32, 64}, 0.01, sigma > 1.0 ? 1.0 : -1.0,
                                               opt.threads);
        rec.le("sigma=" + num(sigma) + " L2 of u' max relative change under K doubling", r.max_rel_change_uprime, 0.01);
        rec.le("sigma=" + num(sigma) + " L2 of u max relative change under K doubling", r.max_rel_change_u, 0.01);
    }
}

// ---- AC11 ----

void ac11(CriterionResult& res, const AcceptanceOptions&) {
    Recorder rec{res};
    const DampingParams p{2.0, 1.0};
    const double period = 1.0;
    const ModeForcing f = smoothed_square_wave(period, 1.0, 0.1);
    const SpectrumModel m = geometric_spectrum(41, 2.0, 1.0);
    double worst_periodic = 0.0, sup_all = 0.0, sup_low = 0.0;
    for (std::size_t k = 0; k < m.size(); ++k) {
        const CharRoots r = roots(p, m[k]);
        // The initial value problem started on the whole-line solution must return to it one period later.
        const ModeState s0 = line_bounded_mode(r, f, 0.0);
        const ModeIC ic{s0.u, s0.up};
        double sup = 0.0, drift = 0.0;
        for (int i = 0; i < 64; ++i) {
            const double t = period * i / 64.0;
            const ModeState a = line_bounded_mode(r, f, t);
            const ModeState b = solve_mode(r, ic, f, t + period);
            sup = std::max(sup, m[k] * std::abs(a.u));
            drift = std::max({drift, m[k] * std::abs(a.u - b.u), std::abs(a.up - b.up)});
        }
        worst_periodic = std::max(worst_periodic, drift / std::max(1.0, sup));
        sup_all = std::max(sup_all, sup);
        if (k < (m.size() + 1) / 2) sup_low = sup_all;
    }
    rec.le("max periodicity defect relative to max(1 sup lambda|u|)", worst_periodic, 1e-12);
    rec.flag("sup lambda|u| is finite", std::isfinite(sup_all));
    rec.le("sup lambda|u| all modes / lower half", sup_all / sup_low, 1.5);
    for (int k = 1; k <= 5; ++k) {
        const CharRoots r = roots(p, std::ldexp(1.0, k));
        const AttractionReport a = asymptotic_attraction_check(r, f, {1.0, 0.0}, 30.0 / r.slow_rate());
        rec.le("lambda=2^" + std::to_string(k) + " attraction rate relative error vs slow root", a.relative_error,
               0.05);
    }
}

struct Entry {
    const char* title;
    std::function<void(CriterionResult&, const AcceptanceOptions&)> fn;
};

const std::map<std::string, Entry>& registry() {
    static const std::map<std::string, Entry> r{
        {"AC1", {"root correctness", ac1}},
        {"AC2", {"root asymptotics", ac2}},
        {"AC3", {"oracle equivalence", ac3}},
        {"AC4", {"phase-space gap region", ac4}},
        {"AC5", {"derivative gap and forward regularity", ac5}},
        {"AC6", {"boundedness diagrams", ac6}},
        {"AC7", {"blow-up constants", ac7}},
        {"AC8", {"resonance limit", ac8}},
        {"AC9", {"counterexample certificates", ac9}},
        {"AC10", {"energy inequality and L2 statements", ac10}},
        {"AC11", {"periodic bounded solution", ac11}},
    };
    return r;
}

}  // namespace

std::vector<std::string> criterion_ids() {
    std::vector<std::string> ids;
    for (int i = 1; i <= 11; ++i) ids.push_back("AC" + std::to_string(i));
    return ids;
}

std::string criterion_title(const std::string& id) {
    const auto it = registry().find(id);
    if (it == registry().end()) throw std::invalid_argument("unknown criterion '" + id + "'");
    return it->second.title;
}

CriterionResult run_criterion(const std::string& id, const AcceptanceOptions& opt) {
    const auto it = registry().find(id);
    if (it == registry().end()) throw std::invalid_argument("unknown criterion '" + id + "'");
    CriterionResult res;
    res.id = id;
    res.title = it->second.title;
    const auto t0 = Clock::now();
    try {
        it->second.fn(res, opt);
        res.passed = !res.checks.empty() &&
                     std::all_of(res.checks.begin(), res.checks.end(), [](const Check& c) { return c.pass; });
    } catch (const std::exception& e) {
        res.error = e.what();
        res.passed = false;
    }
    res.seconds = seconds_since(t0);
    return res;
}

std::string checks_csv(const CriterionResult& r) {
    CsvWriter w({"check", "value", "limit", "pass"});
    for (const Check& c : r.checks) w.row(c.name, c.value, c.limit, c.pass ? "1" : "0");
    return w.str();
}

}  // namespace dampwave
