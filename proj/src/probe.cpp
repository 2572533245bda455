#include "dampwave/probe.hpp"

#include "dampwave/csv.hpp"
#include "dampwave/duhamel.hpp"
#include "dampwave/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace dampwave {

std::string to_string(Membership m) {
    switch (m) {
        case Membership::Converged: return "Converged";
        case Membership::Diverging: return "Diverging";
        case Membership::Inconclusive: return "Inconclusive";
    }
    return "?";
}

std::string to_string(GrowthKind g) {
    switch (g) {
        case GrowthKind::PowerLaw: return "PowerLaw";
        case GrowthKind::Logarithmic: return "Logarithmic";
        case GrowthKind::Bounded: return "Bounded";
        case GrowthKind::Inconclusive: return "Inconclusive";
    }
    return "?";
}

std::string to_string(Component c) { return c == Component::U ? "u" : "uprime"; }

std::string to_string(BoundVerdict v) {
    switch (v) {
        case BoundVerdict::Bounded: return "Bounded";
        case BoundVerdict::Growing: return "Growing";
        case BoundVerdict::UnboundedInLambda: return "UnboundedInLambda";
        case BoundVerdict::Inconclusive: return "Inconclusive";
    }
    return "?";
}

std::string to_string(Region r) {
    switch (r) {
        case Region::Inside: return "inside";
        case Region::Boundary: return "boundary";
        case Region::Outside: return "outside";
    }
    return "?";
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_line: need two or more points");
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    LineFit f;
    f.slope = sxx > 0 ? sxy / sxx : 0.0;
    f.intercept = my - f.slope * mx;
    f.r2 = (sxx > 0 && syy > 0) ? (sxy * sxy) / (sxx * syy) : (syy == 0 ? 1.0 : 0.0);
    return f;
}

MembershipVerdict membership_diagnosis(const std::vector<double>& partial_sums, const MembershipThresholds& th) {
    if (partial_sums.size() < th.min_levels)
        throw std::invalid_argument("membership_diagnosis: needs at least " + std::to_string(th.min_levels) +
                                    " truncation levels");
    MembershipVerdict v;
    if (std::all_of(partial_sums.begin(), partial_sums.end(), [](double s) { return s == 0.0; })) {
        v.tag = Membership::Converged;
        v.detail = "all partial sums zero";
        return v;
    }
    std::vector<double> inc;
    for (std::size_t j = 1; j < partial_sums.size(); ++j) inc.push_back(partial_sums[j] - partial_sums[j - 1]);

    std::vector<double> xs, ys;
    for (std::size_t j = 0; j < inc.size(); ++j)
        if (inc[j] > 0.0) {
            xs.push_back(static_cast<double>(j));
            ys.push_back(std::log(inc[j]));
        }
    if (xs.size() >= 2) v.rate = fit_line(xs, ys).slope;

    const std::size_t n = inc.size();
    bool geometric = true;
    double worst = 0.0;
    for (std::size_t j = n / 2; j + 1 < n; ++j) {
        if (inc[j + 1] == 0.0) continue;
        if (!(inc[j] > 0.0)) {
            geometric = false;
            break;
        }
        const double ratio = inc[j + 1] / inc[j];
        worst = std::max(worst, ratio);
        if (ratio > th.converge_ratio) geometric = false;
    }
    if (geometric) {
        v.tag = Membership::Converged;
        v.detail = "tail increment ratio <= " + format_double(worst);
        return v;
    }
    const std::size_t q = std::max<std::size_t>(2, (n + 3) / 4);
    bool rising = true;
    for (std::size_t j = n - q; j < n; ++j) {
        if (!(inc[j] > 0.0)) rising = false;
        if (j > n - q && inc[j] < inc[j - 1]) rising = false;
    }
    if (rising) {
        v.tag = Membership::Diverging;
        v.detail = "last-quarter increments positive and non-decreasing";
        return v;
    }
    v.tag = Membership::Inconclusive;
    v.detail = "tail ratio " + format_double(worst) + " above threshold without sustained increase";
    return v;
}

GrowthFit fit_growth(const std::vector<double>& times, const std::vector<double>& norms, const GrowthThresholds& th) {
    if (times.size() != norms.size() || times.size() < 4)
        throw std::invalid_argument("fit_growth: need matching series of at least 4 points");
    const auto [tmin, tmax] = std::minmax_element(times.begin(), times.end());
    if (!(*tmin > 0.0) || std::log10(*tmax / *tmin) < th.min_decades)
        throw std::invalid_argument("fit_growth: times must be positive and span at least 3 decades");
    for (double n : norms)
        if (!(n > 0.0) || !std::isfinite(n)) throw std::invalid_argument("fit_growth: norms must be positive");

    std::vector<double> lt, ln, l1t;
    for (std::size_t i = 0; i < times.size(); ++i) {
        lt.push_back(std::log(times[i]));
        ln.push_back(std::log(norms[i]));
        l1t.push_back(std::log1p(times[i]));
    }
    GrowthFit g;
    const LineFit pw = fit_line(lt, ln);
    const LineFit lg = fit_line(l1t, norms);
    g.exponent = pw.slope;
    g.r2_power = pw.r2;
    g.log_slope = lg.slope;
    g.r2_log = lg.r2;

    std::vector<double> sorted = norms;
    std::sort(sorted.begin(), sorted.end());
    const double median = sorted[sorted.size() / 2];
    const double spread = sorted.back() / median;

    if (pw.r2 >= th.min_r2 && pw.slope >= th.min_exponent)
        g.kind = GrowthKind::PowerLaw;
    else if (lg.r2 >= th.min_r2 && lg.slope > 0.0 && spread > th.bounded_ratio)
        g.kind = GrowthKind::Logarithmic;
    else if (spread <= th.bounded_ratio)
        g.kind = GrowthKind::Bounded;
    else
        g.kind = GrowthKind::Inconclusive;
    return g;
}

SimpsonResult simpson_cumulative(const std::vector<double>& y, double h) {
    if (y.size() < 3 || (y.size() - 1) % 2 != 0)
        throw std::invalid_argument("simpson_cumulative: need an even number of intervals");
    SimpsonResult r;
    r.cumulative.push_back(0.0);
    KahanSum acc;
    for (std::size_t i = 0; i + 2 < y.size(); i += 2) {
        acc.add(h / 3.0 * (y[i] + 4.0 * y[i + 1] + y[i + 2]));
        r.cumulative.push_back(acc.value());
    }
    const std::size_t n = y.size() - 1;
    if (n % 4 == 0) {
        KahanSum coarse;
        for (std::size_t i = 0; i + 4 < y.size(); i += 4) coarse.add(2.0 * h / 3.0 * (y[i] + 4.0 * y[i + 2] + y[i + 4]));
        r.error = std::abs(acc.value() - coarse.value()) / 15.0;
    } else {
        r.error = std::numeric_limits<double>::quiet_NaN();
    }
    return r;
}

namespace {

double uniform_step(const std::vector<double>& t) {
    if (t.size() < 5 || t.front() != 0.0) throw std::invalid_argument("energy/L2 checks: grid must start at 0");
    const double h = t[1] - t[0];
    for (std::size_t i = 1; i < t.size(); ++i)
        if (std::abs((t[i] - t[i - 1]) - h) > 1e-9 * h)
            throw std::invalid_argument("energy/L2 checks: grid must be uniform");
    if ((t.size() - 1) % 4 != 0) throw std::invalid_argument("energy/L2 checks: interval count must be a multiple of 4");
    return h;
}

}  // namespace

EnergyReport energy_check(const Trajectory& traj, const ForcingSpec& f, const SpectrumModel& m, const DampingParams& p,
                          double tol) {
    if (traj.modes != m.size() || f.size() != m.size())
        throw std::length_error("energy_check: trajectory, forcing and spectrum sizes differ");
    const double h = uniform_step(traj.times);
    const std::size_t N = traj.times.size();
    std::vector<double> e(N), d(N), s(N);
    for (std::size_t i = 0; i < N; ++i) {
        KahanSum ea, da;
        for (std::size_t k = 0; k < m.size(); ++k) {
            const double l = m[k];
            const double ls = std::pow(l, p.sigma);
            const double up = traj.up_at(i, k), u = traj.u_at(i, k);
            ea.add(ls * up * up + ls * l * u * u);
            da.add(ls * ls * up * up);
        }
        e[i] = ea.value();
        d[i] = da.value();
        const double fn = f.norm_at(traj.times[i]);
        s[i] = fn * fn;
    }
    const SimpsonResult D = simpson_cumulative(d, h);
    const SimpsonResult S = simpson_cumulative(s, h);
    EnergyReport rep;
    rep.min_margin = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < D.cumulative.size(); ++j) {
        const double diss = 3.0 * p.delta * D.cumulative[j];
        const double src = S.cumulative[j] / p.delta;
        rep.ledger.times.push_back(traj.times[2 * j]);
        rep.ledger.energy.push_back(e[2 * j]);
        rep.ledger.dissipation.push_back(diss);
        rep.ledger.source.push_back(src);
        rep.min_margin = std::min(rep.min_margin, src - e[2 * j] - diss);
    }
    rep.final_source = rep.ledger.source.back();
    rep.quadrature_error = 3.0 * p.delta * D.error + S.error / p.delta;
    rep.quadrature_ok = rep.final_source == 0.0 ? rep.quadrature_error == 0.0
                                                : rep.quadrature_error < 0.01 * rep.final_source;
    rep.violated = rep.min_margin < -tol * rep.final_source;
    return rep;
}

L2Integrals l2_integrals(const Trajectory& traj, const SpectrumModel& m, const DampingParams& p,
                         double alpha_u_override) {
    if (traj.modes != m.size()) throw std::length_error("l2_integrals: trajectory and spectrum sizes differ");
    L2Integrals out;
    if (alpha_u_override >= 0.0) {
        out.alpha_u = alpha_u_override;
    } else {
        if (p.sigma > 1.0)
            throw std::invalid_argument("l2_integrals: the L^2 statement for u is only available for sigma in [0, 1]");
        out.alpha_u = std::min(p.sigma + 0.5, 1.0);
    }
    const double h = uniform_step(traj.times);
    std::vector<double> a(traj.times.size()), b(traj.times.size());
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        a[i] = sobolev_norm_sq(traj.up_slice(i), p.sigma, m);
        b[i] = sobolev_norm_sq(traj.u_slice(i), out.alpha_u, m);
    }
    out.uprime = simpson_cumulative(a, h).cumulative.back();
    out.u = simpson_cumulative(b, h).cumulative.back();
    return out;
}

L2Report l2_regularity_check(const SpectrumModel& full, const ForcingSpec& f, const DampingParams& p, double T,
                             std::size_t intervals, const std::vector<std::size_t>& Ks, double rel_tol,
                             double alpha_u_override, int threads) {
    if (f.size() != full.size()) throw std::length_error("l2_regularity_check: forcing and spectrum sizes differ");
    if (Ks.size() < 2) throw std::invalid_argument("l2_regularity_check: need at least two truncations");
    std::vector<double> grid(intervals + 1);
    for (std::size_t i = 0; i <= intervals; ++i) grid[i] = T * static_cast<double>(i) / static_cast<double>(intervals);
    L2Report rep;
    for (std::size_t K : Ks) {
        if (K > full.size()) throw std::invalid_argument("l2_regularity_check: truncation exceeds spectrum size");
        std::vector<std::size_t> idx(K);
        for (std::size_t k = 0; k < K; ++k) idx[k] = k;
        const SpectrumModel m = full.subset(idx);
        ForcingSpec fk = f;
        fk.modes.resize(K);
        const Trajectory tr = forced_solve(m, p, fk, grid, threads);
        rep.rows.push_back({K, l2_integrals(tr, m, p, alpha_u_override)});
    }
    auto rel = [](double a, double b) { return a == b ? 0.0 : std::abs(b - a) / std::max(std::abs(a), std::abs(b)); };
    for (std::size_t i = 1; i < rep.rows.size(); ++i) {
        rep.max_rel_change_uprime =
            std::max(rep.max_rel_change_uprime, rel(rep.rows[i - 1].integrals.uprime, rep.rows[i].integrals.uprime));
        rep.max_rel_change_u = std::max(rep.max_rel_change_u, rel(rep.rows[i - 1].integrals.u, rep.rows[i].integrals.u));
    }
    rep.stable = rep.max_rel_change_uprime <= rel_tol && rep.max_rel_change_u <= rel_tol;
    return rep;
}

namespace {

// int_0^t e^{-a x} |sin(b x + theta)| dx for theta in [0, pi).
double abs_damped_sine(double a, double b, double theta, double t) {
    const double l = a * a + b * b;
    auto F = [&](double x) {
        return -std::exp(-a * x) * (a * std::sin(b * x + theta) + b * std::cos(b * x + theta)) / l;
    };
    const double t1 = (std::numbers::pi - theta) / b;  // first positive zero
    if (t <= t1) return std::abs(F(t) - F(0.0));
    double acc = std::abs(F(t1) - F(0.0));
    // Full half-periods [tau_n, tau_{n+1}], n >= 1, each e^{-a pi/b} times the previous.
    const double half = std::numbers::pi / b;
    const double full = std::floor((t - t1) / half);
    const double lq = -a * half;
    if (full > 0.0) {
        const double geo = std::expm1(full * lq) / std::expm1(lq);  // 1 + q + ... + q^{full-1}
        acc += (b / l) * std::exp(-a * t1) * (1.0 + std::exp(lq)) * geo;
    }
    const double tn = t1 + full * half;
    acc += std::abs(F(t) - F(tn));
    return acc;
}

}  // namespace

double worst_case_mode_response(const CharRoots& r, Component c, double t) {
    if (!(t >= 0.0)) throw std::domain_error("worst_case_mode_response: time must be nonnegative");
    if (t == 0.0) return 0.0;
    if (c == Component::U) {
        if (r.regime == Regime::OscillatoryPair) return abs_damped_sine(r.a, r.b, 0.0, t) / r.b;
        return unit_step_response(r, t).u;  // kernel is nonnegative
    }
    switch (r.regime) {
        case Regime::RealPair: {
            const double ts = std::log(r.x1 / r.x2) / (r.x1 - r.x2);
            const double Gt = unit_step_response(r, t).up;  // = G(t)
            if (t <= ts) return Gt;
            return 2.0 * unit_step_response(r, ts).up - Gt;
        }
        case Regime::DoubleRoot: {
            const double ts = 1.0 / r.r;
            const double Gt = t * std::exp(-r.r * t);
            if (t <= ts) return Gt;
            return 2.0 * ts * std::exp(-1.0) - Gt;
        }
        case Regime::OscillatoryPair: {
            const double phi = std::atan2(r.a, r.b);
            return std::sqrt(r.lambda) / r.b * abs_damped_sine(r.a, r.b, phi + 0.5 * std::numbers::pi, t);
        }
    }
    return 0.0;
}

BoundednessRow classify_sup_series(double alpha, Component c, const std::vector<double>& times,
                                   const std::vector<double>& sup_all, const std::vector<double>& sup_half,
                                   const BoundednessScanConfig& cfg) {
    BoundednessRow row;
    row.alpha = alpha;
    row.component = c;
    row.sup_norms = sup_all;
    for (std::size_t i = 1; i < row.sup_norms.size(); ++i)
        row.sup_norms[i] = std::max(row.sup_norms[i], row.sup_norms[i - 1]);
    row.half_spectrum_ratio = sup_half.back() > 0.0 ? sup_all.back() / sup_half.back() : 1.0;
    row.fit = fit_growth(times, row.sup_norms, cfg.growth);
    if (row.half_spectrum_ratio > cfg.lambda_growth_ratio)
        row.verdict = BoundVerdict::UnboundedInLambda;
    else if (row.fit.kind == GrowthKind::Bounded)
        row.verdict = BoundVerdict::Bounded;
    else if (row.fit.kind == GrowthKind::PowerLaw || row.fit.kind == GrowthKind::Logarithmic)
        row.verdict = BoundVerdict::Growing;
    else
        row.verdict = BoundVerdict::Inconclusive;
    return row;
}

std::vector<BoundednessRow> boundedness_scan(const SpectrumModel& m, const DampingParams& p,
                                             const std::vector<double>& alpha_grid, Component c,
                                             const BoundednessScanConfig& cfg, int threads) {
    const std::size_t K = m.size(), T = cfg.times.size();
    if (K < 2) throw std::invalid_argument("boundedness_scan: need at least two modes");
    // log of the worst-case response, [mode][time]
    std::vector<double> lw(K * T);
    parallel_for(K, threads, [&](std::size_t k) {
        const CharRoots r = roots(p, m[k]);
        for (std::size_t i = 0; i < T; ++i) {
            const double w = worst_case_mode_response(r, c, cfg.times[i]);
            lw[k * T + i] = w > 0.0 ? std::log(w) : -std::numeric_limits<double>::infinity();
        }
    });
    std::vector<BoundednessRow> out;
    for (double alpha : alpha_grid) {
        std::vector<double> all(T, 0.0), half(T, 0.0);
        for (std::size_t k = 0; k < K; ++k) {
            const double la = alpha * std::log(m[k]);
            for (std::size_t i = 0; i < T; ++i) {
                const double v = std::exp(la + lw[k * T + i]);
                all[i] = std::max(all[i], v);
                if (k < K / 2) half[i] = std::max(half[i], v);
            }
        }
        out.push_back(classify_sup_series(alpha, c, cfg.times, all, half, cfg));
    }
    return out;
}

double bounded_threshold(double sigma, Component c) {
    if (c == Component::UPrime) return sigma;
    if (sigma == 0.0) return 0.5;
    if (sigma < 1.0) return std::min(sigma + 0.5, 1.0);
    return 1.0;
}

namespace {
Region place(double alpha, double thr) {
    if (std::abs(alpha - thr) <= 1e-12) return Region::Boundary;
    return alpha < thr ? Region::Inside : Region::Outside;
}
}  // namespace

Region bounded_region(double sigma, double alpha, Component c) { return place(alpha, bounded_threshold(sigma, c)); }

Region continuity_region(double sigma, double alpha, Component c) {
    if (c == Component::U && sigma >= 1.0) return place(alpha, sigma);
    return place(alpha, bounded_threshold(sigma, c));
}

std::vector<DiagramRow> boundedness_diagram(const std::vector<double>& sigmas, const std::vector<double>& eps_grid,
                                            double delta, const SpectrumModel& m, const BoundednessScanConfig& cfg,
                                            int threads) {
    std::vector<DiagramRow> rows;
    for (double sigma : sigmas) {
        const DampingParams p{sigma, delta};
        for (Component c : {Component::U, Component::UPrime}) {
            const double thr = bounded_threshold(sigma, c);
            std::vector<double> alphas;
            for (auto it = eps_grid.rbegin(); it != eps_grid.rend(); ++it)
                if (thr - *it >= 0.0) alphas.push_back(thr - *it);
            alphas.push_back(thr);
            for (double e : eps_grid) alphas.push_back(thr + e);
            const auto scan = boundedness_scan(m, p, alphas, c, cfg, threads);
            for (const auto& s : scan) {
                DiagramRow row;
                row.sigma = sigma;
                row.alpha = s.alpha;
                row.component = c;
                row.expected = bounded_region(sigma, s.alpha, c);
                row.fit_exponent = s.fit.exponent;
                if (row.expected == Region::Boundary) {
                    row.verdict = "Inconclusive";
                    row.agrees = true;
                } else {
                    row.verdict = to_string(s.verdict);
                    const bool grew = s.verdict == BoundVerdict::Growing || s.verdict == BoundVerdict::UnboundedInLambda;
                    row.agrees = (row.expected == Region::Inside && s.verdict == BoundVerdict::Bounded) ||
                                 (row.expected == Region::Outside && grew);
                }
                rows.push_back(row);
            }
        }
    }
    return rows;
}

std::string diagram_csv(const std::vector<DiagramRow>& rows) {
    CsvWriter w({"sigma", "alpha", "component", "verdict", "fit_exponent"});
    for (const auto& r : rows) w.row(r.sigma, r.alpha, to_string(r.component), r.verdict, r.fit_exponent);
    return w.str();
}

ProbeReport probe_trajectory(const Trajectory& traj, const SpectrumModel& m, const std::vector<double>& alpha_grid,
                             Component c, const std::vector<std::size_t>& levels) {
    if (traj.modes != m.size()) throw std::length_error("probe_trajectory: trajectory and spectrum sizes differ");
    ProbeReport rep;
    rep.alpha_grid = alpha_grid;
    rep.times = traj.times;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const SpectralVector v = c == Component::U ? traj.u_slice(i) : traj.up_slice(i);
        std::vector<double> row;
        for (double a : alpha_grid) row.push_back(sobolev_norm(v, a, m));
        rep.norms.push_back(std::move(row));
    }
    if (!traj.times.empty()) {
        const std::size_t last = traj.times.size() - 1;
        const SpectralVector v = c == Component::U ? traj.u_slice(last) : traj.up_slice(last);
        for (double a : alpha_grid) rep.divergence_flags.push_back(membership_diagnosis(weighted_partial_sums(v, a, m, levels)));
    }
    const bool spans = traj.times.size() >= 4 && traj.times.front() > 0.0 &&
                       std::log10(traj.times.back() / traj.times.front()) >= 3.0;
    if (spans) {
        for (std::size_t j = 0; j < alpha_grid.size(); ++j) {
            std::vector<double> series;
            for (const auto& row : rep.norms) series.push_back(row[j]);
            if (std::all_of(series.begin(), series.end(), [](double x) { return x > 0.0; }))
                rep.fitted_growth.push_back(fit_growth(rep.times, series));
            else
                rep.fitted_growth.push_back(GrowthFit{});
        }
    }
    return rep;
}

}  // namespace dampwave
