#include "dampwave/harness.hpp"

#include "dampwave/acceptance.hpp"
#include "dampwave/counterexamples.hpp"
#include "dampwave/csv.hpp"
#include "dampwave/duhamel.hpp"
#include "dampwave/oracle.hpp"
#include "dampwave/parallel.hpp"
#include "dampwave/probe.hpp"
#include "dampwave/propagator.hpp"

#include <json.hpp>
#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace dampwave {
namespace {

namespace fs = std::filesystem;

class Emitter {
public:
    explicit Emitter(const std::string& dir) : dir_(dir) { fs::create_directories(dir_); }

    void write(const std::string& name, const std::string& content) {
        std::ofstream out(dir_ / name, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + (dir_ / name).string());
        out << content;
        out.close();
        artifacts_.push_back({name, content.size(), sha256_hex(content)});
    }

    void csv(const std::string& name, const CsvWriter& w, std::size_t expected_rows) {
        // Row counts must match the declared grid; a mismatch means something was dropped.
        if (w.rows() != expected_rows)
            throw std::logic_error(name + ": " + std::to_string(w.rows()) + " rows, grid declares " +
                                   std::to_string(expected_rows));
        write(name, w.str());
    }

    std::vector<Artifact> finish(const ExperimentConfig& cfg, int exit_code) {
        std::sort(artifacts_.begin(), artifacts_.end(), [](const Artifact& a, const Artifact& b) { return a.path < b.path; });
        nlohmann::ordered_json j;
        j["name"] = cfg.name;
        j["task"] = to_string(cfg.task);
        j["exit_code"] = exit_code;
        j["files"] = nlohmann::json::array();
        for (const auto& a : artifacts_) j["files"].push_back({{"path", a.path}, {"bytes", a.bytes}, {"sha256", a.sha256}});
        std::ofstream out(dir_ / "manifest.json", std::ios::binary | std::ios::trunc);
        out << j.dump(2) << "\n";
        return artifacts_;
    }

private:
    fs::path dir_;
    std::vector<Artifact> artifacts_;
};

struct TaskOutcome {
    int exit_code = kExitOk;
    std::string summary;
};

BoundednessScanConfig scan_config(const ExperimentConfig& c) {
    BoundednessScanConfig s;
    s.times = c.times;
    s.lambda_growth_ratio = c.thresholds.lambda_growth_ratio;
    s.growth.min_r2 = c.thresholds.min_r2;
    s.growth.bounded_ratio = c.thresholds.bounded_ratio;
    return s;
}

// ---- tasks ----

TaskOutcome task_roots(const ExperimentConfig& c, Emitter& out) {
    const SpectrumModel m = c.spectrum.build();
    CsvWriter w({"lambda", "regime", "x1", "x2"});
    std::size_t counts[3] = {0, 0, 0};
    for (double lambda : m.eigenvalues()) {
        const CharRoots r = roots(c.damping, lambda);
        ++counts[static_cast<int>(r.regime)];
        switch (r.regime) {
            case Regime::RealPair: w.row(lambda, to_string(r.regime), r.x1, r.x2); break;
            case Regime::DoubleRoot: w.row(lambda, to_string(r.regime), r.r, r.r); break;
            case Regime::OscillatoryPair: w.row(lambda, to_string(r.regime), r.a, r.b); break;
        }
    }
    out.csv("roots.csv", w, m.size());
    std::ostringstream s;
    s << "roots: " << m.size() << " modes (" << counts[0] << " oscillatory, " << counts[1] << " double, " << counts[2]
      << " real)\n";
    return {kExitOk, s.str()};
}

TaskOutcome task_simulate(const ExperimentConfig& c, Emitter& out) {
    const SpectrumModel m = c.spectrum.build();
    const SpectralVector U0(m.size(), c.u0), U1(m.size(), c.u1);
    const ForcingSpec f = c.forced ? c.forcing.build(m.size()) : ForcingSpec::zero(m.size());
    const Trajectory traj = c.forced ? forced_solve(m, c.damping, f, c.times, c.threads, &U0, &U1)
                                     : homogeneous_solve(m, c.damping, U0, U1, c.times, c.threads);

    CsvWriter tw({"t", "k", "lambda", "u", "uprime"});
    for (std::size_t i = 0; i < traj.times.size(); ++i)
        for (std::size_t k = 0; k < m.size(); ++k) tw.row(traj.times[i], k, m[k], traj.u_at(i, k), traj.up_at(i, k));
    out.csv("trajectory.csv", tw, c.times.size() * m.size());

    std::vector<std::string> header{"t", "alpha", "norm_u", "norm_uprime"};
    if (c.forced) header.push_back("forcing_norm");
    CsvWriter nw(header);
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const SpectralVector u = traj.u_slice(i), up = traj.up_slice(i);
        for (double a : c.alphas) {
            std::vector<std::string> row{format_double(traj.times[i]), format_double(a),
                                         format_double(sobolev_norm(u, a, m)), format_double(sobolev_norm(up, a, m))};
            if (c.forced) row.push_back(format_double(f.norm_at(traj.times[i])));
            nw.push(std::move(row));
        }
    }
    out.csv("norms.csv", nw, c.times.size() * c.alphas.size());
    return {kExitOk, "simulate: " + std::to_string(c.times.size()) + " times x " + std::to_string(m.size()) +
                         " modes (" + (c.forced ? "forced" : "homogeneous") + ")\n"};
}

TaskOutcome task_gap_scan(const ExperimentConfig& c, Emitter& out) {
    const SpectrumModel m = c.spectrum.build();
    GapScanConfig g{c.alpha0, c.alpha1, c.times, m.eigenvalues()};
    const auto rows = gap_scan(m, c.damping, g, c.threads);
    CsvWriter w({"lambda", "amplification", "t_at_max", "ic_at_max"});
    double lo = INFINITY, hi = 0.0;
    for (const auto& r : rows) {
        w.row(r.lambda, r.amplification, r.t_at_max, r.ic_at_max);
        lo = std::min(lo, r.amplification);
        hi = std::max(hi, r.amplification);
    }
    out.csv("gap_scan.csv", w, m.size());
    std::ostringstream s;
    s << "gap-scan: gap " << c.alpha0 - c.alpha1 << ", admissible range [" << 1.0 - c.damping.gamma() << ", "
      << c.damping.gamma() << "], amplification max/min " << hi / lo << "\n";
    return {kExitOk, s.str()};
}

TaskOutcome task_diagram(const ExperimentConfig& c, Emitter& out) {
    const SpectrumModel m = c.spectrum.build();
    const auto rows = boundedness_diagram(c.sigmas, c.eps, c.damping.delta, m, scan_config(c), c.threads);
    std::size_t expected = 0;
    for (double sigma : c.sigmas)
        for (Component comp : {Component::U, Component::UPrime}) {
            const double thr = bounded_threshold(sigma, comp);
            expected += 1 + c.eps.size() +
                        static_cast<std::size_t>(std::count_if(c.eps.begin(), c.eps.end(), [&](double e) { return thr - e >= 0.0; }));
        }
    CsvWriter w({"sigma", "alpha", "component", "verdict", "fit_exponent"});
    for (const auto& r : rows) w.row(r.sigma, r.alpha, to_string(r.component), r.verdict, r.fit_exponent);
    out.csv("diagram.csv", w, expected);
    std::ostringstream s;
    s << "diagram: " << rows.size() << " points\n";
    std::size_t bad = 0;
    for (const auto& r : rows) {
        s << "  sigma=" << r.sigma << " alpha=" << r.alpha << " " << to_string(r.component) << " expected "
          << to_string(r.expected) << " got " << r.verdict << (r.agrees ? "" : "  MISMATCH") << "\n";
        bad += r.agrees ? 0 : 1;
    }
    return {bad == 0 ? kExitOk : kExitCertification, s.str()};
}

TaskOutcome task_verify(const ExperimentConfig& c, Emitter& out) {
    const SpectrumModel m = c.spectrum.build();
    std::vector<double> sigmas = c.sigmas.empty() ? std::vector<double>{c.damping.sigma} : c.sigmas;
    struct Case {
        DampingParams p;
        double lambda;
        int ic;
    };
    std::vector<Case> cases;
    for (double s : sigmas)
        for (double d : c.deltas)
            for (double lambda : m.eigenvalues())
                for (int ic = 0; ic < 2; ++ic) cases.push_back({{s, d}, lambda, ic});
    const bool forced = c.forcing.kind != "zero";
    const ModeForcing f = forced ? c.forcing.build(1).modes[0].scaled(c.forcing.scale) : ModeForcing::zero();
    std::vector<double> err(cases.size(), 0.0);
    std::vector<int> status(cases.size(), 0);  // 0 ok, 1 fail, 2 refused
    parallel_for(cases.size(), c.threads, [&](std::size_t i) {
        const Case& k = cases[i];
        const ModeIC ic = k.ic == 0 ? ModeIC{1.0, 0.0} : ModeIC{0.0, 1.0};
        try {
            const ModeTrajectory o = integrate_mode(k.p, k.lambda, f, ic, c.times);
            const CharRoots r = roots(k.p, k.lambda);
            double e = 0.0;
            for (std::size_t j = 0; j < c.times.size(); ++j) {
                const ModeState s = forced ? solve_mode(r, ic, f, c.times[j]) : homogeneous_mode(r, ic, c.times[j]);
                e = std::max({e, std::abs(s.u - o.u[j]), std::abs(s.up - o.up[j])});
            }
            err[i] = e;
            status[i] = e <= c.thresholds.oracle_tol ? 0 : 1;
        } catch (const OracleFailure&) {
            status[i] = 2;
        }
    });
    CsvWriter w({"sigma", "delta", "lambda", "ic", "max_abs_error", "status"});
    static const char* names[] = {"ok", "fail", "refused"};
    std::size_t tally[3] = {0, 0, 0};
    double worst = 0.0;
    for (std::size_t i = 0; i < cases.size(); ++i) {
        w.row(cases[i].p.sigma, cases[i].p.delta, cases[i].lambda, cases[i].ic == 0 ? "u0" : "u1", err[i], names[status[i]]);
        ++tally[status[i]];
        if (status[i] != 2) worst = std::max(worst, err[i]);
    }
    out.csv("verify.csv", w, sigmas.size() * c.deltas.size() * m.size() * 2);
    std::ostringstream s;
    s << "verify: propagator vs oracle" << (forced ? " (forced)" : "") << "\n"
      << "  cases     " << cases.size() << "\n"
      << "  ok        " << tally[0] << "\n"
      << "  fail      " << tally[1] << "\n"
      << "  refused   " << tally[2] << "\n"
      << "  max error " << worst << " (tolerance " << c.thresholds.oracle_tol << ")\n";
    return {tally[1] == 0 ? kExitOk : kExitOracle, s.str()};
}

bool row_is(const std::vector<CertificateRow>& rows, double t, double alpha, Component c, Membership want) {
    for (const auto& r : rows)
        if (r.target_time == t && std::abs(r.alpha - alpha) < 1e-12 && r.component == c && r.label.empty())
            return r.verdict == want;
    return false;
}

TaskOutcome task_counterexample(const ExperimentConfig& c, Emitter& out) {
    std::ostringstream s;
    bool holds = true;
    const DampingParams& p = c.damping;
    if (c.statement == 4) {
        if (!(p.sigma > 1.0)) throw ConfigError("damping.sigma", "statement 4 needs sigma > 1");
        const auto spectrum = geometric_log_spectrum(c.log_modes, c.spectrum.base, c.spectrum.scale);
        const UnboundedSequence seq = statement4_sequence(p, spectrum, c.n_max);
        CsvWriter w({"n", "log_target_time", "alpha", "verdict", "value", "component"});
        CsvWriter parts({"n", "M", "eta", "modes", "log_t", "Au_sq", "Aw_norm", "Av_norm", "skipped", "holds"});
        for (std::size_t n = 0; n < seq.parts.size(); ++n) {
            const ThresholdCertificate& t = seq.parts[n];
            w.row(n + 1, t.log_T, 1.0, t.holds ? "Certified" : "NotCertified", t.Au_sq, "u");
            parts.row(n + 1, t.M, t.eta, t.N, t.log_T, t.Au_sq, t.Aw_norm, t.Av_norm, t.skipped, t.holds ? "1" : "0");
            holds = holds && t.holds;
            s << "  n=" << n + 1 << " ln t_n=" << t.log_T << " |Au|^2=" << t.Au_sq << " >= " << t.M << " "
              << (t.holds ? "certified" : "NOT certified") << "\n";
        }
        out.csv("certificate.csv", w, static_cast<std::size_t>(c.n_max));
        out.csv("threshold_parts.csv", parts, static_cast<std::size_t>(c.n_max));
        std::ostringstream cfgtext;
        cfgtext << "# Regenerates the threshold forcing: the construction is defined by these parameters,\n"
                << "# its switching times are too large to list as absolute times.\n"
                << "[experiment]\ntask = counterexample\n[damping]\nsigma = " << format_double(p.sigma)
                << "\ndelta = " << format_double(p.delta) << "\n[spectrum]\nbase = " << format_double(c.spectrum.base)
                << "\nscale = " << format_double(c.spectrum.scale) << "\n[counterexample]\nstatement = 4\nn_max = "
                << c.n_max << "\nlog_modes = " << c.log_modes << "\n";
        out.write("forcing.cfg", cfgtext.str());
        holds = holds && seq.increasing;
        s << "  sup |f| <= " << seq.sup_bound << ", ln t_n increasing: " << (seq.increasing ? "yes" : "no") << "\n";
        return {holds ? kExitOk : kExitCertification, "counterexample statement 4\n" + s.str()};
    }

    const SpectrumModel m = c.spectrum.build();
    std::vector<CertificateRow> rows;
    ForcingSpec forcing;
    if (c.statement == 3) {
        if (p.sigma < 1.0) throw ConfigError("damping.sigma", "statement 3 needs sigma >= 1");
        const auto cons = statement3_constant_force(p, divergent_weights(1.0, m.size()), c.eps);
        std::vector<double> alphas;
        for (const auto& e : cons.expected) alphas.push_back(e.alpha);
        rows = certify_constant_force(m, p, cons.forcing, c.targets, alphas, geometric_levels(1, m.size(), 8));
        for (double t : c.targets)
            for (const auto& e : cons.expected) holds = holds && row_is(rows, t, e.alpha, e.component, e.verdict);
        forcing = cons.forcing;
    } else if (c.statement == 1) {
        if (p.sigma != 0.0) throw ConfigError("damping.sigma", "statement 1 needs sigma = 0");
        const Assembly a = statement1_assembly(m, p, c.targets, c.eps);
        rows = a.certificates;
        for (double t : c.targets)
            for (double e : c.eps)
                holds = holds && row_is(rows, t, 0.5 + e, Component::U, Membership::Diverging) &&
                        row_is(rows, t, e, Component::UPrime, Membership::Diverging);
        holds = holds && a.sampled_sup <= a.sup_bound;
        forcing = a.forcing;
        s << "  sup |f| bound " << a.sup_bound << ", sampled " << a.sampled_sup << "\n";
    } else {
        if (!(p.sigma > 0.0 && p.sigma < 1.0)) throw ConfigError("damping.sigma", "statement 2 needs 0 < sigma < 1");
        const Assembly a = statement2_assembly(m, p, c.targets);
        rows = a.certificates;
        for (const auto& r : rows)
            if (!r.label.empty()) holds = holds && r.label == "WindowBoundsHold";
        forcing = a.forcing;
        s << "  sup |f| bound " << a.sup_bound << ", sampled " << a.sampled_sup << "\n";
    }
    const std::string text = certificate_csv(rows);
    out.write("certificate.csv", text);
    if (static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')) != rows.size() + 1)
        throw std::logic_error("certificate.csv: row count mismatch");
    out.write("forcing.cfg", "# Forcing of the construction, one line per active mode.\n" + forcing_config_text(forcing));
    for (const auto& r : rows)
        s << "  t=" << r.target_time << " alpha=" << r.alpha << " " << to_string(r.component) << " "
          << (r.label.empty() ? to_string(r.verdict) : r.label) << "\n";
    return {holds ? kExitOk : kExitCertification,
            "counterexample statement " + std::to_string(c.statement) + (holds ? " holds" : " FAILED") + "\n" + s.str()};
}

TaskOutcome task_acceptance(const ExperimentConfig& c, Emitter& out) {
    const CriterionResult r = run_criterion(c.criterion, {c.threads, c.seed});
    if (!r.error.empty()) throw std::runtime_error(c.criterion + ": " + r.error);
    CsvWriter w({"check", "value", "limit", "pass"});
    for (const Check& k : r.checks) w.row(k.name, k.value, k.limit, k.pass ? "1" : "0");
    out.csv(c.criterion + ".csv", w, r.checks.size());
    std::ostringstream s;
    s << r.id << " " << r.title << ": " << (r.passed ? "PASS" : "FAIL") << "\n";
    for (const Check& k : r.checks)
        s << "  " << (k.pass ? "ok   " : "FAIL ") << k.name << " = " << k.value << " (limit " << k.limit << ")\n";
    return {r.passed ? kExitOk : kExitCertification, s.str()};
}

}  // namespace

std::string sha256_hex(const std::string& bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("sha256 failed");
    std::ostringstream os;
    for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
    return os.str();
}

RunResult run(const ExperimentConfig& cfg) {
    cfg.validate();
    Emitter out(cfg.out_dir);
    TaskOutcome o;
    switch (cfg.task) {
        case Task::Roots: o = task_roots(cfg, out); break;
        case Task::Simulate: o = task_simulate(cfg, out); break;
        case Task::GapScan: o = task_gap_scan(cfg, out); break;
        case Task::Diagram: o = task_diagram(cfg, out); break;
        case Task::Counterexample: o = task_counterexample(cfg, out); break;
        case Task::Verify: o = task_verify(cfg, out); break;
        case Task::Acceptance: o = task_acceptance(cfg, out); break;
    }
    RunResult r;
    r.exit_code = o.exit_code;
    r.summary = o.summary;
    r.artifacts = out.finish(cfg, o.exit_code);
    return r;
}

RunResult run_file(const std::string& config_path, const std::vector<std::pair<std::string, std::string>>& overrides) {
    try {
        ConfigFile f = ConfigFile::load(config_path);
        for (const auto& [k, v] : overrides) f.set(k, v);
        return run(experiment_from(f));
    } catch (const ConfigError& e) {
        RunResult r;
        r.exit_code = kExitValidation;
        r.summary = std::string("validation error: ") + e.what() + "\n";
        return r;
    }
}

// ---- recipes ----

std::vector<Recipe> recipes() {
    std::vector<Recipe> out;
    const char* names[] = {"AC1-root-correctness",     "AC2-root-asymptotics",   "AC3-oracle-equivalence",
                           "AC4-gap-region",           "AC5-derivative-gap",     "AC6-boundedness-diagrams",
                           "AC7-blowup-constants",     "AC8-resonance-limit",    "AC9-counterexample-certificates",
                           "AC10-energy-inequality",   "AC11-periodic-solution"};
    const auto ids = criterion_ids();
    for (std::size_t i = 0; i < ids.size(); ++i) {
        std::ostringstream cfg;
        cfg << "[experiment]\nname = " << names[i] << "\ntask = acceptance\n[acceptance]\ncriterion = " << ids[i]
            << "\n[output]\ndir = out/" << names[i] << "\n";
        out.push_back({names[i], criterion_title(ids[i]), cfg.str()});
    }
    out.push_back({"diagram-sigma-grid", "boundedness diagram over a sigma grid, threshold +- eps",
                   "[experiment]\nname = diagram-sigma-grid\ntask = diagram\n"
                   "[damping]\ndelta = 1\n"
                   "[spectrum]\nkind = geometric\ncount = 48\nbase = 2\nscale = 1.5\n"
                   "[grid]\nsigmas = 0, 0.25, 0.5, 1, 1.5, 2\neps = 0.5\n"
                   "t_min = 1\nt_max = 1e4\nper_decade = 10\nwith_zero = false\n"
                   "[output]\ndir = out/diagram-sigma-grid\n"});
    out.push_back({"counterexample-statement-1", "resonant assembly for sigma = 0, two targets",
                   "[experiment]\nname = counterexample-statement-1\ntask = counterexample\n"
                   "[damping]\nsigma = 0\ndelta = 1\n"
                   "[spectrum]\nkind = geometric\ncount = 64\nbase = 1.4142135623730951\nscale = 4\n"
                   "[grid]\neps = 0.1\n"
                   "[counterexample]\nstatement = 1\ntargets = 0.5, 1\n"
                   "[output]\ndir = out/counterexample-statement-1\n"});
    out.push_back({"counterexample-statement-2", "windowed blow-up assembly for sigma = 0.75",
                   "[experiment]\nname = counterexample-statement-2\ntask = counterexample\n"
                   "[damping]\nsigma = 0.75\ndelta = 1\n"
                   "[spectrum]\nkind = geometric\ncount = 64\nbase = 16\nscale = 100\n"
                   "[counterexample]\nstatement = 2\ntargets = 0.5, 1\n"
                   "[output]\ndir = out/counterexample-statement-2\n"});
    out.push_back({"counterexample-statement-3", "constant forcing for sigma = 2",
                   "[experiment]\nname = counterexample-statement-3\ntask = counterexample\n"
                   "[damping]\nsigma = 2\ndelta = 1\n"
                   "[spectrum]\nkind = geometric\ncount = 128\nbase = 2\nscale = 1\n"
                   "[grid]\neps = 0.1\n"
                   "[counterexample]\nstatement = 3\ntargets = 0.5, 1, 2\n"
                   "[output]\ndir = out/counterexample-statement-3\n"});
    out.push_back({"counterexample-statement-4", "threshold sequence for sigma = 2, n = 1..4",
                   "[experiment]\nname = counterexample-statement-4\ntask = counterexample\n"
                   "[damping]\nsigma = 2\ndelta = 1\n"
                   "[spectrum]\nbase = 2\nscale = 1\n"
                   "[counterexample]\nstatement = 4\nn_max = 4\nlog_modes = 1500000\n"
                   "[output]\ndir = out/counterexample-statement-4\n"});
    return out;
}

const Recipe& find_recipe(const std::string& name) {
    static const std::vector<Recipe> all = recipes();
    for (const auto& r : all)
        if (r.name == name) return r;
    for (const auto& r : all)
        if (r.name.substr(0, r.name.find('-')) == name) return r;
    throw ConfigError("recipe", "no recipe named '" + name + "'");
}

ExperimentConfig recipe_config(const Recipe& r) { return experiment_from(ConfigFile::parse(r.config_text, r.name)); }

}  // namespace dampwave
