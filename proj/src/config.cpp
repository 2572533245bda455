#include "dampwave/config.hpp"

#include "dampwave/acceptance.hpp"
#include "dampwave/csv.hpp"
#include "dampwave/duhamel.hpp"
#include "dampwave/propagator.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace dampwave {
namespace {

std::string trim(std::string_view s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return std::string(s.substr(a, b - a));
}

bool valid_name(const std::string& s) {
    if (s.empty()) return false;
    return std::all_of(s.begin(), s.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
    });
}

double parse_double(const std::string& field, const std::string& text) {
    const std::string t = trim(text);
    double v = 0.0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size())
        throw ConfigError(field, "expected a number, got '" + t + "'");
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) out.push_back(trim(cur));
    if (!s.empty() && s.back() == sep) out.push_back("");
    return out;
}

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys{
        "experiment.name",        "experiment.task",        "damping.sigma",          "damping.delta",
        "spectrum.kind",          "spectrum.count",         "spectrum.base",          "spectrum.scale",
        "spectrum.values",        "spectrum.file",          "forcing.kind",           "forcing.amplitudes",
        "forcing.omega",          "forcing.phi",            "forcing.start",          "forcing.end",
        "forcing.ramp",           "forcing.period",         "forcing.scale",          "initial.u0",
        "initial.u1",             "simulate.forced",        "grid.times",             "grid.t_min",
        "grid.t_max",             "grid.per_decade",        "grid.with_zero",         "grid.alphas",
        "grid.eps",               "grid.sigmas",            "grid.deltas",            "gap.alpha0",
        "gap.alpha1",             "counterexample.statement", "counterexample.targets", "counterexample.n_max",
        "counterexample.log_modes", "acceptance.criterion", "thresholds.converge_ratio", "thresholds.min_r2",
        "thresholds.bounded_ratio", "thresholds.lambda_growth_ratio", "thresholds.oracle_tol", "output.dir",
        "run.threads",            "run.seed",
    };
    return keys;
}

bool is_indexed(const std::string& key, const std::string& prefix, std::size_t& index) {
    if (key.rfind(prefix, 0) != 0) return false;
    const std::string rest = key.substr(prefix.size());
    if (rest.empty() || !std::all_of(rest.begin(), rest.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
        return false;
    index = std::stoull(rest);
    return true;
}

void require(bool ok, const std::string& field, const std::string& constraint) {
    if (!ok) throw ConfigError(field, constraint);
}

bool finite_all(const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

// ---- ConfigFile ----

ConfigFile ConfigFile::parse(const std::string& text, const std::string& origin) {
    ConfigFile f;
    std::istringstream is(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const std::string t = trim(line);
        const std::string where = origin + ":" + std::to_string(lineno);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']') throw ConfigError(where, "unterminated section header");
            section = trim(std::string_view(t).substr(1, t.size() - 2));
            if (!valid_name(section)) throw ConfigError(where, "invalid section name '" + section + "'");
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos) throw ConfigError(where, "expected key = value");
        const std::string key = trim(std::string_view(t).substr(0, eq));
        const std::string value = trim(std::string_view(t).substr(eq + 1));
        if (!valid_name(key)) throw ConfigError(where, "invalid key '" + key + "'");
        if (section.empty()) throw ConfigError(where, "key '" + key + "' appears before any section header");
        const std::string full = section + "." + key;
        if (f.values_.count(full)) throw ConfigError(full, "defined twice (" + where + ")");
        f.values_[full] = value;
    }
    return f;
}

ConfigFile ConfigFile::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("--config", "cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    ConfigFile f = parse(ss.str(), path);
    f.base_dir_ = std::filesystem::absolute(path).parent_path().string();
    return f;
}

std::string ConfigFile::str(const std::string& key, const std::string& fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

double ConfigFile::number(const std::string& key, double fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : parse_double(key, it->second);
}

long long ConfigFile::integer(const std::string& key, long long fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    const std::string& t = it->second;
    long long v = 0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size())
        throw ConfigError(key, "expected an integer, got '" + t + "'");
    return v;
}

bool ConfigFile::boolean(const std::string& key, bool fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    if (it->second == "true" || it->second == "1" || it->second == "yes") return true;
    if (it->second == "false" || it->second == "0" || it->second == "no") return false;
    throw ConfigError(key, "expected true or false, got '" + it->second + "'");
}

std::vector<double> ConfigFile::numbers(const std::string& key, const std::vector<double>& fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    std::vector<double> out;
    if (trim(it->second).empty()) return out;
    for (const auto& part : split(it->second, ',')) out.push_back(parse_double(key, part));
    return out;
}

std::vector<std::string> ConfigFile::strings(const std::string& key, const std::vector<std::string>& fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    return split(it->second, ',');
}

// ---- tasks ----

std::string to_string(Task t) {
    switch (t) {
        case Task::Roots: return "roots";
        case Task::Simulate: return "simulate";
        case Task::GapScan: return "gap-scan";
        case Task::Diagram: return "diagram";
        case Task::Counterexample: return "counterexample";
        case Task::Verify: return "verify";
        case Task::Acceptance: return "acceptance";
    }
    return "unknown";
}

Task parse_task(const std::string& s) {
    for (Task t : {Task::Roots, Task::Simulate, Task::GapScan, Task::Diagram, Task::Counterexample, Task::Verify,
                   Task::Acceptance})
        if (to_string(t) == s) return t;
    throw ConfigError("experiment.task",
                      "must be one of roots, simulate, gap-scan, diagram, counterexample, verify, acceptance; got '" +
                          s + "'");
}

// ---- spectrum and forcing ----

SpectrumModel SpectrumConfig::build() const {
    if (kind == "geometric") return geometric_spectrum(static_cast<int>(count), base, scale);
    if (kind == "list") return SpectrumModel(values);
    if (kind == "file") {
        std::ifstream in(file);
        if (!in) throw ConfigError("spectrum.file", "cannot read '" + file + "'");
        std::vector<double> ev;
        std::string line;
        while (std::getline(in, line)) {
            const std::string t = trim(line);
            if (t.empty() || t[0] == '#' || t == "k,lambda") continue;
            const auto comma = t.find(',');
            ev.push_back(parse_double("spectrum.file", comma == std::string::npos ? t : t.substr(comma + 1)));
        }
        if (ev.empty()) throw ConfigError("spectrum.file", "no eigenvalues in '" + file + "'");
        return SpectrumModel(ev);
    }
    throw ConfigError("spectrum.kind", "must be geometric, list or file");
}

ForcingSpec ForcingConfig::build(std::size_t modes) const {
    auto amp = [&](std::size_t k) {
        if (amplitudes.empty()) return 1.0;
        return amplitudes.size() == 1 ? amplitudes[0] : amplitudes.at(k);
    };
    ForcingSpec f;
    if (kind == "zero") {
        f = ForcingSpec::zero(modes);
    } else if (kind == "constant") {
        std::vector<double> c(modes);
        for (std::size_t k = 0; k < modes; ++k) c[k] = amp(k);
        f = ForcingSpec::constant(c);
    } else if (kind == "sinusoid") {
        f.kind = ForcingKind::WindowedSinusoid;
        for (std::size_t k = 0; k < modes; ++k)
            f.modes.push_back(ModeForcing::windowed_sinusoid(amp(k), omega, phi, start, end, ramp));
    } else if (kind == "square-wave") {
        f.kind = ForcingKind::Mixed;
        for (std::size_t k = 0; k < modes; ++k) f.modes.push_back(smoothed_square_wave(period, amp(k), ramp));
    } else if (kind == "segments") {
        f.kind = ForcingKind::Mixed;
        f.modes.assign(modes, ModeForcing::zero());
        for (const auto& [k, segs] : segments) {
            if (k >= modes) throw ConfigError("forcing.mode." + std::to_string(k), "mode index beyond the spectrum");
            f.modes[k].segments = segs;
        }
        for (const auto& [k, P] : mode_periods) {
            if (k >= modes) throw ConfigError("forcing.period." + std::to_string(k), "mode index beyond the spectrum");
            f.modes[k].period = P;
        }
    } else {
        throw ConfigError("forcing.kind", "must be zero, constant, sinusoid, square-wave or segments");
    }
    f.scale = scale;
    return f;
}

// ---- validation ----

void ExperimentConfig::validate() const {
    require(std::isfinite(damping.sigma) && damping.sigma >= 0.0, "damping.sigma", "must be finite and >= 0");
    require(std::isfinite(damping.delta) && damping.delta > 0.0, "damping.delta", "must be finite and > 0");

    if (spectrum.kind == "geometric") {
        require(spectrum.count >= 1 && spectrum.count <= 1000000, "spectrum.count", "must be in [1, 1000000]");
        require(std::isfinite(spectrum.base) && spectrum.base > 1.0, "spectrum.base", "must be > 1");
        require(std::isfinite(spectrum.scale) && spectrum.scale > 0.0, "spectrum.scale", "must be > 0");
        require(std::log(spectrum.scale) + (spectrum.count - 1.0) * std::log(spectrum.base) < 700.0, "spectrum.count",
                "largest eigenvalue overflows double");
    } else if (spectrum.kind == "list") {
        require(!spectrum.values.empty(), "spectrum.values", "must be nonempty");
        require(finite_all(spectrum.values), "spectrum.values", "must be finite");
        for (std::size_t k = 0; k < spectrum.values.size(); ++k) {
            require(spectrum.values[k] > 0.0, "spectrum.values", "must be positive");
            require(k == 0 || spectrum.values[k] > spectrum.values[k - 1], "spectrum.values",
                    "must be strictly increasing");
        }
    } else if (spectrum.kind == "file") {
        require(!spectrum.file.empty(), "spectrum.file", "must name a file");
        require(std::filesystem::is_regular_file(spectrum.file), "spectrum.file",
                "referenced file '" + spectrum.file + "' does not exist");
    } else {
        throw ConfigError("spectrum.kind", "must be geometric, list or file");
    }

    static const std::set<std::string> forcing_kinds{"zero", "constant", "sinusoid", "square-wave", "segments"};
    require(forcing_kinds.count(forcing.kind) != 0, "forcing.kind",
            "must be zero, constant, sinusoid, square-wave or segments");
    require(finite_all(forcing.amplitudes), "forcing.amplitudes", "must be finite");
    if (spectrum.kind != "file" && forcing.amplitudes.size() > 1) {
        const std::size_t K = spectrum.kind == "list" ? spectrum.values.size() : spectrum.count;
        require(forcing.amplitudes.size() == K, "forcing.amplitudes", "must hold one value or one per mode");
    }
    require(forcing.ramp >= 0.0, "forcing.ramp", "must be >= 0");
    require(forcing.start >= 0.0 && forcing.start < forcing.end, "forcing.start", "must satisfy 0 <= start < end");
    require(std::isfinite(forcing.omega) && std::isfinite(forcing.phi), "forcing.omega", "must be finite");
    require(forcing.period > 0.0 && std::isfinite(forcing.period), "forcing.period", "must be finite and > 0");
    if (forcing.kind == "square-wave")
        require(forcing.ramp > 0.0 && forcing.ramp < 0.5, "forcing.ramp", "square-wave ramp fraction must be in (0, 0.5)");
    require(std::isfinite(forcing.scale), "forcing.scale", "must be finite");
    require(std::isfinite(u0) && std::isfinite(u1), "initial.u0", "initial data must be finite");

    const bool needs_times = task == Task::Simulate || task == Task::GapScan || task == Task::Diagram ||
                             task == Task::Verify;
    if (needs_times) {
        require(!times.empty(), "grid.times", "must be nonempty");
        require(finite_all(times), "grid.times", "must be finite");
        for (std::size_t i = 0; i < times.size(); ++i) {
            require(times[i] >= 0.0, "grid.times", "must be >= 0");
            require(i == 0 || times[i] > times[i - 1], "grid.times", "must be strictly increasing");
        }
    }
    if (task == Task::Diagram) {
        require(times.front() > 0.0 && times.back() / times.front() >= 1e3, "grid.times",
                "diagram needs positive times spanning at least 3 decades");
        require(!sigmas.empty(), "grid.sigmas", "must be nonempty");
        for (double s : sigmas) require(std::isfinite(s) && s >= 0.0, "grid.sigmas", "must be finite and >= 0");
    }
    require(!alphas.empty() && finite_all(alphas), "grid.alphas", "must be nonempty and finite");
    require(!eps.empty(), "grid.eps", "must be nonempty");
    for (double e : eps) require(std::isfinite(e) && e > 0.0, "grid.eps", "must be positive");
    if (task == Task::Verify) {
        require(!deltas.empty(), "grid.deltas", "must be nonempty");
        for (double d : deltas) require(std::isfinite(d) && d > 0.0, "grid.deltas", "must be positive");
    }

    if (task == Task::Counterexample) {
        require(statement >= 1 && statement <= 4, "counterexample.statement", "must be 1, 2, 3 or 4");
        require(!targets.empty(), "counterexample.targets", "must be nonempty");
        for (double t : targets) require(std::isfinite(t) && t > 0.0, "counterexample.targets", "must be positive");
        require(n_max >= 1 && n_max <= 6, "counterexample.n_max", "must be in [1, 6]");
        require(log_modes >= 16 && log_modes <= 50000000, "counterexample.log_modes", "must be in [16, 5e7]");
    }
    if (task == Task::Acceptance) {
        const auto ids = criterion_ids();
        require(std::find(ids.begin(), ids.end(), criterion) != ids.end(), "acceptance.criterion",
                "must be one of AC1..AC11");
    }

    auto ratio = [](double x) { return x > 0.0 && x < 1.0; };
    require(ratio(thresholds.converge_ratio), "thresholds.converge_ratio", "must be in (0, 1)");
    require(ratio(thresholds.min_r2), "thresholds.min_r2", "must be in (0, 1)");
    require(thresholds.bounded_ratio > 1.0, "thresholds.bounded_ratio", "must be > 1");
    require(thresholds.lambda_growth_ratio > 1.0, "thresholds.lambda_growth_ratio", "must be > 1");
    require(thresholds.oracle_tol > 0.0, "thresholds.oracle_tol", "must be > 0");

    require(!out_dir.empty(), "output.dir", "must be nonempty");
    require(threads >= 1 && threads <= 256, "run.threads", "must be in [1, 256]");
}

// ---- reading ----

ExperimentConfig experiment_from(const ConfigFile& f) {
    for (const auto& [key, value] : f.values()) {
        std::size_t idx = 0;
        if (known_keys().count(key) || is_indexed(key, "forcing.mode.", idx) || is_indexed(key, "forcing.period.", idx))
            continue;
        throw ConfigError(key, "unknown key");
    }
    auto resolve = [&](const std::string& p) {
        if (p.empty() || f.base_dir().empty() || std::filesystem::path(p).is_absolute()) return p;
        return (std::filesystem::path(f.base_dir()) / p).string();
    };

    ExperimentConfig c;
    c.name = f.str("experiment.name", c.name);
    c.task = parse_task(f.str("experiment.task", "roots"));
    c.damping.sigma = f.number("damping.sigma", c.damping.sigma);
    c.damping.delta = f.number("damping.delta", c.damping.delta);

    c.spectrum.kind = f.str("spectrum.kind", c.spectrum.kind);
    const long long count = f.integer("spectrum.count", static_cast<long long>(c.spectrum.count));
    require(count >= 1, "spectrum.count", "must be >= 1");
    c.spectrum.count = static_cast<std::size_t>(count);
    c.spectrum.base = f.number("spectrum.base", c.spectrum.base);
    c.spectrum.scale = f.number("spectrum.scale", c.spectrum.scale);
    c.spectrum.values = f.numbers("spectrum.values", {});
    c.spectrum.file = resolve(f.str("spectrum.file", ""));

    c.forcing.kind = f.str("forcing.kind", c.forcing.kind);
    c.forcing.amplitudes = f.numbers("forcing.amplitudes", {});
    c.forcing.omega = f.number("forcing.omega", c.forcing.omega);
    c.forcing.phi = f.number("forcing.phi", c.forcing.phi);
    c.forcing.start = f.number("forcing.start", c.forcing.start);
    c.forcing.end = f.number("forcing.end", c.forcing.end);
    c.forcing.ramp = f.number("forcing.ramp", c.forcing.ramp);
    c.forcing.period = f.number("forcing.period", c.forcing.period);
    c.forcing.scale = f.number("forcing.scale", c.forcing.scale);
    std::map<std::size_t, double> periods;
    for (const auto& [key, value] : f.values()) {
        std::size_t k = 0;
        if (is_indexed(key, "forcing.period.", k)) periods[k] = parse_double(key, value);
        if (!is_indexed(key, "forcing.mode.", k)) continue;
        std::vector<Segment> segs;
        for (const auto& item : split(value, ';')) {
            if (item.empty()) continue;
            std::istringstream is(item);
            std::vector<double> v;
            std::string tok;
            while (is >> tok) v.push_back(parse_double(key, tok));
            if (v.size() != 6) throw ConfigError(key, "each segment needs s0 s1 c0 c1 omega phi");
            if (!(v[0] < v[1])) throw ConfigError(key, "segment needs s0 < s1");
            segs.push_back({v[0], v[1], v[2], v[3], v[4], v[5]});
        }
        c.forcing.segments[k] = segs;
    }
    if (!periods.empty() && c.forcing.kind != "segments")
        throw ConfigError("forcing.period.<k>", "only valid with kind = segments");
    for (const auto& [k, P] : periods) {
        require(std::isfinite(P) && P > 0.0, "forcing.period." + std::to_string(k), "must be finite and > 0");
        c.forcing.mode_periods[k] = P;
    }

    c.u0 = f.number("initial.u0", c.u0);
    c.u1 = f.number("initial.u1", c.u1);
    c.forced = f.boolean("simulate.forced", c.forcing.kind != "zero");

    if (f.has("grid.times")) {
        c.times = f.numbers("grid.times", {});
    } else if (f.has("grid.t_max")) {
        const double t_min = f.number("grid.t_min", 1e-3);
        const double t_max = f.number("grid.t_max", 10.0);
        const long long per = f.integer("grid.per_decade", 10);
        require(t_min > 0.0 && t_max > t_min, "grid.t_min", "need 0 < t_min < t_max");
        require(per >= 1 && per <= 1000, "grid.per_decade", "must be in [1, 1000]");
        c.times = log_time_grid(t_min, t_max, static_cast<std::size_t>(per), f.boolean("grid.with_zero", true));
    } else {
        c.times = log_time_grid(1e-2, 10.0, 10, true);
    }
    c.alphas = f.numbers("grid.alphas", c.alphas);
    c.eps = f.numbers("grid.eps", c.eps);
    c.sigmas = f.numbers("grid.sigmas", c.sigmas);
    c.deltas = f.numbers("grid.deltas", {c.damping.delta});
    c.alpha0 = f.number("gap.alpha0", c.alpha0);
    c.alpha1 = f.number("gap.alpha1", c.alpha1);

    c.statement = static_cast<int>(f.integer("counterexample.statement", c.statement));
    c.targets = f.numbers("counterexample.targets", c.targets);
    c.n_max = static_cast<int>(f.integer("counterexample.n_max", c.n_max));
    const long long lm = f.integer("counterexample.log_modes", static_cast<long long>(c.log_modes));
    require(lm >= 0, "counterexample.log_modes", "must be >= 0");
    c.log_modes = static_cast<std::size_t>(lm);
    c.criterion = f.str("acceptance.criterion", c.criterion);

    c.thresholds.converge_ratio = f.number("thresholds.converge_ratio", c.thresholds.converge_ratio);
    c.thresholds.min_r2 = f.number("thresholds.min_r2", c.thresholds.min_r2);
    c.thresholds.bounded_ratio = f.number("thresholds.bounded_ratio", c.thresholds.bounded_ratio);
    c.thresholds.lambda_growth_ratio = f.number("thresholds.lambda_growth_ratio", c.thresholds.lambda_growth_ratio);
    c.thresholds.oracle_tol = f.number("thresholds.oracle_tol", c.thresholds.oracle_tol);

    c.out_dir = f.str("output.dir", c.out_dir);
    c.threads = static_cast<int>(f.integer("run.threads", c.threads));
    const long long seed = f.integer("run.seed", static_cast<long long>(c.seed));
    require(seed >= 0, "run.seed", "must be >= 0");
    c.seed = static_cast<std::uint64_t>(seed);

    c.validate();
    return c;
}

std::string forcing_config_text(const ForcingSpec& f) {
    std::ostringstream os;
    os << "[forcing]\nkind = segments\nscale = " << format_double(f.scale) << "\n";
    for (std::size_t k = 0; k < f.modes.size(); ++k) {
        const ModeForcing& m = f.modes[k];
        if (m.samples) throw std::invalid_argument("forcing_config_text: sample tables are not serializable");
        if (m.segments.empty()) continue;
        os << "mode." << k << " =";
        for (std::size_t i = 0; i < m.segments.size(); ++i) {
            const Segment& s = m.segments[i];
            os << (i ? " ; " : " ") << format_double(s.s0) << ' ' << format_double(s.s1) << ' ' << format_double(s.c0)
               << ' ' << format_double(s.c1) << ' ' << format_double(s.omega) << ' ' << format_double(s.phi);
        }
        os << "\n";
        if (m.period > 0.0) os << "period." << k << " = " << format_double(m.period) << "\n";
    }
    return os.str();
}

}  // namespace dampwave
