#pragma once

#include "dampwave/charpoly.hpp"
#include "dampwave/forcing.hpp"
#include "dampwave/spectrum.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dampwave {

// Raised for malformed or out-of-range configuration; names the field and the constraint.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, std::string constraint)
        : std::runtime_error("config field '" + field + "': " + constraint),
          field_(std::move(field)),
          constraint_(std::move(constraint)) {}
    const std::string& field() const { return field_; }
    const std::string& constraint() const { return constraint_; }

private:
    std::string field_;
    std::string constraint_;
};

// Flat key = value text with [section] headers; keys are stored as "section.key".
// Grammar in docs/config.md.
class ConfigFile {
public:
    static ConfigFile parse(const std::string& text, const std::string& origin = "<string>");
    static ConfigFile load(const std::string& path);

    bool has(const std::string& key) const { return values_.count(key) != 0; }
    const std::map<std::string, std::string>& values() const { return values_; }
    void set(const std::string& key, const std::string& value) { values_[key] = value; }

    std::string str(const std::string& key, const std::string& fallback) const;
    double number(const std::string& key, double fallback) const;
    long long integer(const std::string& key, long long fallback) const;
    bool boolean(const std::string& key, bool fallback) const;
    std::vector<double> numbers(const std::string& key, const std::vector<double>& fallback) const;
    std::vector<std::string> strings(const std::string& key, const std::vector<std::string>& fallback) const;

    // Directory of the file it was loaded from ("" for parsed strings); relative paths resolve against it.
    const std::string& base_dir() const { return base_dir_; }

private:
    std::map<std::string, std::string> values_;
    std::string base_dir_;
};

enum class Task { Roots, Simulate, GapScan, Diagram, Counterexample, Verify, Acceptance };
std::string to_string(Task t);
Task parse_task(const std::string& s);

struct SpectrumConfig {
    std::string kind = "geometric";  // geometric | list | file
    std::size_t count = 16;
    double base = 2.0;
    double scale = 1.0;
    std::vector<double> values;
    std::string file;                // one eigenvalue per line, or a k,lambda CSV

    SpectrumModel build() const;
};

struct ForcingConfig {
    std::string kind = "zero";  // zero | constant | sinusoid | square-wave | segments
    std::vector<double> amplitudes;  // per mode; a single value is broadcast
    double omega = 0.0;
    double phi = 0.0;
    double start = 0.0;
    double end = kForever;
    double ramp = 0.0;
    double period = 1.0;
    double scale = 1.0;
    std::map<std::size_t, std::vector<Segment>> segments;  // kind = segments
    std::map<std::size_t, double> mode_periods;             // kind = segments, periodic modes

    ForcingSpec build(std::size_t modes) const;
};

struct Thresholds {
    double converge_ratio = 0.9;
    double min_r2 = 0.99;
    double bounded_ratio = 1.2;
    double lambda_growth_ratio = 1.5;
    double oracle_tol = 1e-8;
};

struct ExperimentConfig {
    std::string name = "experiment";
    Task task = Task::Roots;
    DampingParams damping;
    SpectrumConfig spectrum;
    ForcingConfig forcing;
    double u0 = 0.0;  // initial data broadcast to every mode
    double u1 = 0.0;
    bool forced = false;  // simulate: forced (true) or homogeneous run

    std::vector<double> times;
    std::vector<double> alphas{0.0};
    std::vector<double> eps{0.1};
    std::vector<double> sigmas;  // diagram
    std::vector<double> deltas;  // verify
    double alpha0 = 0.0;         // gap-scan
    double alpha1 = 0.0;

    int statement = 0;           // counterexample
    std::vector<double> targets{0.5, 1.0};
    int n_max = 4;
    std::size_t log_modes = 1500000;
    std::string criterion;       // acceptance

    Thresholds thresholds;
    std::string out_dir = "out";
    int threads = 1;
    std::uint64_t seed = 20240611;

    // Throws ConfigError naming the first violated field.
    void validate() const;
};

// Reads every known key, rejects unknown ones, and validates.
ExperimentConfig experiment_from(const ConfigFile& f);

// Forcing serialized in the [forcing] kind = segments form accepted by experiment_from.
std::string forcing_config_text(const ForcingSpec& f);

}  // namespace dampwave
