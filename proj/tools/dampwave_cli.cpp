#include "dampwave/config.hpp"
#include "dampwave/counterexamples.hpp"
#include "dampwave/csv.hpp"
#include "dampwave/harness.hpp"
#include "dampwave/oracle.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

using namespace dampwave;

namespace {

struct Common {
    std::string config;
    std::string out;
    std::optional<int> threads;
    std::optional<std::uint64_t> seed;
    std::optional<double> sigma;
    std::optional<double> delta;
};

int report(const RunResult& r, const std::string& out_dir) {
    std::cout << r.summary;
    if (!r.artifacts.empty()) {
        std::cout << "wrote " << r.artifacts.size() << " file(s) + manifest.json to " << out_dir << "\n";
        for (const auto& a : r.artifacts) std::cout << "  " << a.path << "  " << a.bytes << " bytes  " << a.sha256 << "\n";
    }
    return r.exit_code;
}

int execute(const Common& c, Task task, const std::vector<std::pair<std::string, std::string>>& extra) {
    try {
        ConfigFile f = c.config.empty() ? ConfigFile{} : ConfigFile::load(c.config);
        f.set("experiment.task", to_string(task));
        if (!c.out.empty()) f.set("output.dir", c.out);
        if (c.threads) f.set("run.threads", std::to_string(*c.threads));
        if (c.seed) f.set("run.seed", std::to_string(*c.seed));
        if (c.sigma) f.set("damping.sigma", format_double(*c.sigma));
        if (c.delta) f.set("damping.delta", format_double(*c.delta));
        for (const auto& [k, v] : extra) f.set(k, v);
        const ExperimentConfig cfg = experiment_from(f);
        return report(run(cfg), cfg.out_dir);
    } catch (const ConfigError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::domain_error& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const OracleFailure& e) {
        std::cerr << "oracle failure: " << e.what() << "\n";
        return kExitOracle;
    } catch (const ConstructionError& e) {
        std::cerr << "certification failure: " << e.what() << "\n";
        return kExitCertification;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--config", c.config, "experiment config file")->check(CLI::ExistingFile);
    sub->add_option("--out", c.out, "output directory (overrides output.dir)");
    sub->add_option("--threads", c.threads, "worker threads")->check(CLI::Range(1, 256));
    sub->add_option("--seed", c.seed, "seed for randomized trials");
    sub->add_option("--sigma", c.sigma, "damping exponent (overrides damping.sigma)");
    sub->add_option("--delta", c.delta, "damping strength (overrides damping.delta)");
}

std::string join(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_double(v[i]);
    return s;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral solver and certificate toolkit for abstract damped wave equations"};
    app.require_subcommand(1);
    Common common;
    int exit_code = 0;

    auto* roots_cmd = app.add_subcommand("roots", "characteristic roots per eigenvalue -> roots.csv");
    add_common(roots_cmd, common);
    std::vector<double> lambdas;
    roots_cmd->add_option("--lambda", lambdas, "eigenvalues (comma separated), instead of the configured spectrum")
        ->delimiter(',');
    roots_cmd->callback([&] {
        std::vector<std::pair<std::string, std::string>> extra;
        if (!lambdas.empty()) {
            extra.push_back({"spectrum.kind", "list"});
            extra.push_back({"spectrum.values", join(lambdas)});
        }
        exit_code = execute(common, Task::Roots, extra);
    });

    auto* sim_cmd = app.add_subcommand("simulate", "trajectory.csv and norms.csv on the configured grid");
    add_common(sim_cmd, common);
    bool homogeneous = false, forced = false;
    auto* h = sim_cmd->add_flag("--homogeneous", homogeneous, "ignore the configured forcing");
    sim_cmd->add_flag("--forced", forced, "apply the configured forcing")->excludes(h);
    sim_cmd->callback([&] {
        std::vector<std::pair<std::string, std::string>> extra;
        if (homogeneous) extra.push_back({"simulate.forced", "false"});
        if (forced) extra.push_back({"simulate.forced", "true"});
        exit_code = execute(common, Task::Simulate, extra);
    });

    auto* gap_cmd = app.add_subcommand("gap-scan", "phase-space amplification per eigenvalue -> gap_scan.csv");
    add_common(gap_cmd, common);
    std::optional<double> alpha0, alpha1;
    gap_cmd->add_option("--alpha0", alpha0, "position exponent");
    gap_cmd->add_option("--alpha1", alpha1, "velocity exponent");
    gap_cmd->callback([&] {
        std::vector<std::pair<std::string, std::string>> extra;
        if (alpha0) extra.push_back({"gap.alpha0", format_double(*alpha0)});
        if (alpha1) extra.push_back({"gap.alpha1", format_double(*alpha1)});
        exit_code = execute(common, Task::GapScan, extra);
    });

    auto* diag_cmd = app.add_subcommand("diagram", "boundedness verdicts around each threshold -> diagram.csv");
    add_common(diag_cmd, common);
    diag_cmd->callback([&] { exit_code = execute(common, Task::Diagram, {}); });

    auto* ce_cmd = app.add_subcommand("counterexample", "build and certify a counterexample forcing");
    add_common(ce_cmd, common);
    int statement = 0;
    ce_cmd->add_option("--statement", statement, "1: resonant (sigma = 0), 2: windowed blow-up (0 < sigma < 1), "
                                                 "3: constant (sigma >= 1), 4: threshold sequence (sigma > 1)")
        ->required()
        ->check(CLI::Range(1, 4));
    ce_cmd->callback([&] {
        exit_code = execute(common, Task::Counterexample, {{"counterexample.statement", std::to_string(statement)}});
    });

    auto* ver_cmd = app.add_subcommand("verify", "propagator vs reference oracle cross-check -> verify.csv");
    add_common(ver_cmd, common);
    ver_cmd->callback([&] { exit_code = execute(common, Task::Verify, {}); });

    auto* rec_cmd = app.add_subcommand("recipes", "list, validate or run the built-in experiment configs");
    std::string run_name, rec_out;
    bool check_all = false;
    std::optional<int> rec_threads;
    std::optional<std::uint64_t> rec_seed;
    rec_cmd->add_option("--run", run_name, "recipe to run (full name or its AC id)");
    rec_cmd->add_flag("--check", check_all, "validate every recipe config");
    rec_cmd->add_option("--out", rec_out, "output directory (overrides the recipe's)");
    rec_cmd->add_option("--threads", rec_threads, "worker threads")->check(CLI::Range(1, 256));
    rec_cmd->add_option("--seed", rec_seed, "seed for randomized trials");
    rec_cmd->callback([&] {
        try {
            if (!run_name.empty()) {
                const Recipe& r = find_recipe(run_name);
                ConfigFile f = ConfigFile::parse(r.config_text, r.name);
                if (!rec_out.empty()) f.set("output.dir", rec_out);
                if (rec_threads) f.set("run.threads", std::to_string(*rec_threads));
                if (rec_seed) f.set("run.seed", std::to_string(*rec_seed));
                const ExperimentConfig cfg = experiment_from(f);
                exit_code = report(run(cfg), cfg.out_dir);
                return;
            }
            for (const auto& r : recipes()) {
                std::string status;
                if (check_all) {
                    try {
                        recipe_config(r);
                        status = "  [valid]";
                    } catch (const ConfigError& e) {
                        status = std::string("  [INVALID: ") + e.what() + "]";
                        exit_code = kExitValidation;
                    }
                }
                std::cout << r.name << "  " << r.description << status << "\n";
            }
        } catch (const ConfigError& e) {
            std::cerr << "validation error: " << e.what() << "\n";
            exit_code = kExitValidation;
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            exit_code = 1;
        }
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitValidation;
    }
    return exit_code;
}
