#include "dampwave/config.hpp"
#include "dampwave/csv.hpp"
#include "dampwave/harness.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <json.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace dampwave;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("dampwave_test_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int cli(const std::string& args) {
    const std::string cmd = std::string(DAMPWAVE_CLI) + " " + args + " >/dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string field_of(const std::string& text) {
    try {
        experiment_from(ConfigFile::parse(text));
    } catch (const ConfigError& e) {
        return e.field();
    }
    return "";
}

const char* kZeroOneMode = R"(
[experiment]
name = zero
task = simulate
[spectrum]
kind = list
values = 3
[forcing]
kind = zero
[simulate]
forced = true
[grid]
times = 0, 0.5, 1, 2
)";

}  // namespace

TEST_CASE("config text: sections, comments and lists") {
    const ConfigFile f = ConfigFile::parse("# top\n[damping]\n; note\nsigma = 0.5\n\n[grid]\nalphas = 0, 0.5,1\n");
    CHECK(f.number("damping.sigma", 0.0) == 0.5);
    CHECK(f.numbers("grid.alphas", {}) == std::vector<double>{0.0, 0.5, 1.0});
    CHECK(f.str("missing.key", "x") == "x");
    CHECK_THROWS_AS(ConfigFile::parse("[a]\nk = 1\nk = 2\n"), ConfigError);
    CHECK_THROWS_AS(ConfigFile::parse("no equals sign\n"), ConfigError);
    CHECK_THROWS_AS(f.integer("damping.sigma", 0), ConfigError);
    // Comments take whole lines only.
    CHECK_THROWS_AS(ConfigFile::parse("[damping]\nsigma = 0.5 # x\n").number("damping.sigma", 0.0), ConfigError);
}

TEST_CASE("validation names the offending field") {
    CHECK(field_of("[damping]\nsigma = -1\n") == "damping.sigma");
    CHECK(field_of("[damping]\ndelta = 0\n") == "damping.delta");
    CHECK(field_of("[damping]\nspeed = 1\n") == "damping.speed");
    CHECK(field_of("[experiment]\ntask = fly\n") == "experiment.task");
    CHECK(field_of("[spectrum]\ncount = 0\n") == "spectrum.count");
    CHECK(field_of("[run]\nseed = -3\n") == "run.seed");
    CHECK(field_of("[experiment]\ntask = roots\n").empty());
}

TEST_CASE("segment forcing survives a text round trip") {
    ForcingSpec f = ForcingSpec::mode_switch(3, {{0.0, 1.0, 0, 0.5}, {1.0, 2.5, 2, -1.0}}, 0.1);
    const std::string text = "[experiment]\ntask = simulate\n[spectrum]\nkind = list\nvalues = 1, 2, 4\n" +
                             forcing_config_text(f);
    const ExperimentConfig c = experiment_from(ConfigFile::parse(text));
    const ForcingSpec g = c.forcing.build(3);
    for (double s : {0.05, 0.5, 0.95, 1.2, 2.0, 2.45, 3.0})
        for (std::size_t k = 0; k < 3; ++k) CHECK(g.value(k, s) == Catch::Approx(f.value(k, s)).margin(1e-15));
}

TEST_CASE("every built-in recipe validates and is found by its id") {
    const auto all = recipes();
    CHECK(all.size() >= 11);
    for (const auto& r : all) CHECK_NOTHROW(recipe_config(r));
    CHECK(find_recipe("AC7").name == "AC7-blowup-constants");
    CHECK(find_recipe("AC11-periodic-solution").name == "AC11-periodic-solution");
    CHECK_THROWS_AS(find_recipe("AC99"), ConfigError);
}

TEST_CASE("known digest") {
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("one unforced mode from rest stays at rest, and the manifest hashes every file") {
    const fs::path dir = scratch("zero");
    ConfigFile f = ConfigFile::parse(kZeroOneMode);
    f.set("output.dir", dir.string());
    const RunResult r = run(experiment_from(f));
    REQUIRE(r.exit_code == kExitOk);

    std::istringstream traj(slurp(dir / "trajectory.csv"));
    std::string line;
    std::getline(traj, line);
    CHECK(line == "t,k,lambda,u,uprime");
    int rows = 0;
    while (std::getline(traj, line)) {
        ++rows;
        CHECK(line.substr(line.size() - 4) == ",0,0");
    }
    CHECK(rows == 4);

    const auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
    CHECK(manifest["name"] == "zero");
    CHECK(manifest["exit_code"] == 0);
    REQUIRE(manifest["files"].size() == r.artifacts.size());
    for (const auto& entry : manifest["files"]) {
        const std::string bytes = slurp(dir / entry["path"].get<std::string>());
        CHECK(entry["bytes"].get<std::size_t>() == bytes.size());
        CHECK(entry["sha256"].get<std::string>() == sha256_hex(bytes));
    }
}

TEST_CASE("identical configs give byte-identical outputs") {
    const char* text = R"(
[experiment]
task = simulate
[damping]
sigma = 0.75
[spectrum]
count = 12
[forcing]
kind = sinusoid
amplitudes = 0.5
omega = 2
start = 0.1
end = 3
ramp = 0.2
[initial]
u0 = 1
[grid]
t_min = 0.01
t_max = 10
per_decade = 5
alphas = 0, 0.5
)";
    std::vector<std::string> hashes;
    for (const char* name : {"det_a", "det_b"}) {
        const fs::path dir = scratch(name);
        ConfigFile f = ConfigFile::parse(text);
        f.set("output.dir", dir.string());
        f.set("run.threads", name[4] == 'a' ? "1" : "2");
        REQUIRE(run(experiment_from(f)).exit_code == kExitOk);
        hashes.push_back(sha256_hex(slurp(dir / "trajectory.csv")) + sha256_hex(slurp(dir / "norms.csv")));
    }
    CHECK(hashes[0] == hashes[1]);
}

TEST_CASE("verify task cross-checks against the oracle") {
    const fs::path dir = scratch("verify");
    ConfigFile f = ConfigFile::parse("[experiment]\ntask = verify\n[spectrum]\ncount = 6\n[grid]\ntimes = 0, 0.3, 1\n");
    f.set("output.dir", dir.string());
    CHECK(run(experiment_from(f)).exit_code == kExitOk);
    CHECK(fs::exists(dir / "verify.csv"));
}

TEST_CASE("run_file reports validation problems as exit 2") {
    const fs::path dir = scratch("bad");
    fs::create_directories(dir);
    std::ofstream(dir / "bad.cfg") << "[damping]\nsigma = abc\n";
    const RunResult r = run_file((dir / "bad.cfg").string());
    CHECK(r.exit_code == kExitValidation);
    CHECK(r.summary.find("damping.sigma") != std::string::npos);
}

TEST_CASE("command line exit codes") {
    const fs::path dir = scratch("cli");
    CHECK(cli("roots --lambda 1,4,1e6 --sigma 0.5 --out " + dir.string()) == 0);
    CHECK(fs::exists(dir / "roots.csv"));
    CHECK(fs::exists(dir / "manifest.json"));
    CHECK(cli("roots --delta -1 --out " + dir.string()) == kExitValidation);
    CHECK(cli("counterexample --statement 3 --sigma 0.5 --out " + dir.string()) == kExitValidation);
    CHECK(cli("counterexample --statement 9") == kExitValidation);
    CHECK(cli("recipes --check") == 0);
    CHECK(cli("recipes --run AC7 --out " + (dir / "ac7").string()) == 0);
    CHECK(fs::exists(dir / "ac7" / "AC7.csv"));
}
