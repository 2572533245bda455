#pragma once

#include "dampwave/config.hpp"

#include <string>
#include <vector>

namespace dampwave {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitCertification = 3;
inline constexpr int kExitOracle = 4;

struct Artifact {
    std::string path;  // relative to the output directory
    std::size_t bytes = 0;
    std::string sha256;
};

struct RunResult {
    int exit_code = kExitOk;
    std::vector<Artifact> artifacts;  // manifest.json excluded
    std::string summary;              // human-readable table for the terminal
};

// Hex SHA-256 of a byte string.
std::string sha256_hex(const std::string& bytes);

// Runs the configured task, writes its CSVs into cfg.out_dir and a manifest.json listing
// every file with its size and hash. Validation problems surface as ConfigError.
RunResult run(const ExperimentConfig& cfg);

// Loads, validates (ConfigError -> exit 2 with the message in summary) and runs.
RunResult run_file(const std::string& config_path, const std::vector<std::pair<std::string, std::string>>& overrides = {});

struct Recipe {
    std::string name;  // "AC7-blowup-constants", ...
    std::string description;
    std::string config_text;
};

std::vector<Recipe> recipes();
// Exact name, or the leading id before the first dash ("AC7").
const Recipe& find_recipe(const std::string& name);

ExperimentConfig recipe_config(const Recipe& r);

}  // namespace dampwave
