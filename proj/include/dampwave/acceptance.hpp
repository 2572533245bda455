#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace dampwave {

// One measured quantity inside a criterion; `limit` is the bound it was compared to.
struct Check {
    std::string name;
    double value = 0.0;
    double limit = 0.0;
    bool pass = false;
};

struct CriterionResult {
    std::string id;     // AC1 .. AC11
    std::string title;
    std::vector<Check> checks;
    bool passed = false;
    double seconds = 0.0;
    std::string error;  // set when the criterion threw
};

struct AcceptanceOptions {
    int threads = 1;
    std::uint64_t seed = 20240611;
};

std::vector<std::string> criterion_ids();
std::string criterion_title(const std::string& id);

// Throws std::invalid_argument for an unknown id.
CriterionResult run_criterion(const std::string& id, const AcceptanceOptions& opt = {});

// Columns check,value,limit,pass.
std::string checks_csv(const CriterionResult& r);

}  // namespace dampwave
