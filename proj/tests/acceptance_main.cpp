// Runs every acceptance criterion and prints one PASS/FAIL line each.
#include "dampwave/acceptance.hpp"

#include <cstdio>
#include <cstring>
#include <string>

int main(int argc, char** argv) {
    bool verbose = false;
    std::string only;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "-v") == 0) verbose = true;
        else only = argv[i];
    }
    int failed = 0;
    for (const auto& id : dampwave::criterion_ids()) {
        if (!only.empty() && id != only) continue;
        const auto r = dampwave::run_criterion(id);
        std::size_t ok = 0;
        for (const auto& c : r.checks) ok += c.pass;
        std::printf("%-5s %s  %s  (%zu/%zu checks, %.1f s)%s%s\n", r.id.c_str(), r.passed ? "PASS" : "FAIL",
                    r.title.c_str(), ok, r.checks.size(), r.seconds, r.error.empty() ? "" : "  error: ",
                    r.error.c_str());
        for (const auto& c : r.checks)
            if (verbose || !c.pass)
                std::printf("      %s %-60s value %.6g  limit %.6g\n", c.pass ? "ok  " : "MISS", c.name.c_str(),
                            c.value, c.limit);
        failed += !r.passed;
    }
    std::fflush(stdout);
    return failed == 0 ? 0 : 1;
}
