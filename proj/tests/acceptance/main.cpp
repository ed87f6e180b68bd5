// Runs the acceptance suite and prints one line per criterion.

#include <cstdint>
#include <cstdio>
#include <cstdlib>

#include "lightray/selftest.hpp"

int main(int argc, char** argv) {
    std::uint64_t seed = 1234u;
    if (argc > 1) seed = std::strtoull(argv[1], nullptr, 10);
    bool ok = true;
    for (const lightray::CheckResult& r : lightray::run_acceptance_checks(seed)) {
        std::printf("%s  %-58s  residual %.3e  threshold %.3e\n", r.passed ? "PASS" : "FAIL",
                    r.name.c_str(), r.residual, r.threshold);
        std::fflush(stdout);
        ok = ok && r.passed;
    }
    return ok ? 0 : 1;
}
