#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace lightray {

/// One acceptance check: the residual is the worst observed deviation, with
/// its pass threshold recorded alongside.
struct CheckResult {
    std::string name;
    bool passed = false;
    double residual = 0.0;
    double threshold = 0.0;
};

/// Runs the full acceptance suite against the closed-form oracles. The seed
/// fixes every random probe, so results are reproducible.
std::vector<CheckResult> run_acceptance_checks(std::uint64_t seed = 1234u);

}  // namespace lightray
