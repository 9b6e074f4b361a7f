#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qlab {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct ValidationOptions {
    std::uint64_t seed = 1;
    int random_states = 200;      // Eq.-13 certification sample
    int decoherence_draws = 300;  // per M in the scaling check
    // Fault-injection fixture: replaces the random phase tables with
    // s-independent ones, which kills decoherence without touching the
    // object-side reduction identity.
    bool corrupt_phases = false;
};

std::vector<CheckResult> run_validation_suite(const ValidationOptions& opts);

bool all_passed(const std::vector<CheckResult>& results);

}  // namespace qlab
