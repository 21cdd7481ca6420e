#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace slcr {

struct CheckResult {
    int id = 0;
    std::string name;
    bool passed = false;
    double seconds = 0;
    nlohmann::json metrics;
};

struct ValidationOptions {
    bool quick = false;       // reduced sample counts and grids, subset of checks
    std::uint64_t seed = 20240601;
    std::vector<int> only;    // empty runs everything available in the mode
};

// Observed convergence orders log2(e_k / e_{k+1}) for a ladder that halves h.
std::vector<double> observed_orders(const std::vector<double>& errors);

// The invariant suite. Checks are numbered 1..12.
std::vector<CheckResult> run_validation(const ValidationOptions& opts);
nlohmann::json scorecard(const std::vector<CheckResult>& results);

}  // namespace slcr
