#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "feedwalk/types.hpp"

namespace feedwalk {

// One named validation check. `criterion` groups checks for the acceptance
// report; `expected`/`actual`/`tolerance` carry the headline comparison.
struct CheckResult {
    std::string name;
    int criterion = 0;
    bool passed = false;
    double expected = 0.0;
    double actual = 0.0;
    double tolerance = 0.0;
    std::string detail;
};

enum class FaultInjection { None, StationaryPi };

// Analytic identity checks: deterministic given the seed, a few seconds.
std::vector<CheckResult> run_quick_checks(std::uint64_t seed,
                                          FaultInjection fault = FaultInjection::None);

// Monte Carlo agreement checks: fixed-seed simulation suites (minutes).
std::vector<CheckResult> run_mc_checks(std::uint64_t seed, unsigned threads = 0);

// Grid of (p, alpha) values for fixed (q, R, L).
std::vector<std::pair<double, double>> alpha_scan(double q, std::uint32_t R,
                                                  std::uint32_t L, double p_min,
                                                  double p_max, std::uint32_t steps);

std::string alpha_scan_csv(const std::vector<std::pair<double, double>>& scan);

// Sign changes of alpha - 1/2 along the scan.
int sign_changes_about_half(const std::vector<std::pair<double, double>>& scan);

}  // namespace feedwalk
