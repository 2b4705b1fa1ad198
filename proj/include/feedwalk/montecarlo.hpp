#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "feedwalk/environment.hpp"
#include "feedwalk/types.hpp"

namespace feedwalk {

struct McSettings {
    unsigned threads = 0;  // 0 = hardware concurrency
};

// Seeded estimator result. Per-replicate seeds are derived by counter from
// the base seed, and aggregation is replicate-order deterministic, so a
// repeated call is bit-identical regardless of thread count.
struct Estimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::uint64_t n_samples = 0;
    std::uint64_t seed = 0;
    std::string config_digest;
};

Estimate estimate_speed(const EnvironmentSpec& spec, const Params& params,
                        std::uint64_t n_steps, std::uint64_t n_reps,
                        std::uint64_t base_seed, McSettings settings = {});

struct DirectionEstimate {
    double f_right = 0.0;
    double f_left = 0.0;
    double f_timeout = 0.0;
    std::uint64_t n_reps = 0;
    std::uint64_t seed = 0;
    std::string config_digest;
};

// Frequencies of first-hit side at +-barrier; optionally driven through the
// two-phase coupled construction instead of the direct walk.
DirectionEstimate estimate_direction(const EnvironmentSpec& spec, const Params& params,
                                     std::int64_t barrier, std::uint64_t max_steps,
                                     std::uint64_t n_reps, std::uint64_t base_seed,
                                     McSettings settings = {}, bool use_coupled = false);

// Mean total visits to `site`, counting until the walk is `margin` sites past
// it; needs alpha > 1/2 and a right tail constant at and beyond the site.
Estimate estimate_E_Nx(const EnvironmentSpec& spec, const Params& params,
                       std::int64_t site, std::uint64_t n_reps, std::uint64_t budget,
                       std::uint64_t base_seed, std::int64_t margin = 200,
                       McSettings settings = {});

// Frequency of the right-jumps chain staying positive out to `horizon`.
Estimate estimate_Z_survival(const EnvironmentSpec& spec, const Params& params,
                             std::uint64_t horizon, std::uint64_t n_reps,
                             std::uint64_t base_seed, McSettings settings = {});

struct SpeedProbeRow {
    std::uint64_t n_steps = 0;
    double mean_abs_speed = 0.0;
    double std_error = 0.0;
};

// Exploratory empirical |X_n|/n at increasing n for critical parameters.
std::vector<SpeedProbeRow> critical_speed_probe(const EnvironmentSpec& spec,
                                                const Params& params,
                                                const std::vector<std::uint64_t>& n_grid,
                                                std::uint64_t n_reps,
                                                std::uint64_t base_seed,
                                                McSettings settings = {});

// Order-deterministic pairwise summation used by all aggregations.
double pairwise_sum(const std::vector<double>& values);

std::string estimator_digest(const std::string& estimator, const EnvironmentSpec& spec,
                             const Params& params,
                             const std::vector<std::pair<std::string, double>>& settings);

}  // namespace feedwalk
