#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "feedwalk/environment.hpp"
#include "feedwalk/rng.hpp"
#include "feedwalk/types.hpp"
#include "feedwalk/walk.hpp"

namespace feedwalk {

// Row-stochastic matrix with named states; ordering is part of the contract.
struct TransitionMatrix {
    std::vector<std::string> labels;
    std::vector<std::vector<double>> rows;

    std::size_t size() const { return labels.size(); }
    std::size_t index_of(const std::string& label) const;
    double at(const std::string& from, const std::string& to) const;
};

// Ordered state list (p,0..L-1) then (q,0..R-1) used by the single-site chain.
std::vector<SiteConfig> configuration_states(const Params& params);

// Configuration-at-successive-visits chain over the L+R single-site states.
TransitionMatrix single_site_matrix(const Params& params);

// Extended chain over (configuration, next jump) pairs; labels are the
// configuration token suffixed with "+" or "-".
TransitionMatrix extended_matrix(const Params& params);

// Initial distribution of the extended chain for a site starting in `initial`:
// all mass on (initial, +1) and (initial, -1), split by the mode probability.
// Indexed like extended_matrix's labels.
std::vector<double> extended_initial_distribution(SiteConfig initial, const Params& params);

struct StationaryDistribution {
    std::vector<SiteConfig> states;   // same order as single_site_matrix
    std::vector<double> probs;
    double pi_p = 0.0;  // total mass on p-configs
    double pi_q = 0.0;  // total mass on q-configs
};

// Closed-form stationary distribution of the single-site chain.
StationaryDistribution stationary_pi(const Params& params);

// Lazily generated per-site sequence of +-1 jumps with the single-site law.
// Reproducible from (seed, site); next_with(u) drives it from an external
// uniform for coupling constructions.
class JumpSequence {
public:
    JumpSequence(SiteConfig initial, const Params& params, std::uint64_t seed,
                 std::int64_t site);

    Jump next() { return next_with(rng_.uniform01()); }
    Jump next_with(double u);

    SiteConfig config() const { return config_; }
    std::uint64_t draws() const { return draws_; }

private:
    Params params_;
    SiteConfig config_;
    Xoshiro256StarStar rng_;
    std::uint64_t draws_ = 0;
};

// Number of right jumps in the sequence before the z_prev-th left jump.
// z_prev = 0 consumes nothing and returns 0.
std::uint64_t right_jumps_step(std::uint64_t z_prev, JumpSequence& seq);
std::uint64_t right_jumps_step(std::uint64_t z_prev, const std::function<Jump()>& next);

// Iterates the right-jumps chain from Z_0 = 1 across fresh per-site jump
// sequences at sites 1..horizon; true iff Z stays positive the whole way.
bool survival_run_Z(const EnvironmentSpec& spec, const Params& params,
                    std::uint64_t horizon, std::uint64_t seed);

// Number of left jumps in the sequence before the (w_prev+1)-th right jump.
std::uint64_t left_jumps_step(std::uint64_t w_prev, JumpSequence& seq);
std::uint64_t left_jumps_step(std::uint64_t w_prev, const std::function<Jump()>& next);

// Law of the number of right jumps a site yields in one session (between
// consecutive left jumps), indexed by the starting configuration class:
// i < R means start (q,i); i = R means start in any p-configuration.
struct SessionLaw {
    std::uint32_t i = 0;
    Params params;
};

double session_pmf(const SessionLaw& law, std::uint64_t k);
double session_log_pmf(const SessionLaw& law, std::uint64_t k);
std::uint64_t session_sample(const SessionLaw& law, Xoshiro256StarStar& rng);

// Session-to-session configuration chain: full matrix over all states plus
// its restriction to the closed class {(p,1),...,(p,L-1),(q,0)} with its
// invariant vector psi and the per-state session means E.
struct SessionMatrices {
    TransitionMatrix full;        // over all L+R states
    TransitionMatrix restricted;  // states (p,1),...,(p,L-1),(q,0)
    std::vector<double> psi;      // invariant vector of `restricted`
    std::vector<double> session_means;  // E over the restricted states
};

SessionMatrices session_matrix(const Params& params);

// Two-phase construction of the walk: generate per-site jump sequences first,
// then follow them deterministically. Distributionally equivalent to
// run_until with the same barriers.
RunOutcome coupled_walk(const EnvironmentSpec& spec, const Params& params,
                        std::uint64_t seed, std::int64_t start,
                        std::int64_t right_barrier, std::int64_t left_barrier,
                        std::uint64_t max_steps, RunOptions options = {});

}  // namespace feedwalk
