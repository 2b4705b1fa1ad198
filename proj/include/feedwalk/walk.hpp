#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "feedwalk/environment.hpp"
#include "feedwalk/rng.hpp"
#include "feedwalk/types.hpp"

namespace feedwalk {

enum class OutcomeKind { HitRightBarrier, HitLeftBarrier, StepBudgetExhausted };

struct SiteCounters {
    std::int64_t site = 0;
    std::uint64_t visits = 0;  // N_x
    std::uint64_t rights = 0;  // R_x
    std::uint64_t lefts = 0;   // L_x
};

struct RunOptions {
    bool track_counters = true;
    bool track_first_hits = true;
    bool record_trajectory = false;
};

struct RunOutcome {
    OutcomeKind kind = OutcomeKind::StepBudgetExhausted;
    std::int64_t final_position = 0;
    std::uint64_t steps = 0;
    std::uint64_t seed = 0;
    std::int64_t min_position = 0;
    std::int64_t max_position = 0;
    std::vector<SiteCounters> counters;          // sorted by site, visited range
    std::map<std::int64_t, std::uint64_t> first_hit;  // T_x for sites reached
    std::vector<std::int64_t> trajectory;        // positions, if recorded
};

// Growable array over a contiguous integer interval of sites. The walk is
// nearest-neighbor, so the visited set is always an interval.
template <typename T>
class SiteSpan {
public:
    void init(std::int64_t center, T value) {
        origin_ = center - 8;
        cells_.assign(17, value);
    }
    bool contains(std::int64_t x) const {
        return x >= origin_ && x < origin_ + static_cast<std::int64_t>(cells_.size());
    }
    T& operator[](std::int64_t x) { return cells_[static_cast<std::size_t>(x - origin_)]; }
    const T& operator[](std::int64_t x) const {
        return cells_[static_cast<std::size_t>(x - origin_)];
    }
    std::int64_t lo() const { return origin_; }
    std::int64_t hi() const { return origin_ + static_cast<std::int64_t>(cells_.size()); }

    template <typename Fill>
    void ensure(std::int64_t x, Fill fill) {
        while (x < origin_) {
            const std::size_t grow = cells_.size();
            std::vector<T> next;
            next.reserve(cells_.size() + grow);
            const std::int64_t new_origin = origin_ - static_cast<std::int64_t>(grow);
            for (std::size_t i = 0; i < grow; ++i)
                next.push_back(fill(new_origin + static_cast<std::int64_t>(i)));
            next.insert(next.end(), cells_.begin(), cells_.end());
            cells_ = std::move(next);
            origin_ = new_origin;
        }
        while (x >= origin_ + static_cast<std::int64_t>(cells_.size())) {
            const std::size_t grow = cells_.size();
            const std::int64_t base = origin_ + static_cast<std::int64_t>(cells_.size());
            for (std::size_t i = 0; i < grow; ++i)
                cells_.push_back(fill(base + static_cast<std::int64_t>(i)));
        }
    }

private:
    std::int64_t origin_ = 0;
    std::vector<T> cells_;
};

// Mutable state of one simulated walk: position, step clock, the materialized
// environment window, and per-site visit/jump counters.
class Walker {
public:
    Walker(const EnvironmentSpec& spec, const Params& params, std::int64_t start,
           RunOptions options = {});

    // One step driven by an externally drawn uniform variate: jump right iff
    // u <= jump_prob_right(current config).
    Jump step_with(double u);
    Jump step(Xoshiro256StarStar& rng) { return step_with(rng.uniform01()); }

    std::int64_t position() const { return position_; }
    std::uint64_t time() const { return time_; }
    std::int64_t min_position() const { return min_position_; }
    std::int64_t max_position() const { return max_position_; }

    SiteConfig config_at(std::int64_t x);  // materializes the site if needed
    SiteCounters counters_at(std::int64_t x) const;
    std::vector<SiteCounters> counters_snapshot() const;
    const std::map<std::int64_t, std::uint64_t>& first_hits() const { return first_hits_; }
    const std::vector<std::int64_t>& trajectory() const { return trajectory_; }

private:
    struct Tally {
        std::uint64_t visits = 0, rights = 0, lefts = 0;
    };

    const EnvironmentSpec* spec_;
    Params params_;
    RunOptions options_;
    std::int64_t position_;
    std::uint64_t time_ = 0;
    std::int64_t min_position_;
    std::int64_t max_position_;
    SiteSpan<SiteConfig> window_;
    SiteSpan<Tally> tallies_;
    std::map<std::int64_t, std::uint64_t> first_hits_;
    std::vector<std::int64_t> trajectory_;

    void arrive(std::int64_t x);
};

// Simulates from `start` until a barrier is hit or the step budget runs out.
RunOutcome run_until(const EnvironmentSpec& spec, const Params& params,
                     std::int64_t start, std::int64_t right_barrier,
                     std::int64_t left_barrier, std::uint64_t max_steps,
                     std::uint64_t seed, RunOptions options = {});

struct SpeedRun {
    std::int64_t final_position = 0;
    std::uint64_t steps = 0;
    double speed = 0.0;  // X_n / n
    std::uint64_t seed = 0;
    std::vector<SiteCounters> counters;
};

// Runs exactly n_steps steps and reports the empirical speed X_n/n.
SpeedRun record_speed_run(const EnvironmentSpec& spec, const Params& params,
                          std::uint64_t n_steps, std::uint64_t seed,
                          bool with_counters = true);

}  // namespace feedwalk
