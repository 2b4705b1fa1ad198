#include "feedwalk/walk.hpp"

namespace feedwalk {

Walker::Walker(const EnvironmentSpec& spec, const Params& params, std::int64_t start,
               RunOptions options)
    : spec_(&spec),
      params_(params),
      options_(options),
      position_(start),
      min_position_(start),
      max_position_(start) {
    params_.validate();
    spec.validate(params_);
    window_.init(start, SiteConfig{});
    for (std::int64_t x = window_.lo(); x < window_.hi(); ++x)
        window_[x] = spec.lookup(x);
    if (options_.track_counters) tallies_.init(start, Tally{});
    if (options_.record_trajectory) trajectory_.push_back(start);
    arrive(start);
}

void Walker::arrive(std::int64_t x) {
    if (options_.track_counters) {
        tallies_.ensure(x, [](std::int64_t) { return Tally{}; });
        tallies_[x].visits += 1;
    }
    if (options_.track_first_hits && !first_hits_.contains(x)) first_hits_[x] = time_;
}

SiteConfig Walker::config_at(std::int64_t x) {
    window_.ensure(x, [this](std::int64_t y) { return spec_->lookup(y); });
    return window_[x];
}

Jump Walker::step_with(double u) {
    const SiteConfig here = config_at(position_);
    const Jump jump = (u <= jump_prob_right(here, params_)) ? Jump::Right : Jump::Left;
    window_[position_] = update_config(here, jump, params_);
    if (options_.track_counters) {
        if (jump == Jump::Right)
            tallies_[position_].rights += 1;
        else
            tallies_[position_].lefts += 1;
    }
    position_ += jump_delta(jump);
    time_ += 1;
    if (position_ < min_position_) min_position_ = position_;
    if (position_ > max_position_) max_position_ = position_;
    if (options_.record_trajectory) trajectory_.push_back(position_);
    arrive(position_);
    return jump;
}

SiteCounters Walker::counters_at(std::int64_t x) const {
    SiteCounters sc{x, 0, 0, 0};
    if (options_.track_counters && tallies_.contains(x)) {
        const Tally& t = tallies_[x];
        sc.visits = t.visits;
        sc.rights = t.rights;
        sc.lefts = t.lefts;
    }
    return sc;
}

std::vector<SiteCounters> Walker::counters_snapshot() const {
    std::vector<SiteCounters> out;
    if (!options_.track_counters) return out;
    for (std::int64_t x = min_position_; x <= max_position_; ++x) {
        const Tally& t = tallies_[x];
        out.push_back(SiteCounters{x, t.visits, t.rights, t.lefts});
    }
    return out;
}

RunOutcome run_until(const EnvironmentSpec& spec, const Params& params,
                     std::int64_t start, std::int64_t right_barrier,
                     std::int64_t left_barrier, std::uint64_t max_steps,
                     std::uint64_t seed, RunOptions options) {
    if (!(left_barrier < start && start < right_barrier))
        throw PreconditionViolated("need left_barrier < start < right_barrier");
    if (max_steps == 0) throw BudgetZero("max_steps must be >= 1");

    Walker walker(spec, params, start, options);
    Xoshiro256StarStar rng(seed);

    RunOutcome out;
    out.seed = seed;
    out.kind = OutcomeKind::StepBudgetExhausted;
    for (std::uint64_t n = 0; n < max_steps; ++n) {
        walker.step(rng);
        if (walker.position() >= right_barrier) {
            out.kind = OutcomeKind::HitRightBarrier;
            break;
        }
        if (walker.position() <= left_barrier) {
            out.kind = OutcomeKind::HitLeftBarrier;
            break;
        }
    }
    out.final_position = walker.position();
    out.steps = walker.time();
    out.min_position = walker.min_position();
    out.max_position = walker.max_position();
    out.counters = walker.counters_snapshot();
    out.first_hit = walker.first_hits();
    out.trajectory = walker.trajectory();
    return out;
}

SpeedRun record_speed_run(const EnvironmentSpec& spec, const Params& params,
                          std::uint64_t n_steps, std::uint64_t seed,
                          bool with_counters) {
    if (n_steps == 0) throw BudgetZero("n_steps must be >= 1");
    RunOptions options;
    options.track_counters = with_counters;
    options.track_first_hits = false;
    Walker walker(spec, params, 0, options);
    Xoshiro256StarStar rng(seed);
    for (std::uint64_t n = 0; n < n_steps; ++n) walker.step(rng);

    SpeedRun run;
    run.final_position = walker.position();
    run.steps = walker.time();
    run.speed = static_cast<double>(run.final_position) / static_cast<double>(n_steps);
    run.seed = seed;
    run.counters = walker.counters_snapshot();
    return run;
}

}  // namespace feedwalk
