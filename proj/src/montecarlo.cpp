#include "feedwalk/montecarlo.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <functional>
#include <thread>

#include "feedwalk/analytic.hpp"
#include "feedwalk/chains.hpp"
#include "feedwalk/rng.hpp"
#include "feedwalk/serialization.hpp"
#include "feedwalk/walk.hpp"

namespace feedwalk {

double pairwise_sum(const std::vector<double>& values) {
    std::function<double(std::size_t, std::size_t)> sum =
        [&](std::size_t lo, std::size_t hi) -> double {
        if (hi - lo <= 8) {
            double s = 0.0;
            for (std::size_t i = lo; i < hi; ++i) s += values[i];
            return s;
        }
        const std::size_t mid = lo + (hi - lo) / 2;
        return sum(lo, mid) + sum(mid, hi);
    };
    return values.empty() ? 0.0 : sum(0, values.size());
}

namespace {

struct MeanStderr {
    double mean;
    double std_error;
};

MeanStderr mean_and_stderr(const std::vector<double>& values) {
    const auto n = static_cast<double>(values.size());
    const double mean = pairwise_sum(values) / n;
    if (values.size() < 2) return {mean, 0.0};
    std::vector<double> sq(values.size());
    for (std::size_t i = 0; i < values.size(); ++i)
        sq[i] = (values[i] - mean) * (values[i] - mean);
    const double var = pairwise_sum(sq) / (n - 1);
    return {mean, std::sqrt(var / n)};
}

// Runs rep bodies over a shared-counter pool; results land in replicate order.
void run_pool(std::uint64_t n_reps, unsigned threads,
              const std::function<void(std::uint64_t)>& body) {
    unsigned width = threads ? threads : std::thread::hardware_concurrency();
    if (width == 0) width = 1;
    width = static_cast<unsigned>(
        std::min<std::uint64_t>(width, std::max<std::uint64_t>(n_reps, 1)));
    if (width <= 1) {
        for (std::uint64_t i = 0; i < n_reps; ++i) body(i);
        return;
    }
    std::atomic<std::uint64_t> next{0};
    std::vector<std::thread> workers;
    workers.reserve(width);
    for (unsigned w = 0; w < width; ++w) {
        workers.emplace_back([&] {
            for (;;) {
                const std::uint64_t i = next.fetch_add(1);
                if (i >= n_reps) return;
                body(i);
            }
        });
    }
    for (auto& t : workers) t.join();
}

std::uint64_t rep_seed(std::uint64_t base, std::uint64_t rep) {
    return derive_stream(base, rep, 0x726570ULL);
}

}  // namespace

std::string estimator_digest(const std::string& estimator, const EnvironmentSpec& spec,
                             const Params& params,
                             const std::vector<std::pair<std::string, double>>& settings) {
    std::string text = estimator;
    char buf[64];
    std::snprintf(buf, sizeof buf, "|p=%.17g|q=%.17g|R=%u|L=%u", params.p, params.q,
                  params.R, params.L);
    text += buf;
    text += "|env=" + environment_to_json(spec).dump();
    for (const auto& [k, v] : settings) {
        std::snprintf(buf, sizeof buf, "|%s=%.17g", k.c_str(), v);
        text += buf;
    }
    // FNV-1a 64-bit over the canonical settings string.
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

Estimate estimate_speed(const EnvironmentSpec& spec, const Params& params,
                        std::uint64_t n_steps, std::uint64_t n_reps,
                        std::uint64_t base_seed, McSettings settings) {
    if (n_steps < 1 || n_reps < 2)
        throw PreconditionViolated("estimate_speed needs n_steps >= 1 and n_reps >= 2");
    params.validate();
    spec.validate(params);
    std::vector<double> speeds(n_reps);
    run_pool(n_reps, settings.threads, [&](std::uint64_t i) {
        speeds[i] = record_speed_run(spec, params, n_steps, rep_seed(base_seed, i),
                                     /*with_counters=*/false)
                        .speed;
    });
    const auto [mean, se] = mean_and_stderr(speeds);
    return Estimate{mean, se, n_reps, base_seed,
                    estimator_digest("speed", spec, params,
                                     {{"n_steps", static_cast<double>(n_steps)},
                                      {"n_reps", static_cast<double>(n_reps)}})};
}

DirectionEstimate estimate_direction(const EnvironmentSpec& spec, const Params& params,
                                     std::int64_t barrier, std::uint64_t max_steps,
                                     std::uint64_t n_reps, std::uint64_t base_seed,
                                     McSettings settings, bool use_coupled) {
    if (barrier < 1) throw PreconditionViolated("estimate_direction needs barrier >= 1");
    if (n_reps < 1) throw PreconditionViolated("estimate_direction needs n_reps >= 1");
    params.validate();
    spec.validate(params);
    RunOptions lean;
    lean.track_counters = false;
    lean.track_first_hits = false;
    std::vector<std::uint8_t> outcome(n_reps);
    run_pool(n_reps, settings.threads, [&](std::uint64_t i) {
        const std::uint64_t s = rep_seed(base_seed, i);
        const RunOutcome out =
            use_coupled
                ? coupled_walk(spec, params, s, 0, barrier, -barrier, max_steps, lean)
                : run_until(spec, params, 0, barrier, -barrier, max_steps, s, lean);
        outcome[i] = static_cast<std::uint8_t>(out.kind);
    });
    DirectionEstimate d;
    d.n_reps = n_reps;
    d.seed = base_seed;
    std::uint64_t right = 0, left = 0, timeout = 0;
    for (std::uint8_t k : outcome) {
        if (k == static_cast<std::uint8_t>(OutcomeKind::HitRightBarrier)) ++right;
        else if (k == static_cast<std::uint8_t>(OutcomeKind::HitLeftBarrier)) ++left;
        else ++timeout;
    }
    d.f_right = static_cast<double>(right) / static_cast<double>(n_reps);
    d.f_left = static_cast<double>(left) / static_cast<double>(n_reps);
    d.f_timeout = static_cast<double>(timeout) / static_cast<double>(n_reps);
    d.config_digest = estimator_digest(
        use_coupled ? "direction.coupled" : "direction", spec, params,
        {{"barrier", static_cast<double>(barrier)},
         {"max_steps", static_cast<double>(max_steps)},
         {"n_reps", static_cast<double>(n_reps)}});
    return d;
}

Estimate estimate_E_Nx(const EnvironmentSpec& spec, const Params& params,
                       std::int64_t site, std::uint64_t n_reps, std::uint64_t budget,
                       std::uint64_t base_seed, std::int64_t margin,
                       McSettings settings) {
    params.validate();
    spec.validate(params);
    if (!(alpha(params) > 0.5))
        throw PreconditionViolated("estimate_E_Nx needs alpha > 1/2");
    if (!spec.right_tail.is_constant() || site < spec.right_tail_start)
        throw PreconditionViolated("estimate_E_Nx needs a constant tail at and right of site");
    if (n_reps < 2 || budget == 0)
        throw PreconditionViolated("estimate_E_Nx needs n_reps >= 2 and budget >= 1");
    std::vector<double> visits(n_reps);
    run_pool(n_reps, settings.threads, [&](std::uint64_t i) {
        RunOptions lean;
        lean.track_first_hits = false;
        Walker walker(spec, params, 0, lean);
        Xoshiro256StarStar rng(rep_seed(base_seed, i));
        // Stop once the walk is `margin` past the site; remaining visit mass
        // is geometrically small in the margin.
        for (std::uint64_t n = 0; n < budget && walker.position() < site + margin; ++n)
            walker.step(rng);
        visits[i] = static_cast<double>(walker.counters_at(site).visits);
    });
    const auto [mean, se] = mean_and_stderr(visits);
    return Estimate{mean, se, n_reps, base_seed,
                    estimator_digest("e_nx", spec, params,
                                     {{"site", static_cast<double>(site)},
                                      {"margin", static_cast<double>(margin)},
                                      {"budget", static_cast<double>(budget)},
                                      {"n_reps", static_cast<double>(n_reps)}})};
}

Estimate estimate_Z_survival(const EnvironmentSpec& spec, const Params& params,
                             std::uint64_t horizon, std::uint64_t n_reps,
                             std::uint64_t base_seed, McSettings settings) {
    if (n_reps < 1) throw PreconditionViolated("estimate_Z_survival needs n_reps >= 1");
    params.validate();
    spec.validate(params);
    std::vector<double> survived(n_reps);
    run_pool(n_reps, settings.threads, [&](std::uint64_t i) {
        survived[i] = survival_run_Z(spec, params, horizon, rep_seed(base_seed, i)) ? 1.0 : 0.0;
    });
    const auto [mean, se] = mean_and_stderr(survived);
    return Estimate{mean, se, n_reps, base_seed,
                    estimator_digest("z_survival", spec, params,
                                     {{"horizon", static_cast<double>(horizon)},
                                      {"n_reps", static_cast<double>(n_reps)}})};
}

std::vector<SpeedProbeRow> critical_speed_probe(const EnvironmentSpec& spec,
                                                const Params& params,
                                                const std::vector<std::uint64_t>& n_grid,
                                                std::uint64_t n_reps,
                                                std::uint64_t base_seed,
                                                McSettings settings) {
    params.validate();
    spec.validate(params);
    if (std::abs(alpha(params) - 0.5) > kCriticalTol)
        throw PreconditionViolated("critical_speed_probe needs critical parameters");
    if (n_reps < 2) throw PreconditionViolated("critical_speed_probe needs n_reps >= 2");
    std::vector<SpeedProbeRow> rows;
    std::uint64_t grid_index = 0;
    for (std::uint64_t n_steps : n_grid) {
        std::vector<double> abs_speeds(n_reps);
        run_pool(n_reps, settings.threads, [&](std::uint64_t i) {
            const std::uint64_t s =
                rep_seed(base_seed, grid_index * 0x10000000ULL + i);
            abs_speeds[i] = std::abs(
                record_speed_run(spec, params, n_steps, s, /*with_counters=*/false).speed);
        });
        const auto [mean, se] = mean_and_stderr(abs_speeds);
        rows.push_back(SpeedProbeRow{n_steps, mean, se});
        ++grid_index;
    }
    return rows;
}

}  // namespace feedwalk
