#include "feedwalk/chains.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "feedwalk/analytic.hpp"

namespace feedwalk {

std::size_t TransitionMatrix::index_of(const std::string& label) const {
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i] == label) return i;
    throw Error("unknown state label '" + label + "'");
}

double TransitionMatrix::at(const std::string& from, const std::string& to) const {
    return rows[index_of(from)][index_of(to)];
}

std::vector<SiteConfig> configuration_states(const Params& params) {
    std::vector<SiteConfig> states;
    for (std::uint32_t i = 0; i < params.L; ++i) states.push_back({Mode::P, i});
    for (std::uint32_t i = 0; i < params.R; ++i) states.push_back({Mode::Q, i});
    return states;
}

TransitionMatrix single_site_matrix(const Params& params) {
    params.validate();
    const auto states = configuration_states(params);
    const std::size_t n = states.size();
    std::unordered_map<std::string, std::size_t> idx;
    TransitionMatrix m;
    for (std::size_t i = 0; i < n; ++i) {
        m.labels.push_back(config_token(states[i]));
        idx[m.labels.back()] = i;
    }
    m.rows.assign(n, std::vector<double>(n, 0.0));
    auto set = [&](SiteConfig from, SiteConfig to, double v) {
        m.rows[idx.at(config_token(from))][idx.at(config_token(to))] += v;
    };
    const double p = params.p, q = params.q;
    const std::uint32_t R = params.R, L = params.L;
    for (std::uint32_t i = 0; i + 1 < L; ++i) {
        set({Mode::P, i}, {Mode::P, 0}, p);
        set({Mode::P, i}, {Mode::P, i + 1}, 1 - p);
    }
    set({Mode::P, L - 1}, {Mode::P, 0}, p);
    set({Mode::P, L - 1}, {Mode::Q, 0}, 1 - p);
    for (std::uint32_t i = 0; i + 1 < R; ++i) {
        set({Mode::Q, i}, {Mode::Q, 0}, 1 - q);
        set({Mode::Q, i}, {Mode::Q, i + 1}, q);
    }
    set({Mode::Q, R - 1}, {Mode::Q, 0}, 1 - q);
    set({Mode::Q, R - 1}, {Mode::P, 0}, q);
    return m;
}

TransitionMatrix extended_matrix(const Params& params) {
    params.validate();
    const auto states = configuration_states(params);
    TransitionMatrix m;
    std::unordered_map<std::string, std::size_t> idx;
    for (const SiteConfig& c : states) {
        for (const char* suffix : {"+", "-"}) {
            m.labels.push_back(config_token(c) + suffix);
            idx[m.labels.back()] = m.labels.size() - 1;
        }
    }
    const std::size_t n = m.labels.size();
    m.rows.assign(n, std::vector<double>(n, 0.0));
    auto label = [](SiteConfig c, Jump j) {
        return config_token(c) + (j == Jump::Right ? "+" : "-");
    };
    // From (c, j): the site configuration becomes update_config(c, j) and the
    // next jump is drawn with that configuration's mode probability.
    for (const SiteConfig& c : states) {
        for (Jump j : {Jump::Right, Jump::Left}) {
            const SiteConfig next = update_config(c, j, params);
            const double pr = jump_prob_right(next, params);
            m.rows[idx.at(label(c, j))][idx.at(label(next, Jump::Right))] += pr;
            m.rows[idx.at(label(c, j))][idx.at(label(next, Jump::Left))] += 1 - pr;
        }
    }
    return m;
}

std::vector<double> extended_initial_distribution(SiteConfig initial, const Params& params) {
    params.validate();
    if (!config_valid(initial, params))
        throw ChargeOutOfRange("invalid initial config for extended chain");
    const auto states = configuration_states(params);
    std::vector<double> dist(2 * states.size(), 0.0);
    for (std::size_t i = 0; i < states.size(); ++i) {
        if (states[i] == initial) {
            const double pr = jump_prob_right(initial, params);
            dist[2 * i] = pr;
            dist[2 * i + 1] = 1 - pr;
        }
    }
    return dist;
}

StationaryDistribution stationary_pi(const Params& params) {
    params.validate();
    const double p = params.p, q = params.q;
    const std::uint32_t R = params.R, L = params.L;
    const double qR = std::pow(q, static_cast<double>(R));
    const double cL = std::pow(1 - p, static_cast<double>(L));
    const double denom = (1 - q) * qR * (1 - cL) + p * cL * (1 - qR);

    StationaryDistribution dist;
    dist.states = configuration_states(params);
    dist.probs.reserve(dist.states.size());
    const double p_base = p * (1 - q) * qR / denom;
    const double q_base = p * (1 - q) * cL / denom;
    for (std::uint32_t i = 0; i < L; ++i) {
        const double v = p_base * std::pow(1 - p, static_cast<double>(i));
        dist.probs.push_back(v);
        dist.pi_p += v;
    }
    for (std::uint32_t i = 0; i < R; ++i) {
        const double v = q_base * std::pow(q, static_cast<double>(i));
        dist.probs.push_back(v);
        dist.pi_q += v;
    }
    return dist;
}

JumpSequence::JumpSequence(SiteConfig initial, const Params& params, std::uint64_t seed,
                           std::int64_t site)
    : params_(params),
      config_(initial),
      rng_(derive_stream(seed, static_cast<std::uint64_t>(site), 0x736974656aULL)) {
    params_.validate();
    if (!config_valid(initial, params_))
        throw ChargeOutOfRange("invalid initial config for jump sequence");
}

Jump JumpSequence::next_with(double u) {
    const Jump j = (u <= jump_prob_right(config_, params_)) ? Jump::Right : Jump::Left;
    config_ = update_config(config_, j, params_);
    ++draws_;
    return j;
}

std::uint64_t right_jumps_step(std::uint64_t z_prev, const std::function<Jump()>& next) {
    if (z_prev == 0) return 0;  // empty-sum convention: consume nothing
    std::uint64_t rights = 0, lefts = 0;
    while (lefts < z_prev) {
        if (next() == Jump::Right)
            ++rights;
        else
            ++lefts;
    }
    return rights;
}

std::uint64_t right_jumps_step(std::uint64_t z_prev, JumpSequence& seq) {
    return right_jumps_step(z_prev, std::function<Jump()>([&seq] { return seq.next(); }));
}

// In the supercritical regime the chain multiplies by roughly alpha/(1-alpha)
// per site, so simulating every draw out to a large horizon is exponential
// work. Once the state clears this cap, the remaining extinction probability
// is exponentially small in the cap (far below anything a frequency over
// finitely many seeds could register), so the run is scored as survival.
constexpr std::uint64_t kZSurvivalCap = 1ULL << 17;

bool survival_run_Z(const EnvironmentSpec& spec, const Params& params,
                    std::uint64_t horizon, std::uint64_t seed) {
    spec.validate(params);
    if (!spec.right_tail.is_constant())
        throw PreconditionViolated("right-jumps chain needs a constant right tail");
    std::uint64_t z = 1;
    for (std::uint64_t x = 1; x <= horizon && z > 0; ++x) {
        if (z >= kZSurvivalCap) return true;
        JumpSequence seq(spec.lookup(static_cast<std::int64_t>(x)), params, seed,
                         static_cast<std::int64_t>(x));
        z = right_jumps_step(z, seq);
    }
    return z > 0;
}

std::uint64_t left_jumps_step(std::uint64_t w_prev, const std::function<Jump()>& next) {
    std::uint64_t rights = 0, lefts = 0;
    while (rights < w_prev + 1) {
        if (next() == Jump::Right)
            ++rights;
        else
            ++lefts;
    }
    return lefts;
}

std::uint64_t left_jumps_step(std::uint64_t w_prev, JumpSequence& seq) {
    return left_jumps_step(w_prev, std::function<Jump()>([&seq] { return seq.next(); }));
}

// ---- session law ------------------------------------------------------------

double session_log_pmf(const SessionLaw& law, std::uint64_t k) {
    law.params.validate();
    const std::uint32_t R = law.params.R;
    if (law.i > R) throw PreconditionViolated("session index must satisfy i <= R");
    const double p = law.params.p, q = law.params.q;
    const double to_switch = static_cast<double>(R - law.i);
    const double kd = static_cast<double>(k);
    if (law.i < R && kd <= to_switch - 1)
        return kd * std::log(q) + std::log1p(-q);
    return to_switch * std::log(q) + (kd - to_switch) * std::log(p) + std::log1p(-p);
}

double session_pmf(const SessionLaw& law, std::uint64_t k) {
    // Log-space evaluation guards very deep tails (k ~ 1e3 and beyond).
    if (k > 1000) return std::exp(session_log_pmf(law, k));
    law.params.validate();
    const std::uint32_t R = law.params.R;
    if (law.i > R) throw PreconditionViolated("session index must satisfy i <= R");
    const double p = law.params.p, q = law.params.q;
    const std::uint32_t to_switch = R - law.i;
    if (k < to_switch) return std::pow(q, static_cast<double>(k)) * (1 - q);
    return std::pow(q, static_cast<double>(to_switch)) *
           std::pow(p, static_cast<double>(k - to_switch)) * (1 - p);
}

std::uint64_t session_sample(const SessionLaw& law, Xoshiro256StarStar& rng) {
    law.params.validate();
    if (law.i > law.params.R) throw PreconditionViolated("session index must satisfy i <= R");
    // Run the site automaton until the first left jump; the configuration
    // visits (q,i),(q,i+1),...,(p,0),(p,0),... under consecutive right jumps.
    SiteConfig c = (law.i < law.params.R) ? SiteConfig{Mode::Q, law.i}
                                          : SiteConfig{Mode::P, 0};
    std::uint64_t rights = 0;
    while (rng.uniform01() <= jump_prob_right(c, law.params)) {
        c = update_config(c, Jump::Right, law.params);
        ++rights;
    }
    return rights;
}

// ---- session configuration chain ---------------------------------------------

// Invariant vector of the session configuration chain on the closed class
// ((p,1),...,(p,L-1),(q,0)). The chain's skeleton gives it in closed form:
// state (p,i+1) is fed only by (p,i) with weight 1-p, so
// psi_{(p,i)} = (1-p)^{i-1} psi_{(p,1)}, and balancing the flow through
// (q,0) gives psi_{(q,0)} q^R = psi_{(p,L-1)} (1-p). All-positive products,
// so this stays accurate where a dense solve would be ill-conditioned.
static std::vector<double> session_invariant_vector(const Params& params) {
    if (params.L == 1) return {1.0};
    std::vector<double> weights;
    double w = 1.0;
    for (std::uint32_t i = 1; i < params.L; ++i) {
        weights.push_back(w);
        w *= 1 - params.p;
    }
    weights.push_back(w / std::pow(params.q, static_cast<double>(params.R)));
    double total = 0.0;
    for (double v : weights) total += v;
    for (double& v : weights) v /= total;
    return weights;
}

SessionMatrices session_matrix(const Params& params) {
    params.validate();
    const auto states = configuration_states(params);
    const std::size_t n = states.size();
    std::unordered_map<std::string, std::size_t> idx;
    SessionMatrices out;
    for (std::size_t i = 0; i < n; ++i) {
        out.full.labels.push_back(config_token(states[i]));
        idx[out.full.labels.back()] = i;
    }
    out.full.rows.assign(n, std::vector<double>(n, 0.0));
    const double p = params.p, q = params.q;
    const std::uint32_t R = params.R, L = params.L;
    auto add = [&](SiteConfig from, SiteConfig to, double v) {
        out.full.rows[idx.at(config_token(from))][idx.at(config_token(to))] += v;
    };
    if (L == 1) {
        // Degenerate chain: the configuration after any left jump is (q,0).
        for (const SiteConfig& c : states) add(c, {Mode::Q, 0}, 1.0);
    } else {
        for (std::uint32_t i = 0; i < R; ++i) {
            const double stay = std::pow(q, static_cast<double>(R - i));
            add({Mode::Q, i}, {Mode::Q, 0}, 1 - stay);
            add({Mode::Q, i}, {Mode::P, 1}, stay);
        }
        for (std::uint32_t i = 0; i + 1 < L; ++i) {
            add({Mode::P, i}, {Mode::P, 1}, p);
            add({Mode::P, i}, {Mode::P, i + 1}, 1 - p);
        }
        add({Mode::P, L - 1}, {Mode::P, 1}, p);
        add({Mode::P, L - 1}, {Mode::Q, 0}, 1 - p);
    }

    // Closed class ordered (p,1),...,(p,L-1),(q,0).
    std::vector<std::string> closed;
    for (std::uint32_t i = 1; i < L; ++i) closed.push_back(config_token({Mode::P, i}));
    closed.push_back(config_token({Mode::Q, 0}));
    out.restricted.labels = closed;
    out.restricted.rows.assign(closed.size(), std::vector<double>(closed.size(), 0.0));
    for (std::size_t r = 0; r < closed.size(); ++r)
        for (std::size_t c = 0; c < closed.size(); ++c)
            out.restricted.rows[r][c] = out.full.rows[idx.at(closed[r])][idx.at(closed[c])];

    out.psi = session_invariant_vector(params);

    // E over the closed class: p-configs yield geometric(1-p) sessions,
    // (q,0) yields a session with mean E(S_0).
    out.session_means.assign(closed.size(), p / (1 - p));
    out.session_means.back() = mean_S(params, 0);
    return out;
}

// ---- two-phase coupled construction -----------------------------------------

RunOutcome coupled_walk(const EnvironmentSpec& spec, const Params& params,
                        std::uint64_t seed, std::int64_t start,
                        std::int64_t right_barrier, std::int64_t left_barrier,
                        std::uint64_t max_steps, RunOptions options) {
    if (!(left_barrier < start && start < right_barrier))
        throw PreconditionViolated("need left_barrier < start < right_barrier");
    if (max_steps == 0) throw BudgetZero("max_steps must be >= 1");
    params.validate();
    spec.validate(params);

    std::unordered_map<std::int64_t, JumpSequence> sequences;
    auto sequence_at = [&](std::int64_t x) -> JumpSequence& {
        auto it = sequences.find(x);
        if (it == sequences.end())
            it = sequences.emplace(x, JumpSequence(spec.lookup(x), params, seed, x)).first;
        return it->second;
    };

    RunOutcome out;
    out.seed = seed;
    out.kind = OutcomeKind::StepBudgetExhausted;
    std::int64_t pos = start;
    std::unordered_map<std::int64_t, SiteCounters> counters;
    if (options.track_first_hits) out.first_hit[pos] = 0;
    if (options.record_trajectory) out.trajectory.push_back(pos);
    if (options.track_counters) {
        auto& sc = counters[pos];
        sc.site = pos;
        sc.visits = 1;
    }
    out.min_position = out.max_position = pos;

    std::uint64_t n = 0;
    for (; n < max_steps; ++n) {
        const Jump j = sequence_at(pos).next();
        if (options.track_counters) {
            auto& sc = counters[pos];
            sc.site = pos;
            if (j == Jump::Right)
                sc.rights += 1;
            else
                sc.lefts += 1;
        }
        pos += jump_delta(j);
        out.min_position = std::min(out.min_position, pos);
        out.max_position = std::max(out.max_position, pos);
        if (options.record_trajectory) out.trajectory.push_back(pos);
        if (options.track_counters) {
            auto& sc = counters[pos];
            sc.site = pos;
            sc.visits += 1;
        }
        if (options.track_first_hits && !out.first_hit.contains(pos))
            out.first_hit[pos] = n + 1;
        if (pos >= right_barrier) {
            out.kind = OutcomeKind::HitRightBarrier;
            ++n;
            break;
        }
        if (pos <= left_barrier) {
            out.kind = OutcomeKind::HitLeftBarrier;
            ++n;
            break;
        }
    }
    out.final_position = pos;
    out.steps = n;
    if (options.track_counters) {
        for (std::int64_t x = out.min_position; x <= out.max_position; ++x) {
            auto it = counters.find(x);
            out.counters.push_back(it == counters.end() ? SiteCounters{x, 0, 0, 0}
                                                        : it->second);
        }
    }
    return out;
}

}  // namespace feedwalk
