// Command-line front end: parameter scans, classification, closed-form speeds,
// simulation, Monte Carlo estimators, and the built-in validation suite.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "feedwalk/analytic.hpp"
#include "feedwalk/chains.hpp"
#include "feedwalk/checks.hpp"
#include "feedwalk/environment.hpp"
#include "feedwalk/montecarlo.hpp"
#include "feedwalk/serialization.hpp"
#include "feedwalk/walk.hpp"

namespace {

using namespace feedwalk;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

struct OutputOptions {
    std::string format = "json";
    std::string path;  // empty = stdout
};

void add_output_flags(CLI::App* cmd, OutputOptions& out) {
    cmd->add_option("--format", out.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--output", out.path, "Write output to a file instead of stdout");
}

void emit(const OutputOptions& out, const std::string& text) {
    if (out.path.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream file(out.path, std::ios::binary);
    if (!file) throw Error("cannot open output file '" + out.path + "'");
    file << text;
}

struct EnvFlags {
    std::string right_tail = "q0";
    std::string left_tail = "q0";
    std::vector<std::string> overrides;
};

void add_env_flags(CLI::App* cmd, EnvFlags& env) {
    cmd->add_option("--right-tail", env.right_tail,
                    "Right tail: token or comma list for a periodic pattern (e.g. p0,q0)");
    cmd->add_option("--left-tail", env.left_tail, "Left tail: token or comma list");
    cmd->add_option("--override", env.overrides,
                    "Per-site override as x=token (repeatable)")
        ->take_all();
}

ConfigPattern parse_pattern(const std::string& text) {
    std::vector<SiteConfig> cells;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = text.find(',', start);
        const std::string tok =
            text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        if (tok.empty()) throw SpecError("empty token in pattern '" + text + "'");
        cells.push_back(parse_config_token(tok));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return cells.size() == 1 ? ConfigPattern::constant(cells[0])
                             : ConfigPattern::periodic(std::move(cells));
}

EnvironmentSpec build_env(const EnvFlags& flags, const Params& params) {
    std::map<std::int64_t, SiteConfig> overrides;
    for (const std::string& entry : flags.overrides) {
        const std::size_t eq = entry.find('=');
        if (eq == std::string::npos)
            throw SpecError("override '" + entry + "' must look like x=token");
        std::int64_t site = 0;
        try {
            std::size_t used = 0;
            site = std::stoll(entry.substr(0, eq), &used);
            if (used != eq) throw std::invalid_argument(entry);
        } catch (const std::exception&) {
            throw SpecError("override site in '" + entry + "' is not an integer");
        }
        overrides[site] = parse_config_token(entry.substr(eq + 1));
    }
    EnvironmentSpec spec = EnvironmentSpec::with_overrides(
        parse_pattern(flags.left_tail), parse_pattern(flags.right_tail), std::move(overrides));
    spec.validate(params);
    return spec;
}

struct ParamFlags {
    double p = 0.5, q = 0.5;
    std::uint32_t R = 1, L = 1;
};

void add_param_flags(CLI::App* cmd, ParamFlags& pf, bool require_p = true) {
    auto* p = cmd->add_option("--p", pf.p, "Jump-right probability in p-mode");
    cmd->add_option("--q", pf.q, "Jump-right probability in q-mode")->required();
    cmd->add_option("--R", pf.R, "Consecutive right jumps to flip q-mode");
    cmd->add_option("--L", pf.L, "Consecutive left jumps to flip p-mode");
    if (require_p) p->required();
}

Json params_json(const Params& params) {
    return Json{{"p", params.p}, {"q", params.q}, {"R", params.R}, {"L", params.L}};
}

// ---- classify ----------------------------------------------------------------

std::optional<SiteConfig> constant_tail_config(const ConfigPattern& pattern) {
    if (pattern.is_constant()) return pattern.cells[0];
    return std::nullopt;
}

TailClass parse_tail_class(const std::string& text) {
    if (text == "p0") return TailClass::IsP0;
    if (text == "q0") return TailClass::IsQ0;
    if (text == "never-p0") return TailClass::NeverP0;
    if (text == "never-q0") return TailClass::NeverQ0;
    if (text == "other" || text == "constant-other") return TailClass::ConstantOther;
    // A constant tail token such as p1/q1 avoids both special configurations.
    const SiteConfig c = parse_config_token(text);
    if (c.mode == Mode::P && c.charges == 0) return TailClass::IsP0;
    if (c.mode == Mode::Q && c.charges == 0) return TailClass::IsQ0;
    return TailClass::ConstantOther;
}

Classification classify_dispatch(const Params& params, const EnvironmentSpec& spec,
                                 double tol) {
    try {
        return classify_noncritical(params, tol);
    } catch (const WithinCriticalTolerance&) {
        // fall through to the critical classifiers below
    }
    const auto right = constant_tail_config(spec.right_tail);
    const auto left = constant_tail_config(spec.left_tail);
    if (params.R == 1 && params.L == 1) return classify_critical_RL1(params.q);
    if (params.L == 1 && params.R >= 2) return classify_critical_L1(params, right, left);
    if (params.R == 1 && params.L >= 2) return classify_critical_R1(params, right, left);
    if (params.R == 2 && params.L == 2 && std::abs(params.p - (1 - params.q)) <= 1e-9) {
        auto tail_class = [](const ConfigPattern& pattern,
                             std::optional<SiteConfig> constant) -> TailClass {
            if (constant) {
                if (constant->mode == Mode::P && constant->charges == 0) return TailClass::IsP0;
                if (constant->mode == Mode::Q && constant->charges == 0) return TailClass::IsQ0;
                return TailClass::ConstantOther;
            }
            bool has_p0 = false, has_q0 = false;
            for (SiteConfig c : pattern.cells) {
                if (c.mode == Mode::P && c.charges == 0) has_p0 = true;
                if (c.mode == Mode::Q && c.charges == 0) has_q0 = true;
            }
            if (!has_p0) return TailClass::NeverP0;
            if (!has_q0) return TailClass::NeverQ0;
            throw AmbiguousTailClass("periodic tail mixes (p,0) and (q,0) sites");
        };
        return classify_RL2(params.q, tail_class(spec.right_tail, right),
                            tail_class(spec.left_tail, left));
    }
    Classification c;
    c.verdict = Verdict::Unknown;
    c.note = "critical parameters outside the classified families (R or L = 1, or R = L = 2)";
    c.certificates["alpha"] = alpha(params);
    return c;
}

void dump_chain_matrices(const Params& params, const std::string& dir) {
    auto write = [&](const std::string& name, const std::string& text) {
        std::ofstream file(dir + "/" + name, std::ios::binary);
        if (!file) throw Error("cannot write " + dir + "/" + name);
        file << text;
    };
    write("single_site.csv", matrix_to_csv(single_site_matrix(params)));
    write("extended.csv", matrix_to_csv(extended_matrix(params)));
    const SessionMatrices sm = session_matrix(params);
    write("session_full.csv", matrix_to_csv(sm.full));
    write("session_restricted.csv", matrix_to_csv(sm.restricted));
    const StationaryDistribution pi = stationary_pi(params);
    std::vector<std::string> labels;
    for (SiteConfig c : pi.states) labels.push_back(config_token(c));
    write("pi.csv", distribution_to_csv(labels, pi.probs));
    write("psi.csv", distribution_to_csv(sm.restricted.labels, sm.psi));
}

// ---- command bodies ------------------------------------------------------------

int cmd_alpha_scan(double q, std::uint32_t R, std::uint32_t L, double p_min, double p_max,
                   std::uint32_t steps, const OutputOptions& out) {
    const auto scan = alpha_scan(q, R, L, p_min, p_max, steps);
    if (out.format == "csv") {
        emit(out, alpha_scan_csv(scan));
    } else {
        Json rows = Json::array();
        for (const auto& [p, a] : scan) rows.push_back(Json{{"p", p}, {"alpha", a}});
        emit(out, Json{{"q", q}, {"R", R}, {"L", L}, {"values", rows}}.dump(2));
    }
    return kExitOk;
}

int cmd_validate(const std::string& level, std::uint64_t seed, unsigned threads,
                 const std::string& inject_fault, const OutputOptions& out) {
    const FaultInjection fault =
        inject_fault == "pi" ? FaultInjection::StationaryPi : FaultInjection::None;
    std::vector<CheckResult> checks = run_quick_checks(seed, fault);
    if (level == "full") {
        const auto mc = run_mc_checks(seed, threads);
        checks.insert(checks.end(), mc.begin(), mc.end());
    }
    bool all_ok = true;
    if (out.format == "csv") {
        std::cerr << "validate level=" << level << " seed=" << seed << "\n";
        std::string csv = "check_name,status,expected,actual,tolerance\n";
        for (const CheckResult& c : checks) {
            all_ok = all_ok && c.passed;
            csv += c.name + "," + (c.passed ? "pass" : "FAIL") + "," +
                   format_double(c.expected) + "," + format_double(c.actual) + "," +
                   format_double(c.tolerance) + "\n";
        }
        emit(out, csv);
    } else {
        Json rows = Json::array();
        for (const CheckResult& c : checks) {
            all_ok = all_ok && c.passed;
            Json row{{"check_name", c.name},
                     {"status", c.passed ? "pass" : "FAIL"},
                     {"expected", c.expected},
                     {"actual", c.actual},
                     {"tolerance", c.tolerance}};
            if (!c.detail.empty()) row["detail"] = c.detail;
            rows.push_back(row);
        }
        emit(out, Json{{"level", level}, {"seed", seed}, {"checks", rows},
                       {"status", all_ok ? "pass" : "FAIL"}}
                      .dump(2));
    }
    return all_ok ? kExitOk : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"site-based feedback random walk toolkit"};
    app.require_subcommand(1);

    // ---- alpha-scan ----
    auto* scan_cmd = app.add_subcommand("alpha-scan", "Tabulate alpha over a p grid");
    double scan_q = 0.5, scan_pmin = 0.001, scan_pmax = 0.999;
    std::uint32_t scan_R = 1, scan_L = 1, scan_steps = 1000;
    scan_cmd->add_option("--q", scan_q)->required();
    scan_cmd->add_option("--R", scan_R)->required();
    scan_cmd->add_option("--L", scan_L)->required();
    scan_cmd->add_option("--p-min", scan_pmin);
    scan_cmd->add_option("--p-max", scan_pmax);
    scan_cmd->add_option("--steps", scan_steps);
    OutputOptions scan_out;
    scan_out.format = "csv";
    add_output_flags(scan_cmd, scan_out);

    // ---- classify ----
    auto* classify_cmd = app.add_subcommand("classify", "Transience/recurrence verdict");
    ParamFlags cl_params;
    add_param_flags(classify_cmd, cl_params, /*require_p=*/false);
    bool cl_critical_l1 = false, cl_rl2 = false, cl_rl1 = false;
    classify_cmd->add_flag("--critical-L1", cl_critical_l1,
                           "Critical case with L = 1, R >= 2 (p implied by q, R)");
    classify_cmd->add_flag("--RL2", cl_rl2, "Critical case R = L = 2 (p = 1-q)");
    classify_cmd->add_flag("--critical-RL1", cl_rl1, "Critical case R = L = 1 (p = 1-q)");
    double cl_tol = kCriticalTol;
    classify_cmd->add_option("--tol", cl_tol, "Criticality tolerance on |alpha - 1/2|");
    EnvFlags cl_env;
    add_env_flags(classify_cmd, cl_env);
    std::string cl_dump_dir;
    classify_cmd->add_option("--dump-matrices", cl_dump_dir,
                             "Directory to receive chain matrix / distribution CSV dumps");
    OutputOptions cl_out;
    add_output_flags(classify_cmd, cl_out);

    // ---- speed ----
    auto* speed_cmd = app.add_subcommand("speed", "Closed-form asymptotic speed");
    ParamFlags sp_params;
    add_param_flags(speed_cmd, sp_params);
    std::string sp_method = "auto";
    speed_cmd->add_option("--method", sp_method, "auto | l1 | r1 | rl1")
        ->check(CLI::IsMember({"auto", "l1", "r1", "rl1"}));
    EnvFlags sp_env;
    add_env_flags(speed_cmd, sp_env);
    OutputOptions sp_out;
    add_output_flags(speed_cmd, sp_out);

    // ---- simulate ----
    auto* sim_cmd = app.add_subcommand("simulate", "Run one seeded walk");
    ParamFlags sim_params;
    add_param_flags(sim_cmd, sim_params);
    std::uint64_t sim_seed = 42, sim_budget = 10000000, sim_steps = 0;
    std::int64_t sim_start = 0, sim_right = 0, sim_left = 0;
    bool sim_coupled = false;
    sim_cmd->add_option("--seed", sim_seed, "Seed (echoed in output)");
    sim_cmd->add_option("--steps", sim_steps, "Run exactly this many steps");
    sim_cmd->add_option("--right-barrier", sim_right);
    sim_cmd->add_option("--left-barrier", sim_left);
    sim_cmd->add_option("--start", sim_start);
    sim_cmd->add_option("--budget", sim_budget, "Step budget for barrier runs");
    sim_cmd->add_flag("--coupled", sim_coupled,
                      "Drive the walk through per-site jump sequences");
    std::string sim_traj_path, sim_counters_path;
    sim_cmd->add_option("--trajectory", sim_traj_path, "Write n,position CSV here");
    sim_cmd->add_option("--counters", sim_counters_path, "Write x,N,R,L CSV here");
    EnvFlags sim_env;
    add_env_flags(sim_cmd, sim_env);
    OutputOptions sim_out;
    add_output_flags(sim_cmd, sim_out);

    // ---- mc ----
    auto* mc_cmd = app.add_subcommand("mc", "Monte Carlo estimators");
    ParamFlags mc_params;
    add_param_flags(mc_cmd, mc_params);
    std::string mc_estimator;
    mc_cmd->add_option("--estimator", mc_estimator, "speed | direction | visits | z-survival | critical-probe")
        ->required()
        ->check(CLI::IsMember({"speed", "direction", "visits", "z-survival", "critical-probe"}));
    std::uint64_t mc_nsteps = 1000000, mc_reps = 100, mc_budget = 10000000,
                  mc_horizon = 1000, mc_seed = 42;
    std::int64_t mc_barrier = 1000, mc_site = 10, mc_margin = 200;
    std::vector<std::uint64_t> mc_ngrid;
    unsigned mc_threads = 0;
    bool mc_coupled = false;
    mc_cmd->add_option("--n-steps", mc_nsteps);
    mc_cmd->add_option("--reps", mc_reps);
    mc_cmd->add_option("--barrier", mc_barrier);
    mc_cmd->add_option("--budget", mc_budget);
    mc_cmd->add_option("--site", mc_site);
    mc_cmd->add_option("--margin", mc_margin);
    mc_cmd->add_option("--horizon", mc_horizon);
    mc_cmd->add_option("--n-grid", mc_ngrid, "Step counts for critical-probe")->delimiter(',');
    mc_cmd->add_option("--seed", mc_seed);
    mc_cmd->add_option("--threads", mc_threads);
    mc_cmd->add_flag("--coupled", mc_coupled, "direction estimator via jump-pattern walk");
    EnvFlags mc_env;
    add_env_flags(mc_cmd, mc_env);
    OutputOptions mc_out;
    add_output_flags(mc_cmd, mc_out);

    // ---- validate ----
    auto* val_cmd = app.add_subcommand("validate", "Run the built-in validation suite");
    std::string val_level = "quick";
    val_cmd->add_option("--level", val_level)->check(CLI::IsMember({"quick", "full"}));
    std::uint64_t val_seed = 42;
    unsigned val_threads = 0;
    val_cmd->add_option("--seed", val_seed);
    val_cmd->add_option("--threads", val_threads);
    std::string val_fault;
    val_cmd->add_option("--inject-fault", val_fault,
                        "Test hook: corrupt a named quantity (pi)")
        ->check(CLI::IsMember({"pi"}));
    OutputOptions val_out;
    add_output_flags(val_cmd, val_out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (scan_cmd->parsed())
            return cmd_alpha_scan(scan_q, scan_R, scan_L, scan_pmin, scan_pmax, scan_steps,
                                  scan_out);

        if (classify_cmd->parsed()) {
            Classification result;
            Params params;
            if (cl_critical_l1) {
                try {
                    const CriticalPoint p0 = critical_p0(cl_params.q, cl_params.R, 1);
                    params = Params{p0.value, cl_params.q, cl_params.R, 1};
                    const EnvironmentSpec spec = build_env(cl_env, params);
                    result = classify_critical_L1(params, constant_tail_config(spec.right_tail),
                                                  constant_tail_config(spec.left_tail));
                } catch (const NoCriticalPoint& e) {
                    params = Params{0.5, cl_params.q, cl_params.R, 1};
                    result.verdict = Verdict::Unknown;
                    result.note = e.what();
                } catch (const MissingConstantTail& e) {
                    result.verdict = Verdict::Unknown;
                    result.note = e.what();
                }
            } else if (cl_rl2) {
                params = Params{1 - cl_params.q, cl_params.q, 2, 2};
                try {
                    result = classify_RL2(cl_params.q, parse_tail_class(cl_env.right_tail),
                                          parse_tail_class(cl_env.left_tail));
                } catch (const Error& e) {
                    result.verdict = Verdict::Unknown;
                    result.note = e.what();
                }
            } else if (cl_rl1) {
                params = Params{1 - cl_params.q, cl_params.q, 1, 1};
                result = classify_critical_RL1(cl_params.q);
            } else {
                if (!classify_cmd->count("--p"))
                    throw CLI::RequiredError("--p (or a critical-mode flag)");
                params = Params{cl_params.p, cl_params.q, cl_params.R, cl_params.L};
                const EnvironmentSpec spec = build_env(cl_env, params);
                try {
                    result = classify_dispatch(params, spec, cl_tol);
                } catch (const Error& e) {
                    result.verdict = Verdict::Unknown;
                    result.note = e.what();
                }
            }
            if (!cl_dump_dir.empty()) dump_chain_matrices(params, cl_dump_dir);
            if (cl_out.format == "csv") {
                std::string csv = "key,value\nverdict," + verdict_name(result.verdict) +
                                  "\nrule," + result.rule + "\n";
                for (const auto& [k, v] : result.certificates)
                    csv += "certificate." + k + "," + format_double(v) + "\n";
                if (!result.note.empty()) csv += "note," + result.note + "\n";
                emit(cl_out, csv);
            } else {
                Json doc = classification_to_json(result);
                doc["params"] = params_json(params);
                emit(cl_out, doc.dump(2));
            }
            return kExitOk;
        }

        if (speed_cmd->parsed()) {
            Params params{sp_params.p, sp_params.q, sp_params.R, sp_params.L};
            std::string direction = "right";
            EnvironmentSpec spec = build_env(sp_env, params);
            if (alpha(params) < 0.5 - kCriticalTol) {
                // Mirror a left-moving walk onto the right-moving formulas:
                // reflected environment with swapped modes, swapped parameters.
                direction = "left";
                params = Params{1 - params.q, 1 - params.p, params.L, params.R};
                std::vector<SiteConfig> mirrored;
                for (SiteConfig c : spec.left_tail.cells)
                    mirrored.push_back({c.mode == Mode::P ? Mode::Q : Mode::P, c.charges});
                spec = EnvironmentSpec::with_tails(
                    ConfigPattern::constant({Mode::Q, 0}),
                    mirrored.size() == 1 ? ConfigPattern::constant(mirrored[0])
                                         : ConfigPattern::periodic(std::move(mirrored)));
            }
            std::string method = sp_method;
            if (method == "auto") {
                if (params.R == 1 && params.L == 1) method = "rl1";
                else if (params.L == 1) method = "l1";
                else if (params.R == 1) method = "r1";
                else
                    throw PreconditionViolated(
                        "no closed form for R > 1 and L > 1; use `mc --estimator speed`");
            }
            SpeedResult r;
            if (method == "l1") {
                const auto tail = constant_tail_config(spec.right_tail);
                if (!tail || !(tail->mode == Mode::Q && tail->charges == 0))
                    throw PreconditionViolated("l1 speed needs a constant (q,0) right tail");
                r = speed_L1(params);
            } else if (method == "r1") {
                r = speed_R1(params, densities_real(spec, params));
            } else {
                const double d = densities_real(spec, params)[0];
                r.speed = speed_RL1_closed(params, d);
                r.method = SpeedMethod::R1L1Closed;
            }
            Json doc;
            doc["speed"] = r.speed;
            doc["direction"] = direction;
            doc["method"] = method;
            doc["params"] = params_json(params);
            if (r.method == SpeedMethod::L1Polynomial) {
                doc["t_star"] = r.t_star;
                doc["gamma"] = r.gamma;
            }
            if (!r.a.empty()) doc["a"] = r.a;
            doc["densities"] = densities_real(spec, params);
            if (sp_out.format == "csv") {
                std::string csv = "key,value\nspeed," + format_double(r.speed) +
                                  "\ndirection," + direction + "\nmethod," + method + "\n";
                emit(sp_out, csv);
            } else {
                emit(sp_out, doc.dump(2));
            }
            return kExitOk;
        }

        if (sim_cmd->parsed()) {
            const Params params{sim_params.p, sim_params.q, sim_params.R, sim_params.L};
            const EnvironmentSpec spec = build_env(sim_env, params);
            RunOptions options;
            options.record_trajectory = !sim_traj_path.empty();
            RunOutcome out;
            if (sim_steps > 0) {
                Walker walker(spec, params, sim_start, options);
                Xoshiro256StarStar rng(sim_seed);
                for (std::uint64_t n = 0; n < sim_steps; ++n) walker.step(rng);
                out.kind = OutcomeKind::StepBudgetExhausted;
                out.final_position = walker.position();
                out.steps = walker.time();
                out.seed = sim_seed;
                out.min_position = walker.min_position();
                out.max_position = walker.max_position();
                out.counters = walker.counters_snapshot();
                out.first_hit = walker.first_hits();
                out.trajectory = walker.trajectory();
            } else {
                if (!(sim_left < sim_start && sim_start < sim_right))
                    throw PreconditionViolated(
                        "give --steps, or barriers with left < start < right");
                out = sim_coupled
                          ? coupled_walk(spec, params, sim_seed, sim_start, sim_right,
                                         sim_left, sim_budget, options)
                          : run_until(spec, params, sim_start, sim_right, sim_left,
                                      sim_budget, sim_seed, options);
            }
            if (!sim_traj_path.empty()) {
                std::ofstream file(sim_traj_path, std::ios::binary);
                file << trajectory_to_csv(out.trajectory);
            }
            if (!sim_counters_path.empty()) {
                std::ofstream file(sim_counters_path, std::ios::binary);
                file << counters_to_csv(out.counters);
            }
            Json doc = run_outcome_to_json(out);
            doc["params"] = params_json(params);
            doc["environment"] = environment_to_json(spec);
            if (sim_out.format == "csv") {
                emit(sim_out, "key,value\noutcome," + doc["outcome"].get<std::string>() +
                                  "\nfinal_position," + std::to_string(out.final_position) +
                                  "\nsteps," + std::to_string(out.steps) + "\nseed," +
                                  std::to_string(out.seed) + "\n");
            } else {
                emit(sim_out, doc.dump(2));
            }
            return kExitOk;
        }

        if (mc_cmd->parsed()) {
            const Params params{mc_params.p, mc_params.q, mc_params.R, mc_params.L};
            const EnvironmentSpec spec = build_env(mc_env, params);
            const McSettings settings{mc_threads};
            auto csv_row = [&](const std::string& estimator, double mean, double se,
                               std::uint64_t n, std::uint64_t seed) {
                return estimator + "," + format_double(params.p) + "," +
                       format_double(params.q) + "," + std::to_string(params.R) + "," +
                       std::to_string(params.L) + "," + format_double(mean) + "," +
                       format_double(se) + "," + std::to_string(n) + "," +
                       std::to_string(seed) + "\n";
            };
            const std::string csv_header = "estimator,p,q,R,L,mean,stderr,n,seed\n";
            Json doc;
            std::string csv = csv_header;
            if (mc_estimator == "speed") {
                const Estimate e = estimate_speed(spec, params, mc_nsteps, mc_reps, mc_seed,
                                                  settings);
                doc = estimate_to_json(e);
                csv += csv_row("speed", e.mean, e.std_error, e.n_samples, e.seed);
            } else if (mc_estimator == "direction") {
                const DirectionEstimate d = estimate_direction(
                    spec, params, mc_barrier, mc_budget, mc_reps, mc_seed, settings,
                    mc_coupled);
                doc = direction_to_json(d);
                const double n = static_cast<double>(d.n_reps);
                csv += csv_row("direction_right", d.f_right,
                               std::sqrt(d.f_right * (1 - d.f_right) / n), d.n_reps, d.seed);
                csv += csv_row("direction_left", d.f_left,
                               std::sqrt(d.f_left * (1 - d.f_left) / n), d.n_reps, d.seed);
            } else if (mc_estimator == "visits") {
                const Estimate e = estimate_E_Nx(spec, params, mc_site, mc_reps, mc_budget,
                                                 mc_seed, mc_margin, settings);
                doc = estimate_to_json(e);
                csv += csv_row("visits", e.mean, e.std_error, e.n_samples, e.seed);
            } else if (mc_estimator == "z-survival") {
                const Estimate e = estimate_Z_survival(spec, params, mc_horizon, mc_reps,
                                                       mc_seed, settings);
                doc = estimate_to_json(e);
                csv += csv_row("z_survival", e.mean, e.std_error, e.n_samples, e.seed);
            } else {
                if (mc_ngrid.empty()) mc_ngrid = {10000, 100000, 1000000};
                const auto rows = critical_speed_probe(spec, params, mc_ngrid, mc_reps,
                                                       mc_seed, settings);
                Json json_rows = Json::array();
                for (const SpeedProbeRow& r : rows) {
                    json_rows.push_back(Json{{"n_steps", r.n_steps},
                                             {"mean_abs_speed", r.mean_abs_speed},
                                             {"stderr", r.std_error}});
                    csv += csv_row("critical_probe@" + std::to_string(r.n_steps),
                                   r.mean_abs_speed, r.std_error, mc_reps, mc_seed);
                }
                doc = Json{{"rows", json_rows}, {"seed", mc_seed}};
            }
            if (mc_out.format == "csv") {
                emit(mc_out, csv);
            } else {
                doc["params"] = params_json(params);
                doc["environment"] = environment_to_json(spec);
                emit(mc_out, doc.dump(2));
            }
            return kExitOk;
        }

        if (val_cmd->parsed())
            return cmd_validate(val_level, val_seed, val_threads, val_fault, val_out);
    } catch (const CLI::Error& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    } catch (const InvalidParams& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const SpecError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ChargeOutOfRange& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const PreconditionViolated& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCheckFailed;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCheckFailed;
    }
    return kExitOk;
}
