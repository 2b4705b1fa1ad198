#include "feedwalk/serialization.hpp"

#include <charconv>
#include <cstdio>

namespace feedwalk {

std::string format_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

static Json pattern_to_json(const ConfigPattern& pattern) {
    if (pattern.is_constant()) return Json{{"constant", config_token(pattern.cells[0])}};
    Json cells = Json::array();
    for (SiteConfig c : pattern.cells) cells.push_back(config_token(c));
    return Json{{"periodic", cells}};
}

static ConfigPattern pattern_from_json(const Json& doc) {
    if (doc.contains("constant"))
        return ConfigPattern::constant(parse_config_token(doc.at("constant").get<std::string>()));
    if (doc.contains("periodic")) {
        std::vector<SiteConfig> cells;
        for (const auto& tok : doc.at("periodic"))
            cells.push_back(parse_config_token(tok.get<std::string>()));
        return ConfigPattern::periodic(std::move(cells));
    }
    throw SpecError("tail must be {\"constant\": token} or {\"periodic\": [tokens]}");
}

Json environment_to_json(const EnvironmentSpec& spec) {
    Json doc;
    doc["left_tail"] = pattern_to_json(spec.left_tail);
    doc["right_tail"] = pattern_to_json(spec.right_tail);
    Json ovr = Json::object();
    for (const auto& [x, c] : spec.overrides) ovr[std::to_string(x)] = config_token(c);
    doc["overrides"] = ovr;
    return doc;
}

EnvironmentSpec environment_from_json(const Json& doc) {
    ConfigPattern left = doc.contains("left_tail") ? pattern_from_json(doc.at("left_tail"))
                                                   : ConfigPattern::constant({Mode::Q, 0});
    ConfigPattern right = doc.contains("right_tail") ? pattern_from_json(doc.at("right_tail"))
                                                     : ConfigPattern::constant({Mode::Q, 0});
    std::map<std::int64_t, SiteConfig> overrides;
    if (doc.contains("overrides")) {
        for (const auto& [key, tok] : doc.at("overrides").items()) {
            std::int64_t x = 0;
            const auto res = std::from_chars(key.data(), key.data() + key.size(), x);
            if (res.ec != std::errc{} || res.ptr != key.data() + key.size())
                throw SpecError("override key '" + key + "' is not an integer site index");
            overrides[x] = parse_config_token(tok.get<std::string>());
        }
    }
    return EnvironmentSpec::with_overrides(std::move(left), std::move(right),
                                           std::move(overrides));
}

Json classification_to_json(const Classification& c) {
    Json doc;
    doc["verdict"] = verdict_name(c.verdict);
    doc["rule"] = c.rule;
    Json certs = Json::object();
    for (const auto& [k, v] : c.certificates) certs[k] = v;
    doc["certificates"] = certs;
    if (!c.note.empty()) doc["note"] = c.note;
    return doc;
}

Json estimate_to_json(const Estimate& e) {
    return Json{{"mean", e.mean},
                {"stderr", e.std_error},
                {"n_samples", e.n_samples},
                {"seed", e.seed},
                {"config_digest", e.config_digest}};
}

Json direction_to_json(const DirectionEstimate& d) {
    return Json{{"f_right", d.f_right},      {"f_left", d.f_left},
                {"f_timeout", d.f_timeout},  {"n_reps", d.n_reps},
                {"seed", d.seed},            {"config_digest", d.config_digest}};
}

Json run_outcome_to_json(const RunOutcome& out) {
    Json doc;
    switch (out.kind) {
        case OutcomeKind::HitRightBarrier: doc["outcome"] = "hit_right_barrier"; break;
        case OutcomeKind::HitLeftBarrier: doc["outcome"] = "hit_left_barrier"; break;
        case OutcomeKind::StepBudgetExhausted: doc["outcome"] = "budget_exhausted"; break;
    }
    doc["final_position"] = out.final_position;
    doc["steps"] = out.steps;
    doc["seed"] = out.seed;
    doc["min_position"] = out.min_position;
    doc["max_position"] = out.max_position;
    return doc;
}

std::string matrix_to_csv(const TransitionMatrix& m) {
    std::string csv = "state";
    for (const auto& label : m.labels) csv += "," + label;
    csv += "\n";
    for (std::size_t r = 0; r < m.rows.size(); ++r) {
        csv += m.labels[r];
        for (double v : m.rows[r]) csv += "," + format_double(v);
        csv += "\n";
    }
    return csv;
}

std::string distribution_to_csv(const std::vector<std::string>& states,
                                const std::vector<double>& probs) {
    std::string csv = "state,probability\n";
    for (std::size_t i = 0; i < states.size(); ++i)
        csv += states[i] + "," + format_double(probs[i]) + "\n";
    return csv;
}

std::string trajectory_to_csv(const std::vector<std::int64_t>& positions) {
    std::string csv = "n,position\n";
    for (std::size_t n = 0; n < positions.size(); ++n)
        csv += std::to_string(n) + "," + std::to_string(positions[n]) + "\n";
    return csv;
}

std::string counters_to_csv(const std::vector<SiteCounters>& counters) {
    std::string csv = "x,N,R,L\n";
    for (const SiteCounters& sc : counters)
        csv += std::to_string(sc.site) + "," + std::to_string(sc.visits) + "," +
               std::to_string(sc.rights) + "," + std::to_string(sc.lefts) + "\n";
    return csv;
}

}  // namespace feedwalk
