#pragma once

#include <string>

#include <json.hpp>

#include "feedwalk/analytic.hpp"
#include "feedwalk/chains.hpp"
#include "feedwalk/environment.hpp"
#include "feedwalk/montecarlo.hpp"
#include "feedwalk/walk.hpp"

namespace feedwalk {

using Json = nlohmann::ordered_json;

// Environment document: tails are {"constant": "q0"} or
// {"periodic": ["p0","q0",...]}; overrides map decimal site index to token.
Json environment_to_json(const EnvironmentSpec& spec);
EnvironmentSpec environment_from_json(const Json& doc);

Json classification_to_json(const Classification& c);

Json estimate_to_json(const Estimate& e);
Json direction_to_json(const DirectionEstimate& d);

Json run_outcome_to_json(const RunOutcome& out);

std::string matrix_to_csv(const TransitionMatrix& m);
std::string distribution_to_csv(const std::vector<std::string>& states,
                                const std::vector<double>& probs);
std::string trajectory_to_csv(const std::vector<std::int64_t>& positions);
std::string counters_to_csv(const std::vector<SiteCounters>& counters);

std::string format_double(double v);  // shortest round-trip decimal

}  // namespace feedwalk
