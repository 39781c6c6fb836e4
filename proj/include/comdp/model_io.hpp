#pragma once

#include <string>

#include <json.hpp>

#include "comdp/dpi.hpp"
#include "comdp/mdp.hpp"

namespace comdp {

using Json = nlohmann::json;

// On-disk model format: {"n", "m", "agent_actions" (per state, per agent,
// action ids), "transitions" ([{x, u, rows: [{y, p, g}]}]), "horizon"
// ({"type": "finite", "N", "terminal"} or {"type": "infinite", "alpha"}),
// optional "meta" ({"grid": {"h", "flies"}}). Numbers survive a round trip
// bit for bit.
Json model_to_json(const CoMdp& mdp);
CoMdp model_from_json(const Json& j);
void save_model(const CoMdp& mdp, const std::string& path);
CoMdp load_model(const std::string& path);

Json policy_to_json(const JointPolicy& mu);
Json policy_to_json(const NonstationaryPolicy& pi);
JointPolicy stationary_policy_from_json(const Json& j);
NonstationaryPolicy nonstationary_policy_from_json(const Json& j);

// Trace records as single JSON objects (one per line in trace files).
Json record_to_json(const StageStart& start);
Json record_to_json(const DpiIterationRecord& rec);

Json features_to_json(const FeatureMatrix& f);

}  // namespace comdp
