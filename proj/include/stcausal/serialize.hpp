#pragma once

#include <string>

#include <json.hpp>

#include "stcausal/em.hpp"
#include "stcausal/fep.hpp"
#include "stcausal/match.hpp"
#include "stcausal/pathway.hpp"
#include "stcausal/synth.hpp"

namespace stcausal {

using Json = nlohmann::json;

// Artifacts name sensors by their string id; the sensor table maps them back.

Json dataset_to_json(const Dataset& ds);
Dataset dataset_from_json(const Json& j);

Json meteo_to_json(const MeteoSeries& m);
MeteoSeries meteo_from_json(const Json& j);

Json pattern_set_to_json(const PatternSet& ps, const std::vector<SensorMeta>& sensors);
PatternSet pattern_set_from_json(const Json& j, const Dataset& ds);

Json candidate_set_to_json(const CandidateSet& cs, const std::vector<SensorMeta>& sensors);
CandidateSet candidate_set_from_json(const Json& j, const Dataset& ds);

inline constexpr int kModelVersion = 1;
Json model_to_json(const CausalModel& m, const std::vector<SensorMeta>& sensors);
CausalModel model_from_json(const Json& j, const Dataset& ds);

Json pathway_to_json(const PathwayGraph& g, const std::vector<SensorMeta>& sensors);

std::string digraph_to_dot(const Digraph& g, const std::string& name);
std::string truth_to_dot(const TruthGraph& g);

// write-temp-then-rename; creates parent directories.
void atomic_write(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace stcausal
