#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "resci/inference/effect.hpp"

namespace resci::inference {

nlohmann::json to_json(const discovery::ResampleConfig& cfg);
nlohmann::json to_json(const IntervalUnion& u);
nlohmann::json to_json(const std::vector<KeptRow>& table);

/// Config echo, seed, kept indices, per-graph estimates, union components,
/// hull and total length. `names` labels adjustment sets; indices are used
/// when it is empty.
nlohmann::json to_json(const AggregationReport& report, const std::vector<std::string>& names = {});

}  // namespace resci::inference
