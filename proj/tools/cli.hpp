#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "resci/graph/algorithms.hpp"
#include "resci/simulation/bench.hpp"
#include "resci/stats/data.hpp"

namespace resci::cli {

enum ExitCode : int { kOk = 0, kConfigError = 2, kDataError = 3, kNoValidGraphs = 4 };

/// Bad flags, names or values.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Settings of the discover and effect commands. Field names double as the
/// JSON config keys.
struct RunConfig {
    std::string data;
    /// "A,B:1;C:2"; empty means one tier.
    std::string tiers;
    /// "X->Y" entries.
    std::vector<std::string> forbid;
    /// "A--B" entries.
    std::vector<std::string> require;
    /// Variables to which validity screening is restricted.
    std::vector<std::string> scope;
    std::string exposure;
    std::string outcome;
    double gamma = 0.05;
    double nu = 0.025;
    int M = 50;
    double c_star = 0.01;
    /// Nonempty: choose c* by the kept-percentage heuristic over this grid.
    std::vector<double> grid;
    int max_adj = 7;
    std::optional<int> max_cond_size;
    std::optional<double> truncation;
    bool half_factor = true;
    std::string orient = "standard";
    std::string level = "strict";
    /// "parents", "tier_block" or "both".
    std::string policy = "parents";
    /// discover only: one classical PC run at this level instead of resampling.
    std::optional<double> alpha;
    std::optional<std::uint64_t> seed;
    int cap = graph::kDefaultEnumerationCap;
};

nlohmann::json to_json(const RunConfig& cfg);
/// Throws ConfigError on unknown keys or wrong types.
RunConfig run_config_from_json(const nlohmann::json& j);

nlohmann::json to_json(const simulation::ScenarioConfig& cfg);
simulation::ScenarioConfig scenario_from_json(const nlohmann::json& j);

/// One tier per column from "A,B:1;C:2". Every column must be listed once.
std::vector<int> parse_tier_spec(std::string_view spec, const std::vector<std::string>& names);
/// "X->Y" as (X, Y) column indices.
std::pair<int, int> parse_forbidden(std::string_view text, const std::vector<std::string>& names);
/// "A--B" as (A, B) column indices.
std::pair<int, int> parse_required(std::string_view text, const std::vector<std::string>& names);

/// Default worker count: RESCI_JOBS if set to a positive integer, else 1.
int default_jobs();

/// Runs one command line (args excludes the program name). Results go to
/// `out` unless a file is requested; messages go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace resci::cli
