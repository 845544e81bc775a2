#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "resci/graph/algorithms.hpp"
#include "resci/inference/effect.hpp"

namespace resci::simulation {

struct ScenarioConfig {
    std::string id = "dense";
    int d = 10;
    double expected_neighbors = 7.0;
    int n = 500;
    /// Resampling sizes; each is run over the whole c* grid.
    std::vector<int> Ms{50};
    /// c* grid, strictly increasing.
    std::vector<double> grid{0.01};
    /// Also report the kept-percentage heuristic's choice per replicate.
    bool heuristic = false;
    double nu = 0.025;
    double gamma = 0.05;
    int max_adj = 7;
    std::optional<int> max_cond_size;
    /// One tier per node; empty means a single tier.
    std::vector<int> tiers;
    int replicates = 500;
    std::optional<double> truncation;
    bool half_factor = true;
    int exposure = 0;
    int outcome = 1;
    std::uint64_t master_seed = 0;
    std::vector<double> naive_alphas{0.01, 0.05};
    bool oracle = true;
    graph::ValidityLevel level = graph::ValidityLevel::strict;
    graph::OrientMode orient_mode = graph::OrientMode::standard;

    /// Throws std::invalid_argument when inconsistent.
    void validate() const;
    graph::TierOrder tier_order() const;
};

/// One row of the tidy output.
struct BenchRecord {
    std::string scenario;
    /// "resample", "resample_heuristic", "naive(<alpha>)" or "oracle".
    std::string method;
    /// Absent for methods that do not use c*, and for the heuristic.
    std::optional<double> c_star;
    int M = 0;
    int n = 0;
    /// Among replicates with an interval.
    double coverage = 0.0;
    double avg_length_union = 0.0;
    double avg_length_hull = 0.0;
    /// Mean percentage of kept resampled graphs (resample methods only).
    double kept_pct = 0.0;
    double no_interval_pct = 0.0;
    int replicates = 0;
    std::uint64_t seed = 0;

    /// Not part of the CSV.
    int covered = 0;
    int with_interval = 0;
    /// Sample standard deviation of the union length.
    double length_sd = 0.0;
    /// Mean chosen c* (heuristic only).
    std::optional<double> mean_chosen_c_star;

    double coverage_se() const;
    double length_se() const;
};

/// Outcome of one method on one replicate.
struct MethodOutcome {
    bool has_interval = false;
    bool covered = false;
    double length_union = 0.0;
    double length_hull = 0.0;
    double kept_fraction = 0.0;
    std::optional<double> c_star;
};

struct ReplicateResult {
    double truth = 0.0;
    /// Same order as the records produced by run_scenario.
    std::vector<MethodOutcome> methods;
};

/// Seed salts for the per-replicate streams.
inline constexpr std::uint64_t kDataSalt = 0x64617461;
inline constexpr std::uint64_t kResampleSalt = 0x72657361;

/// One replicate: fresh DAG, weights and data from (master_seed, index).
ReplicateResult run_replicate(const ScenarioConfig& cfg, int index);

/// All replicates on `jobs` workers, aggregated in replicate order, so the
/// result does not depend on `jobs`.
std::vector<BenchRecord> run_scenario(const ScenarioConfig& cfg, int jobs = 1);

/// Aggregates per-replicate results into records (exposed for testing).
std::vector<BenchRecord> summarize(const ScenarioConfig& cfg, const std::vector<ReplicateResult>& results);

inline constexpr const char* kBenchCsvHeader =
    "scenario,method,c_star,M,n,coverage,avg_length_union,avg_length_hull,kept_pct,no_interval_pct,replicates,seed";

void write_bench_csv(std::ostream& out, const std::vector<BenchRecord>& records, bool header = true);
/// Lines starting with '#' are skipped. Throws stats::DataParseError on
/// malformed input.
std::vector<BenchRecord> read_bench_csv(std::istream& in);

/// Dense scenario: d = 10, 7 expected neighbours, tiers (1,1,1,2,2,2,2,2,3,3),
/// effect of node 6 on node 10 (indices 5 and 9), n = 500, M = 50.
ScenarioConfig dense_scenario();
/// The c* grid {0.006, ..., 0.01, 0.02, 0.03, 0.04}.
std::vector<double> c_star_grid();
/// Scenario presets behind each figure: 1 (M = 50 grid), 2 (M = 100 grid),
/// 3 (c* = 0.01, varying n and M), 4 (sparse), 5 (truncated resampling).
/// Throws std::invalid_argument for other numbers.
std::vector<ScenarioConfig> figure_preset(int figure);

}  // namespace resci::simulation
