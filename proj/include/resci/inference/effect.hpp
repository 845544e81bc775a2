#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "resci/discovery/resample.hpp"
#include "resci/graph/algorithms.hpp"
#include "resci/inference/interval.hpp"
#include "resci/stats/ols.hpp"

namespace resci::inference {

enum class AdjustPolicy { parents_only, parents_plus_tier_block };

std::string_view to_string(AdjustPolicy policy);
/// Accepts "parents" / "parents_only" and "tier_block" / "parents_plus_tier_block".
std::optional<AdjustPolicy> parse_adjust_policy(std::string_view text);

/// Memoized OLS effects of one exposure on one outcome, keyed by adjustment
/// set. Not thread-safe.
class EffectEstimator {
public:
    /// Throws std::invalid_argument on bad or equal exposure/outcome.
    EffectEstimator(const stats::DataMatrix& x, int exposure, int outcome);

    /// nullopt when the regression is singular.
    const std::optional<stats::EffectEstimate>& estimate(NodeSet adjust);

    const stats::DataMatrix& data() const { return *x_; }
    int exposure() const { return exposure_; }
    int outcome() const { return outcome_; }

private:
    const stats::DataMatrix* x_;
    int exposure_;
    int outcome_;
    std::map<std::uint64_t, std::optional<stats::EffectEstimate>> cache_;
};

/// Adjustment set for an exposure with parent set `parents`. With the tier
/// block policy every node in a tier strictly before the exposure's is added.
NodeSet adjustment_set(NodeSet parents, int exposure, AdjustPolicy policy, const graph::TierOrder& tiers);

/// Estimates of one graph, one per distinct adjustment set across its
/// equivalence class.
struct GraphEstimates {
    std::vector<stats::EffectEstimate> estimates;
    /// Enumerated DAGs (capped).
    int num_dags = 0;
    bool overflow = false;
    /// Adjustment sets skipped because the regression was singular.
    std::vector<NodeSet> singular_sets;
};

/// Enumerates the DAGs of `c`, groups them by the exposure's parent set and
/// regresses once per distinct adjustment set. When the outcome is a parent
/// of the exposure the effect is exactly zero and is reported as beta = 0,
/// se = 0. Throws std::invalid_argument if `c` fails basic validity or the
/// outcome sits in an earlier tier than the exposure.
GraphEstimates estimates_for_graph(EffectEstimator& estimator, const graph::MixedGraph& c,
                                   AdjustPolicy policy = AdjustPolicy::parents_only,
                                   const graph::TierOrder& tiers = {}, int cap = graph::kDefaultEnumerationCap);

/// Indices of runs whose graph passes validity screening.
std::vector<int> screen(const discovery::ResampleBatch& batch, graph::ValidityLevel level,
                        const graph::BackgroundKnowledge& bk = {}, const graph::TierOrder& tiers = {});

/// beta +- multiplier * se.
Interval wald_interval(const stats::EffectEstimate& e, double multiplier);

/// alpha1 = gamma - nu. Throws std::invalid_argument unless 0 < nu < gamma < 1.
double alpha1_for(double gamma, double nu);

/// Union over all estimates of beta +- z_{alpha1/2} se. nullopt ("no valid
/// graphs") when there is no estimate.
std::optional<IntervalUnion> aggregate_ci(const std::vector<GraphEstimates>& per_graph, double gamma, double nu);

struct NaiveOptions {
    graph::ValidityLevel level = graph::ValidityLevel::strict;
    std::optional<int> max_cond_size;
    graph::OrientMode orient_mode = graph::OrientMode::standard;
    AdjustPolicy policy = AdjustPolicy::parents_only;
    int cap = graph::kDefaultEnumerationCap;
};

struct NaiveResult {
    graph::MixedGraph graph;
    graph::Invalidity invalidity = graph::Invalidity::none;
    GraphEstimates estimates;
    /// Absent when the selected graph is invalid or gave no estimate.
    std::optional<IntervalUnion> ci;
};

/// One PC run at level alpha, then Wald intervals at level gamma over the
/// selected graph's equivalence class as if that graph were known.
NaiveResult naive_ci(EffectEstimator& estimator, discovery::FisherZTable& table, double alpha, double gamma,
                     const graph::TierOrder& tiers, const graph::BackgroundKnowledge& bk,
                     const NaiveOptions& options = {});

/// Wald interval at level gamma adjusting for the exposure's parents in the
/// true DAG. Propagates stats::SingularMatrixError.
Interval oracle_ci(const stats::DataMatrix& x, const graph::Dag& truth, double gamma, int exposure, int outcome);

struct EffectQuery {
    int exposure = 0;
    int outcome = 1;
    double gamma = 0.05;
    AdjustPolicy policy = AdjustPolicy::parents_only;
    graph::ValidityLevel level = graph::ValidityLevel::strict;
    int cap = graph::kDefaultEnumerationCap;
};

struct AggregationReport {
    discovery::ResampleConfig config;
    EffectQuery query;
    double alpha1 = 0.0;
    long L = 0;
    double tau = 0.0;
    double threshold = 0.0;
    int clamp_count = 0;
    /// Screening outcome of every run.
    std::vector<graph::Invalidity> screening;
    std::vector<int> kept;
    /// Aligned with `kept`.
    std::vector<GraphEstimates> per_graph;
    std::optional<IntervalUnion> ci;

    bool any_overflow() const;
    double kept_fraction() const;
};

/// Screen, estimate and aggregate one resampled batch. Identical kept graphs
/// are enumerated once.
AggregationReport aggregate_batch(const discovery::ResampleBatch& batch, const discovery::ResampleConfig& cfg,
                                  EffectEstimator& estimator, const EffectQuery& query,
                                  const graph::TierOrder& tiers, const graph::BackgroundKnowledge& bk);

struct KeptRow {
    double c_star = 0.0;
    int kept = 0;
    int M = 0;
    double kept_fraction() const { return M > 0 ? static_cast<double>(kept) / M : 0.0; }
};

/// Grid index with the smallest positive kept fraction, ties to the smaller
/// c*. nullopt when no grid point kept anything.
std::optional<std::size_t> choose_c_star(const std::vector<KeptRow>& table);

struct HeuristicResult {
    std::vector<KeptRow> table;
    std::optional<std::size_t> chosen;
    /// One batch per grid point.
    std::vector<discovery::ResampleBatch> batches;

    std::optional<double> chosen_c_star() const;
};

/// Resampled runs and screening at every grid point. The template's c_star is
/// replaced by each grid value; everything else, including the seed, is
/// shared. Throws std::invalid_argument on an empty or non-increasing grid.
HeuristicResult c_star_heuristic(discovery::FisherZTable& table, const std::vector<double>& grid,
                                 const discovery::ResampleConfig& tmpl, const graph::TierOrder& tiers,
                                 const graph::BackgroundKnowledge& bk,
                                 graph::ValidityLevel level = graph::ValidityLevel::strict);

/// Same, with each grid point's runs spread over `jobs` threads.
HeuristicResult c_star_heuristic(const stats::GaussianSuffStats& stats, const std::vector<double>& grid,
                                 const discovery::ResampleConfig& tmpl, const graph::TierOrder& tiers,
                                 const graph::BackgroundKnowledge& bk, graph::ValidityLevel level, int jobs);

}  // namespace resci::inference
