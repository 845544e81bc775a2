#include "resci/inference/effect.hpp"

#include <map>
#include <set>
#include <stdexcept>

#include "resci/stats/normal.hpp"

namespace resci::inference {

std::string_view to_string(AdjustPolicy policy) {
    return policy == AdjustPolicy::parents_only ? "parents_only" : "parents_plus_tier_block";
}

std::optional<AdjustPolicy> parse_adjust_policy(std::string_view text) {
    if (text == "parents" || text == "parents_only") return AdjustPolicy::parents_only;
    if (text == "tier_block" || text == "parents_plus_tier_block") return AdjustPolicy::parents_plus_tier_block;
    return std::nullopt;
}

EffectEstimator::EffectEstimator(const stats::DataMatrix& x, int exposure, int outcome)
    : x_(&x), exposure_(exposure), outcome_(outcome) {
    const int d = x.num_variables();
    if (exposure < 0 || exposure >= d || outcome < 0 || outcome >= d)
        throw std::invalid_argument("exposure or outcome out of range");
    if (exposure == outcome) throw std::invalid_argument("exposure and outcome must differ");
}

const std::optional<stats::EffectEstimate>& EffectEstimator::estimate(NodeSet adjust) {
    auto [it, inserted] = cache_.try_emplace(adjust.mask());
    if (inserted) {
        try {
            it->second = stats::ols_effect(*x_, exposure_, outcome_, adjust);
        } catch (const stats::SingularMatrixError&) {
            it->second = std::nullopt;
        }
    }
    return it->second;
}

NodeSet adjustment_set(NodeSet parents, int exposure, AdjustPolicy policy, const graph::TierOrder& tiers) {
    NodeSet adjust = parents;
    if (policy == AdjustPolicy::parents_plus_tier_block && tiers.num_nodes() > 0) adjust |= tiers.earlier_than(exposure);
    return adjust.without(exposure);
}

GraphEstimates estimates_for_graph(EffectEstimator& estimator, const graph::MixedGraph& c, AdjustPolicy policy,
                                   const graph::TierOrder& tiers, int cap) {
    const int exposure = estimator.exposure();
    const int outcome = estimator.outcome();
    if (c.num_nodes() != estimator.data().num_variables())
        throw std::invalid_argument("graph and data disagree on the number of variables");
    if (tiers.num_nodes() > 0 && tiers.tier(outcome) < tiers.tier(exposure))
        throw std::invalid_argument("outcome lies in an earlier tier than the exposure");

    const graph::DagEnumeration dags = graph::enumerate_dags(c, cap);
    GraphEstimates out;
    out.num_dags = static_cast<int>(dags.dags.size());
    out.overflow = dags.overflow;

    std::set<std::uint64_t> parent_sets;
    for (const auto& dag : dags.dags) parent_sets.insert(dag.parents(exposure).mask());

    std::set<std::uint64_t> seen;
    bool zero_added = false;
    for (std::uint64_t mask : parent_sets) {
        const NodeSet parents = NodeSet::from_mask(mask);
        if (parents.contains(outcome)) {
            // The outcome causes the exposure, so the exposure has no effect on it.
            if (!zero_added) out.estimates.push_back(stats::EffectEstimate{0.0, 0.0, parents});
            zero_added = true;
            continue;
        }
        const NodeSet adjust = adjustment_set(parents, exposure, policy, tiers);
        if (!seen.insert(adjust.mask()).second) continue;
        const auto& est = estimator.estimate(adjust);
        if (est) {
            out.estimates.push_back(*est);
        } else {
            out.singular_sets.push_back(adjust);
        }
    }
    return out;
}

std::vector<int> screen(const discovery::ResampleBatch& batch, graph::ValidityLevel level,
                        const graph::BackgroundKnowledge& bk, const graph::TierOrder& tiers) {
    std::vector<int> kept;
    for (std::size_t m = 0; m < batch.runs.size(); ++m)
        if (graph::is_valid_cpdag(batch.runs[m].graph, level, bk, tiers)) kept.push_back(static_cast<int>(m));
    return kept;
}

Interval wald_interval(const stats::EffectEstimate& e, double multiplier) {
    return Interval{e.beta - multiplier * e.se, e.beta + multiplier * e.se};
}

double alpha1_for(double gamma, double nu) {
    if (!(nu > 0.0 && gamma > nu && gamma < 1.0)) throw std::invalid_argument("need 0 < nu < gamma < 1");
    return gamma - nu;
}

std::optional<IntervalUnion> aggregate_ci(const std::vector<GraphEstimates>& per_graph, double gamma, double nu) {
    const double z = stats::upper_quantile(alpha1_for(gamma, nu) / 2.0);
    std::vector<Interval> parts;
    for (const auto& g : per_graph)
        for (const auto& e : g.estimates) parts.push_back(wald_interval(e, z));
    if (parts.empty()) return std::nullopt;
    return IntervalUnion(std::move(parts));
}

NaiveResult naive_ci(EffectEstimator& estimator, discovery::FisherZTable& table, double alpha, double gamma,
                     const graph::TierOrder& tiers, const graph::BackgroundKnowledge& bk, const NaiveOptions& options) {
    if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must be in (0, 1)");
    discovery::FisherZTest test(table, alpha);
    discovery::PcOptions pc;
    pc.max_cond_size = options.max_cond_size;
    pc.orient_mode = options.orient_mode;
    NaiveResult out;
    out.graph = discovery::pc_stable_tiered(test, tiers, bk, pc).graph;
    out.invalidity = graph::check_cpdag(out.graph, options.level, bk, tiers);
    if (out.invalidity != graph::Invalidity::none) return out;
    out.estimates = estimates_for_graph(estimator, out.graph, options.policy, tiers, options.cap);
    const double z = stats::upper_quantile(gamma / 2.0);
    std::vector<Interval> parts;
    for (const auto& e : out.estimates.estimates) parts.push_back(wald_interval(e, z));
    if (!parts.empty()) out.ci = IntervalUnion(std::move(parts));
    return out;
}

Interval oracle_ci(const stats::DataMatrix& x, const graph::Dag& truth, double gamma, int exposure, int outcome) {
    if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must be in (0, 1)");
    if (truth.num_nodes() != x.num_variables()) throw std::invalid_argument("DAG and data disagree on the number of variables");
    const NodeSet parents = truth.parents(exposure);
    if (parents.contains(outcome)) return Interval{0.0, 0.0};
    return wald_interval(stats::ols_effect(x, exposure, outcome, parents), stats::upper_quantile(gamma / 2.0));
}

bool AggregationReport::any_overflow() const {
    for (const auto& g : per_graph)
        if (g.overflow) return true;
    return false;
}

double AggregationReport::kept_fraction() const {
    return screening.empty() ? 0.0 : static_cast<double>(kept.size()) / static_cast<double>(screening.size());
}

AggregationReport aggregate_batch(const discovery::ResampleBatch& batch, const discovery::ResampleConfig& cfg,
                                  EffectEstimator& estimator, const EffectQuery& query,
                                  const graph::TierOrder& tiers, const graph::BackgroundKnowledge& bk) {
    if (query.exposure != estimator.exposure() || query.outcome != estimator.outcome())
        throw std::invalid_argument("query and estimator disagree on exposure/outcome");
    AggregationReport report;
    report.config = cfg;
    report.query = query;
    report.alpha1 = alpha1_for(query.gamma, cfg.nu);
    report.L = batch.L;
    report.tau = batch.tau;
    report.threshold = batch.threshold;
    report.clamp_count = batch.clamp_count;

    std::map<std::vector<std::uint8_t>, std::size_t> memo;
    std::vector<GraphEstimates> distinct;
    for (std::size_t m = 0; m < batch.runs.size(); ++m) {
        const auto& g = batch.runs[m].graph;
        const auto reason = graph::check_cpdag(g, query.level, bk, tiers);
        report.screening.push_back(reason);
        if (reason != graph::Invalidity::none) continue;
        report.kept.push_back(static_cast<int>(m));
        auto [it, inserted] = memo.try_emplace(g.raw_marks(), distinct.size());
        if (inserted) distinct.push_back(estimates_for_graph(estimator, g, query.policy, tiers, query.cap));
        report.per_graph.push_back(distinct[it->second]);
    }
    report.ci = aggregate_ci(report.per_graph, query.gamma, cfg.nu);
    return report;
}

std::optional<std::size_t> choose_c_star(const std::vector<KeptRow>& table) {
    std::optional<std::size_t> best;
    for (std::size_t k = 0; k < table.size(); ++k) {
        if (table[k].kept == 0) continue;
        if (!best || table[k].kept_fraction() < table[*best].kept_fraction()) best = k;
    }
    return best;
}

std::optional<double> HeuristicResult::chosen_c_star() const {
    if (!chosen) return std::nullopt;
    return table[*chosen].c_star;
}

namespace {

template <typename RunBatch>
HeuristicResult sweep_grid(const std::vector<double>& grid, const discovery::ResampleConfig& tmpl,
                           const graph::TierOrder& tiers, const graph::BackgroundKnowledge& bk,
                           graph::ValidityLevel level, RunBatch&& run_batch) {
    if (grid.empty()) throw std::invalid_argument("c* grid is empty");
    for (std::size_t k = 1; k < grid.size(); ++k)
        if (!(grid[k] > grid[k - 1])) throw std::invalid_argument("c* grid must be strictly increasing");
    HeuristicResult out;
    for (double c : grid) {
        discovery::ResampleConfig cfg = tmpl;
        cfg.c_star = c;
        auto batch = run_batch(cfg);
        out.table.push_back(KeptRow{c, static_cast<int>(screen(batch, level, bk, tiers).size()), cfg.M});
        out.batches.push_back(std::move(batch));
    }
    out.chosen = choose_c_star(out.table);
    return out;
}

}  // namespace

HeuristicResult c_star_heuristic(discovery::FisherZTable& table, const std::vector<double>& grid,
                                 const discovery::ResampleConfig& tmpl, const graph::TierOrder& tiers,
                                 const graph::BackgroundKnowledge& bk, graph::ValidityLevel level) {
    return sweep_grid(grid, tmpl, tiers, bk, level, [&](const discovery::ResampleConfig& cfg) {
        return discovery::resampled_pc_runs(table, cfg, tiers, bk);
    });
}

HeuristicResult c_star_heuristic(const stats::GaussianSuffStats& stats, const std::vector<double>& grid,
                                 const discovery::ResampleConfig& tmpl, const graph::TierOrder& tiers,
                                 const graph::BackgroundKnowledge& bk, graph::ValidityLevel level, int jobs) {
    return sweep_grid(grid, tmpl, tiers, bk, level, [&](const discovery::ResampleConfig& cfg) {
        return discovery::resampled_pc_runs(stats, cfg, tiers, bk, jobs);
    });
}

}  // namespace resci::inference
