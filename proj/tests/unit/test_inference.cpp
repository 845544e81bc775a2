#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "resci/inference/effect.hpp"
#include "resci/inference/report_json.hpp"
#include "resci/simulation/sem.hpp"
#include "resci/stats/normal.hpp"

using namespace resci;
using namespace resci::inference;
using graph::Dag;
using graph::MixedGraph;
using graph::TierOrder;

namespace {

stats::DataMatrix chain_data(int n, std::uint64_t seed, double a = 0.8, double b = 0.6) {
    simulation::Rng rng(seed);
    std::normal_distribution<double> z;
    Eigen::MatrixXd v(n, 3);
    for (int r = 0; r < n; ++r) {
        v(r, 0) = z(rng);
        v(r, 1) = a * v(r, 0) + z(rng);
        v(r, 2) = b * v(r, 1) + z(rng);
    }
    return stats::DataMatrix(v);
}

stats::EffectEstimate est(double beta, double se) { return stats::EffectEstimate{beta, se, {}}; }

}  // namespace

TEST(IntervalUnion, MergesAndMeasures) {
    IntervalUnion u({{3, 4}, {0, 1}, {0.5, 2}, {2, 2.5}});
    ASSERT_EQ(u.components().size(), 2U);
    EXPECT_EQ(u.components()[0], (Interval{0, 2.5}));
    EXPECT_EQ(u.components()[1], (Interval{3, 4}));
    EXPECT_DOUBLE_EQ(u.total_length(), 3.5);
    EXPECT_DOUBLE_EQ(u.hull_length(), 4.0);
    EXPECT_EQ(*u.hull(), (Interval{0, 4}));
    EXPECT_TRUE(u.contains(2.5));
    EXPECT_FALSE(u.contains(2.75));
    EXPECT_TRUE(u.contains(4.0));
    EXPECT_FALSE(u.contains(-0.1));
    EXPECT_FALSE(IntervalUnion().hull());
    EXPECT_THROW(IntervalUnion({{1, 0}}), std::invalid_argument);
    EXPECT_THROW(IntervalUnion({{0, INFINITY}}), std::invalid_argument);
}

TEST(IntervalUnion, AddIsOrderIndependent) {
    std::mt19937_64 rng(61);
    std::uniform_real_distribution<double> pos(0, 10), len(0, 1.5);
    for (int rep = 0; rep < 100; ++rep) {
        std::vector<Interval> parts;
        for (int k = 0; k < 8; ++k) {
            const double lo = pos(rng);
            parts.push_back({lo, lo + len(rng)});
        }
        const IntervalUnion all(parts);
        IntervalUnion a, b;
        for (std::size_t k = 0; k < parts.size(); ++k) (k % 2 ? a : b).add(parts[k]);
        b.add(a);
        EXPECT_EQ(b, all);
        std::shuffle(parts.begin(), parts.end(), rng);
        EXPECT_EQ(IntervalUnion(parts), all);
    }
}

TEST(IntervalUnion, TotalLengthMatchesGridIntegration) {
    std::mt19937_64 rng(62);
    std::uniform_real_distribution<double> pos(0, 1), len(0, 0.2);
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<Interval> parts;
        for (int k = 0; k < 6; ++k) {
            const double lo = pos(rng);
            parts.push_back({lo, lo + len(rng)});
        }
        const IntervalUnion u(parts);
        // Midpoint rule on the indicator of the union, 2e6 cells over [0, 1.2].
        const int cells = 2'000'000;
        const double h = 1.2 / cells;
        long inside = 0;
        for (int c = 0; c < cells; ++c) {
            const double x = (c + 0.5) * h;
            bool any = false;
            for (const auto& p : parts) any = any || p.contains(x);
            inside += any;
        }
        EXPECT_NEAR(u.total_length(), inside * h, 1e-6);
        for (const auto& p : parts) {
            EXPECT_TRUE(u.contains(p.lo));
            EXPECT_TRUE(u.contains(p.hi));
            EXPECT_TRUE(u.contains(0.5 * (p.lo + p.hi)));
        }
    }
}

TEST(Aggregate, SingleEstimate) {
    GraphEstimates g;
    g.estimates.push_back(est(1.0, 0.1));
    const auto ci = aggregate_ci({g}, 0.05, 0.025);
    ASSERT_TRUE(ci);
    ASSERT_EQ(ci->components().size(), 1U);
    const double z = stats::upper_quantile(0.0125);
    EXPECT_NEAR(z, 2.2414, 1e-4);
    EXPECT_NEAR(ci->components()[0].lo, 1.0 - z * 0.1, 1e-15);
    EXPECT_NEAR(ci->components()[0].hi, 1.0 + z * 0.1, 1e-15);
}

TEST(Aggregate, IdempotentAndDisjoint) {
    GraphEstimates one;
    one.estimates.push_back(est(1.0, 0.1));
    EXPECT_EQ(*aggregate_ci({one, one}, 0.05, 0.025), *aggregate_ci({one}, 0.05, 0.025));
    GraphEstimates two;
    two.estimates = {est(0.0, 0.1), est(5.0, 0.2)};
    const auto ci = aggregate_ci({two}, 0.05, 0.025);
    const double z = stats::upper_quantile(0.0125);
    EXPECT_EQ(ci->components().size(), 2U);
    EXPECT_NEAR(ci->total_length(), 2 * z * 0.1 + 2 * z * 0.2, 1e-12);
    EXPECT_FALSE(aggregate_ci({}, 0.05, 0.025));
    EXPECT_FALSE(aggregate_ci({GraphEstimates{}}, 0.05, 0.025));
}

TEST(Aggregate, Alpha1Wiring) {
    EXPECT_DOUBLE_EQ(alpha1_for(0.05, 0.025), 0.025);
    EXPECT_THROW(alpha1_for(0.05, 0.05), std::invalid_argument);
    EXPECT_THROW(alpha1_for(0.05, 0.0), std::invalid_argument);
    GraphEstimates g;
    g.estimates.push_back(est(0.3, 0.2));
    double prev = 0.0;
    for (double nu : {0.001, 0.01, 0.025, 0.04, 0.049}) {
        const double len = aggregate_ci({g}, 0.05, nu)->total_length();
        EXPECT_GE(len, prev);
        prev = len;
    }
}

TEST(Estimates, ChainCpdagGivesTwoParentSets) {
    const auto x = chain_data(1000, 63);
    EffectEstimator estimator(x, 1, 2);
    MixedGraph c(3);
    c.set_undirected(0, 1);
    c.set_undirected(1, 2);
    const auto r = estimates_for_graph(estimator, c);
    EXPECT_EQ(r.num_dags, 3);
    // Parent sets of node 1 are {0}, {} and {2}; the last holds the outcome, so its effect is exactly zero.
    ASSERT_EQ(r.estimates.size(), 3U);
    std::set<std::uint64_t> sets;
    for (const auto& e : r.estimates) {
        sets.insert(e.adjust.mask());
        if (e.adjust == NodeSet{2}) {
            EXPECT_EQ(e.beta, 0.0);
            EXPECT_EQ(e.se, 0.0);
        } else {
            EXPECT_EQ(e, *estimator.estimate(e.adjust));
        }
    }
    EXPECT_EQ(sets, (std::set<std::uint64_t>{NodeSet{}.mask(), NodeSet{0}.mask(), NodeSet{2}.mask()}));
}

TEST(Estimates, OutcomeParentGivesZero) {
    const auto x = chain_data(200, 64);
    EffectEstimator estimator(x, 1, 0);
    MixedGraph c(3);
    c.set_undirected(0, 1);
    c.set_undirected(1, 2);
    const auto r = estimates_for_graph(estimator, c);
    // Parent sets of node 1: {0} (zero effect), {} and {2}.
    ASSERT_EQ(r.estimates.size(), 3U);
    int zeros = 0;
    for (const auto& e : r.estimates) zeros += e.beta == 0.0 && e.se == 0.0;
    EXPECT_EQ(zeros, 1);
    EXPECT_THROW(estimates_for_graph(estimator, c, AdjustPolicy::parents_only, TierOrder({1, 2, 2})),
                 std::invalid_argument);
}

TEST(Estimates, DirectedGraphSingleEstimate) {
    const auto x = chain_data(5000, 65);
    EffectEstimator estimator(x, 1, 2);
    MixedGraph c(3);
    c.set_directed(0, 1);
    c.set_directed(1, 2);
    const auto r = estimates_for_graph(estimator, c, AdjustPolicy::parents_only, TierOrder({1, 2, 3}));
    ASSERT_EQ(r.estimates.size(), 1U);
    EXPECT_EQ(r.estimates[0].adjust, (NodeSet{0}));
    EXPECT_NEAR(r.estimates[0].beta, 0.6, 4 * r.estimates[0].se);
}

TEST(Estimates, TierBlockPolicy) {
    const TierOrder tiers({1, 1, 2, 2, 3});
    EXPECT_EQ(adjustment_set({3}, 2, AdjustPolicy::parents_only, tiers), (NodeSet{3}));
    EXPECT_EQ(adjustment_set({3}, 2, AdjustPolicy::parents_plus_tier_block, tiers), (NodeSet{0, 1, 3}));
    EXPECT_EQ(parse_adjust_policy("tier_block"), AdjustPolicy::parents_plus_tier_block);
    EXPECT_EQ(parse_adjust_policy("parents"), AdjustPolicy::parents_only);
    EXPECT_FALSE(parse_adjust_policy("bogus"));
}

TEST(Estimates, SingularSetsAreSkipped) {
    Eigen::MatrixXd v = chain_data(100, 66).values();
    Eigen::MatrixXd w(100, 4);
    w << v, v.col(0);
    const stats::DataMatrix x(w);
    EffectEstimator estimator(x, 3, 2);
    MixedGraph c(4);
    c.set_directed(0, 3);
    c.set_directed(1, 3);
    c.set_directed(0, 1);
    c.set_directed(1, 2);
    const auto r = estimates_for_graph(estimator, c);
    EXPECT_TRUE(r.estimates.empty());
    ASSERT_EQ(r.singular_sets.size(), 1U);
    EXPECT_EQ(r.singular_sets[0], (NodeSet{0, 1}));
}

TEST(Screen, Examples) {
    discovery::ResampleBatch batch;
    const Dag dag(3, {{0, 1}, {1, 2}});
    const MixedGraph good = graph::cpdag_from_dag(dag);
    MixedGraph bi(3);
    bi.set_bidirected(0, 1);
    bi.set_undirected(1, 2);
    for (const auto& g : {good, bi, good}) batch.runs.push_back(discovery::DiscoveryResult{g, {}, {}});
    EXPECT_EQ(screen(batch, graph::ValidityLevel::strict), (std::vector<int>{0, 2}));
    graph::BackgroundKnowledge bk;
    bk.add_required_adjacency(0, 2);
    EXPECT_TRUE(screen(batch, graph::ValidityLevel::basic, bk).empty());
}

TEST(Naive, MultiplierAndAgreementWithOracle) {
    EXPECT_NEAR(stats::upper_quantile(0.025), 1.959964, 1e-6);
    // Strong signal on a v-structure 0 -> 2 <- 1: PC recovers it, so naive = oracle.
    simulation::Rng rng(67);
    std::normal_distribution<double> z;
    const int n = 3000;
    Eigen::MatrixXd v(n, 3);
    for (int r = 0; r < n; ++r) {
        v(r, 0) = z(rng);
        v(r, 1) = z(rng);
        v(r, 2) = 0.7 * v(r, 0) + 0.7 * v(r, 1) + z(rng);
    }
    const stats::DataMatrix x(v);
    EffectEstimator estimator(x, 0, 2);
    discovery::FisherZTable table(stats::correlation_from_data(x), true);
    const auto naive = naive_ci(estimator, table, 0.01, 0.05, TierOrder::trivial(3), {});
    ASSERT_TRUE(naive.ci);
    const Interval oracle = oracle_ci(x, Dag(3, {{0, 2}, {1, 2}}), 0.05, 0, 2);
    ASSERT_EQ(naive.ci->components().size(), 1U);
    EXPECT_NEAR(naive.ci->components()[0].lo, oracle.lo, 1e-12);
    EXPECT_NEAR(naive.ci->components()[0].hi, oracle.hi, 1e-12);
}

TEST(Naive, InvalidOutputGivesNoInterval) {
    // 0 -> 1 <- L -> 2 <- 3 with L hidden: both colliders claim the 1 - 2 edge.
    simulation::Rng rng(68);
    std::normal_distribution<double> z;
    const int n = 3000;
    Eigen::MatrixXd v(n, 4);
    for (int r = 0; r < n; ++r) {
        const double latent = z(rng);
        v(r, 0) = z(rng);
        v(r, 3) = z(rng);
        v(r, 1) = 0.8 * v(r, 0) + 0.8 * latent + z(rng);
        v(r, 2) = 0.8 * v(r, 3) + 0.8 * latent + z(rng);
    }
    const stats::DataMatrix x(v);
    EffectEstimator estimator(x, 0, 1);
    discovery::FisherZTable table(stats::correlation_from_data(x), true);
    const auto naive = naive_ci(estimator, table, 0.01, 0.05, TierOrder::trivial(4), {});
    EXPECT_TRUE(naive.graph.has_bidirected(1, 2));
    EXPECT_EQ(naive.invalidity, graph::Invalidity::bidirected_edge);
    EXPECT_FALSE(naive.ci);
}

TEST(Oracle, Examples) {
    Eigen::MatrixXd v = chain_data(100, 69).values();
    v.col(2) = 1.5 * v.col(1) + 0.4 * v.col(0);
    const stats::DataMatrix x(v);
    const Interval noiseless = oracle_ci(x, Dag(3, {{0, 1}, {1, 2}, {0, 2}}), 0.05, 1, 2);
    EXPECT_NEAR(noiseless.lo, 1.5, 1e-9);
    EXPECT_NEAR(noiseless.hi, 1.5, 1e-9);

    const auto y = chain_data(500, 70);
    const Interval simple = oracle_ci(y, Dag(3, {{0, 1}, {1, 2}}), 0.05, 0, 2);
    const auto e = stats::ols_effect(y, 0, 2, {});
    EXPECT_NEAR(simple.lo, e.beta - 1.959963984540054 * e.se, 1e-12);
    EXPECT_EQ(oracle_ci(y, Dag(3, {{0, 1}, {1, 2}}), 0.05, 1, 0), (Interval{0, 0}));
}

TEST(Aggregate, ContainsTrueGraphInterval) {
    // Chain data; a batch made of the true CPDAG must contain the true-parent interval at alpha1.
    const auto x = chain_data(800, 71);
    const Dag truth(3, {{0, 1}, {1, 2}});
    discovery::ResampleBatch batch;
    batch.runs.push_back({graph::cpdag_from_dag(truth), {}, {}});
    batch.runs.push_back({graph::cpdag_from_dag(Dag(3, {{0, 1}, {0, 2}, {1, 2}})), {}, {}});
    discovery::ResampleConfig cfg;
    EffectQuery q;
    q.exposure = 1;
    q.outcome = 2;
    EffectEstimator estimator(x, 1, 2);
    const auto report = aggregate_batch(batch, cfg, estimator, q, TierOrder::trivial(3), {});
    ASSERT_TRUE(report.ci);
    EXPECT_EQ(report.kept, (std::vector<int>{0, 1}));
    EXPECT_DOUBLE_EQ(report.alpha1, 0.025);
    const Interval truth_iv = wald_interval(stats::ols_effect(x, 1, 2, {0}), stats::upper_quantile(0.0125));
    EXPECT_TRUE(report.ci->contains(truth_iv.lo));
    EXPECT_TRUE(report.ci->contains(truth_iv.hi));
    for (const auto& g : report.per_graph)
        for (const auto& e : g.estimates) {
            const Interval iv = wald_interval(e, stats::upper_quantile(0.0125));
            EXPECT_TRUE(report.ci->contains(iv.lo) && report.ci->contains(iv.hi));
        }
    const auto j = to_json(report, {"A", "B", "C"});
    EXPECT_EQ(j["kept_count"], 2);
    EXPECT_EQ(j["status"], "ok");
    EXPECT_DOUBLE_EQ(j["alpha1"].get<double>(), 0.025);
}

TEST(Heuristic, ChoosesSmallestPositiveKept) {
    EXPECT_EQ(choose_c_star({{0.01, 5, 50}}), 0U);
    EXPECT_EQ(choose_c_star({{0.01, 5, 50}, {0.02, 3, 50}, {0.03, 3, 50}, {0.04, 0, 50}}), 1U);
    EXPECT_FALSE(choose_c_star({{0.01, 0, 50}, {0.02, 0, 50}}));
}

TEST(Heuristic, RunsGridAndValidates) {
    simulation::Rng rng(72);
    const auto wd = simulation::draw_and_scale_weights(simulation::random_dag(6, 2.0, rng), rng);
    discovery::FisherZTable table(stats::correlation_from_data(simulation::sample_sem(wd, 300, rng)), true);
    discovery::ResampleConfig tmpl;
    tmpl.M = 5;
    tmpl.max_adj = 3;
    const auto r = c_star_heuristic(table, {0.01}, tmpl, TierOrder::trivial(6), {});
    ASSERT_EQ(r.table.size(), 1U);
    if (r.table[0].kept > 0) {
        EXPECT_EQ(r.chosen_c_star(), 0.01);
    }
    EXPECT_THROW(c_star_heuristic(table, {}, tmpl, TierOrder::trivial(6), {}), std::invalid_argument);
    EXPECT_THROW(c_star_heuristic(table, {0.02, 0.01}, tmpl, TierOrder::trivial(6), {}), std::invalid_argument);
}
