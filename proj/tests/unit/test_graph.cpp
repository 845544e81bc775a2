#include <gtest/gtest.h>

#include <random>
#include <set>

#include "oracles.hpp"
#include "resci/graph/algorithms.hpp"
#include "resci/graph/graph_io.hpp"

using namespace resci;
using namespace resci::graph;

namespace {

MixedGraph undirected(int d, const std::vector<std::pair<int, int>>& edges) {
    MixedGraph g(d);
    for (auto [a, b] : edges) g.set_undirected(a, b);
    return g;
}

MixedGraph directed(int d, const std::vector<std::pair<int, int>>& edges) {
    MixedGraph g(d);
    for (auto [a, b] : edges) g.set_directed(a, b);
    return g;
}

}  // namespace

TEST(NodeSet, BasicOperations) {
    NodeSet s{0, 3, 5};
    EXPECT_EQ(s.size(), 3);
    EXPECT_TRUE(s.contains(3));
    EXPECT_FALSE(s.contains(4));
    EXPECT_EQ(s.to_string(), "{0,3,5}");
    EXPECT_EQ(s.without(3), (NodeSet{0, 5}));
    EXPECT_EQ(s.front(), 0);
    EXPECT_TRUE((NodeSet{0, 5}).is_subset_of(s));
    EXPECT_EQ(NodeSet::first(3), (NodeSet{0, 1, 2}));
    EXPECT_EQ((s - NodeSet{0}) | NodeSet{1}, (NodeSet{1, 3, 5}));
    EXPECT_THROW(s.insert(64), std::out_of_range);
}

TEST(NodeSet, SubsetsOfSizeCountBinomial) {
    const NodeSet pool{1, 2, 4, 6, 7};
    for (int k = 0; k <= 5; ++k) {
        int count = 0;
        std::set<std::uint64_t> seen;
        for_each_subset_of_size(pool, k, [&](NodeSet s) {
            EXPECT_EQ(s.size(), k);
            EXPECT_TRUE(s.is_subset_of(pool));
            seen.insert(s.mask());
            ++count;
            return false;
        });
        const int expected[] = {1, 5, 10, 10, 5, 1};
        EXPECT_EQ(count, expected[k]);
        EXPECT_EQ(static_cast<int>(seen.size()), expected[k]);
    }
}

TEST(MixedGraph, MarksAndQueries) {
    MixedGraph g(4);
    g.set_directed(2, 0);
    g.set_undirected(1, 2);
    g.set_bidirected(2, 3);
    EXPECT_TRUE(g.has_directed(2, 0));
    EXPECT_FALSE(g.has_directed(0, 2));
    EXPECT_TRUE(g.has_arrowhead(2, 0));
    EXPECT_TRUE(g.has_arrowhead(3, 2));
    EXPECT_EQ(g.parents(0), (NodeSet{2}));
    EXPECT_EQ(g.children(2), (NodeSet{0}));
    EXPECT_EQ(g.undirected_neighbors(2), (NodeSet{1}));
    EXPECT_EQ(g.adjacents(2), (NodeSet{0, 1, 3}));
    EXPECT_EQ(g.num_edges(), 3);
    EXPECT_TRUE(g.has_any_bidirected());
    const auto e = g.edges();
    ASSERT_EQ(e.size(), 3U);
    EXPECT_EQ(e[0], (Edge{2, 0, EdgeKind::directed}));
    EXPECT_EQ(e[1], (Edge{1, 2, EdgeKind::undirected}));
    EXPECT_EQ(e[2], (Edge{2, 3, EdgeKind::bidirected}));
}

TEST(Dag, RejectsCyclesAndSelfLoops) {
    EXPECT_THROW(Dag(3, {{0, 1}, {1, 2}, {2, 0}}), std::invalid_argument);
    EXPECT_THROW(Dag(2, {{1, 1}}), std::invalid_argument);
    EXPECT_THROW(Dag(2, {{0, 1}, {1, 0}}), std::invalid_argument);
    const Dag g(3, {{0, 1}, {1, 2}});
    EXPECT_EQ(g.descendants(0), (NodeSet{1, 2}));
    EXPECT_EQ(g.topological_order(), (std::vector<int>{0, 1, 2}));
}

TEST(IsAcyclic, Examples) {
    EXPECT_TRUE(is_acyclic(directed(2, {{0, 1}})));
    EXPECT_FALSE(is_acyclic(directed(3, {{0, 1}, {1, 2}, {2, 0}})));
    EXPECT_TRUE(is_acyclic(MixedGraph(5)));
    // Undirected edges do not close a directed cycle.
    MixedGraph g = directed(3, {{0, 1}, {1, 2}});
    g.set_undirected(0, 2);
    EXPECT_TRUE(is_acyclic(g));
}

TEST(DSeparation, Examples) {
    const Dag chain(3, {{0, 1}, {1, 2}});
    EXPECT_TRUE(d_separated(chain, 0, 2, {1}));
    EXPECT_FALSE(d_separated(chain, 0, 2, {}));
    const Dag collider(3, {{0, 1}, {2, 1}});
    EXPECT_TRUE(d_separated(collider, 0, 2, {}));
    EXPECT_FALSE(d_separated(collider, 0, 2, {1}));
    EXPECT_THROW(d_separated(chain, 0, 2, {0}), std::invalid_argument);
    EXPECT_THROW(d_separated(chain, 0, 5, {}), std::out_of_range);
}

TEST(DSeparation, DescendantOfColliderOpensPath) {
    const Dag g(4, {{0, 1}, {2, 1}, {1, 3}});
    EXPECT_TRUE(d_separated(g, 0, 2, {}));
    EXPECT_FALSE(d_separated(g, 0, 2, {3}));
}

TEST(DSeparation, AgreesWithPathEnumeration) {
    std::mt19937_64 rng(11);
    for (int rep = 0; rep < 60; ++rep) {
        const int d = 3 + rep % 4;
        const Dag g = test::random_labelled_dag(d, 0.5, rng);
        for (int i = 0; i < d; ++i)
            for (int j = i + 1; j < d; ++j) {
                const NodeSet pool = NodeSet::first(d).without(i).without(j);
                for (std::uint64_t m = 0; m < (std::uint64_t{1} << d); ++m) {
                    const NodeSet s = NodeSet::from_mask(m);
                    if (!s.is_subset_of(pool)) continue;
                    ASSERT_EQ(d_separated(g, i, j, s), test::d_separated_by_paths(g, i, j, s))
                        << "d=" << d << " i=" << i << " j=" << j << " s=" << s.to_string();
                }
            }
    }
}

TEST(Parents, Examples) {
    EXPECT_EQ(parents(Dag(3, {{0, 1}, {2, 1}}), 1), (NodeSet{0, 2}));
    EXPECT_EQ(parents(Dag(3, {{0, 1}, {2, 1}}), 0), NodeSet{});
    EXPECT_EQ(parents(Dag(3, {{0, 1}, {1, 2}}), 2), (NodeSet{1}));
    MixedGraph g = directed(3, {{0, 2}});
    g.set_undirected(1, 2);
    EXPECT_EQ(parents(g, 2), (NodeSet{0}));
}

TEST(VStructures, ColliderRule) {
    const MixedGraph skel = undirected(3, {{0, 1}, {1, 2}});
    SepsetTable empty_sep(3);
    empty_sep.set(0, 2, {});
    const auto r = orient_v_structures(skel, empty_sep, TierOrder::trivial(3), {});
    EXPECT_EQ(r.graph, directed(3, {{0, 1}, {2, 1}}));
    EXPECT_FALSE(r.flags.any_conflict());

    SepsetTable mid_sep(3);
    mid_sep.set(0, 2, {1});
    EXPECT_EQ(orient_v_structures(skel, mid_sep, TierOrder::trivial(3), {}).graph, skel);
}

TEST(VStructures, OpposingCollidersGiveBidirected) {
    // 0 - 1 - 2 - 3 with sepsets that make 1 and 2 colliders on both sides.
    const MixedGraph skel = undirected(4, {{0, 1}, {1, 2}, {2, 3}});
    SepsetTable sep(4);
    sep.set(0, 2, {});
    sep.set(1, 3, {});
    sep.set(0, 3, {});
    const auto r = orient_v_structures(skel, sep, TierOrder::trivial(4), {});
    EXPECT_TRUE(r.graph.has_bidirected(1, 2));
    EXPECT_TRUE(r.graph.has_directed(0, 1));
    EXPECT_TRUE(r.graph.has_directed(3, 2));
    EXPECT_EQ(r.flags.bidirected_conflicts, 1);
    EXPECT_FALSE(is_valid_cpdag(r.graph, ValidityLevel::basic));
}

TEST(VStructures, TierKeepsForcedDirection) {
    // Collider 0 -> 1 <- 2 would put an arrowhead into tier-1 node 1 from tier-2 node 2.
    const MixedGraph skel = undirected(3, {{0, 1}, {1, 2}});
    SepsetTable sep(3);
    sep.set(0, 2, {});
    const TierOrder tiers({1, 1, 2});
    const auto r = orient_v_structures(orient_forced(skel, tiers, {}), sep, tiers, {});
    EXPECT_TRUE(r.graph.has_directed(1, 2));
    EXPECT_EQ(r.flags.background_conflicts, 1);
}

TEST(VStructures, MajorityModeNeedsCallback) {
    VStructureOptions opts;
    opts.mode = OrientMode::majority;
    EXPECT_THROW(orient_v_structures(undirected(3, {{0, 1}, {1, 2}}), SepsetTable(3), TierOrder::trivial(3), {}, opts),
                 std::invalid_argument);
}

TEST(VStructures, MajorityModeUsesCensus) {
    // Truth 0 -> 1 <- 2: every separating set of (0, 2) excludes 1.
    const Dag truth(3, {{0, 1}, {2, 1}});
    VStructureOptions opts;
    opts.mode = OrientMode::majority;
    opts.independent = [&](int i, int j, NodeSet s) { return d_separated(truth, i, j, s); };
    SepsetTable sep(3);
    sep.set(0, 2, {1});  // deliberately wrong recorded sepset
    const auto r = orient_v_structures(undirected(3, {{0, 1}, {1, 2}}), sep, TierOrder::trivial(3), {}, opts);
    EXPECT_EQ(r.graph, directed(3, {{0, 1}, {2, 1}}));
}

TEST(Meek, Examples) {
    MixedGraph r1 = directed(3, {{0, 1}});
    r1.set_undirected(1, 2);
    EXPECT_EQ(apply_meek_rules(r1).graph, directed(3, {{0, 1}, {1, 2}}));

    MixedGraph r2 = directed(3, {{0, 1}, {1, 2}});
    r2.set_undirected(0, 2);
    EXPECT_EQ(apply_meek_rules(r2).graph, directed(3, {{0, 1}, {1, 2}, {0, 2}}));

    EXPECT_EQ(apply_meek_rules(undirected(2, {{0, 1}}), TierOrder({1, 2})).graph, directed(2, {{0, 1}}));
    EXPECT_EQ(apply_meek_rules(undirected(2, {{0, 1}}), TierOrder({2, 1})).graph, directed(2, {{1, 0}}));
}

TEST(Meek, R3AndR4) {
    // R3: 0 - 1, 0 - 2, 0 - 3, 1 -> 3 <- 2 with 1, 2 nonadjacent => 0 -> 3.
    MixedGraph r3 = directed(4, {{1, 3}, {2, 3}});
    r3.set_undirected(0, 1);
    r3.set_undirected(0, 2);
    r3.set_undirected(0, 3);
    EXPECT_TRUE(apply_meek_rules(r3).graph.has_directed(0, 3));

    // R4: 0 - 1, 0 - 2, 0 - 3, 3 -> 2 -> 1 with 1, 3 nonadjacent => 0 -> 1.
    MixedGraph r4 = directed(4, {{3, 2}, {2, 1}});
    r4.set_undirected(0, 1);
    r4.set_undirected(0, 2);
    r4.set_undirected(0, 3);
    EXPECT_TRUE(apply_meek_rules(r4).graph.has_directed(0, 1));
}

TEST(Meek, SkipsBidirected) {
    MixedGraph g(3);
    g.set_bidirected(0, 1);
    g.set_undirected(1, 2);
    const auto r = apply_meek_rules(g);
    EXPECT_TRUE(r.skipped);
    EXPECT_EQ(r.graph, g);
}

TEST(Meek, IdempotentAndMonotone) {
    std::mt19937_64 rng(5);
    std::bernoulli_distribution coin(0.4);
    for (int rep = 0; rep < 200; ++rep) {
        const int d = 4 + rep % 5;
        const Dag dag = test::random_labelled_dag(d, 0.5, rng);
        // Keep the v-structures and a random subset of other orientations of the DAG.
        MixedGraph g = cpdag_from_dag(dag);
        for (auto [a, b] : dag.edges())
            if (g.has_undirected(a, b) && coin(rng)) g.set_directed(a, b);
        const TierOrder tiers(test::random_consistent_tiers(dag, rng));
        const MixedGraph once = apply_meek_rules(g, tiers).graph;
        EXPECT_EQ(apply_meek_rules(once, tiers).graph, once);
        for (const auto& e : g.edges()) {
            if (e.kind == EdgeKind::directed) EXPECT_TRUE(once.has_directed(e.a, e.b));
            EXPECT_TRUE(once.adjacent(e.a, e.b));
        }
        EXPECT_EQ(once.num_edges(), g.num_edges());
        for (const auto& e : once.edges())
            if (e.kind == EdgeKind::directed) EXPECT_LE(tiers.tier(e.a), tiers.tier(e.b));
    }
}

TEST(Cpdag, Examples) {
    EXPECT_EQ(cpdag_from_dag(Dag(3, {{0, 1}, {1, 2}})), undirected(3, {{0, 1}, {1, 2}}));
    EXPECT_EQ(cpdag_from_dag(Dag(3, {{0, 1}, {2, 1}})), directed(3, {{0, 1}, {2, 1}}));
    EXPECT_EQ(cpdag_from_dag(Dag(2, {{0, 1}})), undirected(2, {{0, 1}}));
    EXPECT_THROW(cpdag_from_dag(Dag(2, {{1, 0}}), TierOrder({1, 2})), std::invalid_argument);
}

TEST(Cpdag, DirectedEdgesAreCommonToAllMembers) {
    std::mt19937_64 rng(17);
    for (int rep = 0; rep < 100; ++rep) {
        const int d = 3 + rep % 4;
        const Dag dag = test::random_labelled_dag(d, 0.5, rng);
        const MixedGraph c = cpdag_from_dag(dag);
        const auto members = test::brute_force_members(c.skeleton(), dag);
        // An edge is directed in the CPDAG iff every member agrees on it.
        for (const auto& e : c.edges()) {
            int forward = 0;
            const int lo = std::min(e.a, e.b), hi = std::max(e.a, e.b);
            for (const auto& m : members)
                for (auto [p, ch] : m)
                    if (p == lo && ch == hi) ++forward;
            const bool compelled = forward == 0 || forward == static_cast<int>(members.size());
            EXPECT_EQ(e.kind == EdgeKind::directed, compelled);
        }
    }
}

TEST(Validity, Examples) {
    MixedGraph bi(3);
    bi.set_directed(0, 1);
    bi.set_bidirected(1, 2);
    EXPECT_EQ(check_cpdag(bi, ValidityLevel::basic), Invalidity::bidirected_edge);
    EXPECT_EQ(check_cpdag(directed(3, {{0, 1}, {1, 2}, {2, 0}}), ValidityLevel::basic), Invalidity::directed_cycle);

    BackgroundKnowledge bk;
    bk.add_required_adjacency(0, 2);
    EXPECT_EQ(check_cpdag(undirected(3, {{0, 1}, {1, 2}}), ValidityLevel::strict, bk),
              Invalidity::missing_required_adjacency);
    EXPECT_TRUE(is_valid_cpdag(undirected(3, {{0, 1}, {1, 2}}), ValidityLevel::strict));

    // Directed chain is basic-valid but not a CPDAG.
    EXPECT_TRUE(is_valid_cpdag(directed(3, {{0, 1}, {1, 2}}), ValidityLevel::basic));
    EXPECT_EQ(check_cpdag(directed(3, {{0, 1}, {1, 2}}), ValidityLevel::strict), Invalidity::not_closed);
    // ... unless tiers force it.
    EXPECT_TRUE(is_valid_cpdag(directed(3, {{0, 1}, {1, 2}}), ValidityLevel::strict, {}, TierOrder({1, 2, 3})));

    // Undirected 4-cycle admits no consistent extension.
    EXPECT_EQ(check_cpdag(undirected(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}), ValidityLevel::strict),
              Invalidity::not_extendable);
}

TEST(Validity, ScopeRestrictsCheck) {
    // Bidirected edge outside the scope is ignored.
    MixedGraph g(4);
    g.set_undirected(0, 1);
    g.set_bidirected(2, 3);
    BackgroundKnowledge bk;
    bk.validity_scope = NodeSet{0, 1};
    EXPECT_TRUE(is_valid_cpdag(g, ValidityLevel::strict, bk));
    bk.validity_scope = NodeSet{1, 2, 3};
    EXPECT_FALSE(is_valid_cpdag(g, ValidityLevel::basic, bk));
}

TEST(Validity, RoundTripRandomDags) {
    std::mt19937_64 rng(23);
    for (int rep = 0; rep < 200; ++rep) {
        const int d = 2 + rep % 7;
        const Dag dag = test::random_labelled_dag(d, 0.45, rng);
        const TierOrder tiers(test::random_consistent_tiers(dag, rng));
        for (const TierOrder& t : {TierOrder::trivial(d), tiers}) {
            const MixedGraph c = cpdag_from_dag(dag, t);
            EXPECT_TRUE(is_valid_cpdag(c, ValidityLevel::basic, {}, t));
            EXPECT_TRUE(is_valid_cpdag(c, ValidityLevel::strict, {}, t));
        }
    }
}

TEST(Enumerate, Examples) {
    const auto chain = enumerate_dags(undirected(3, {{0, 1}, {1, 2}}));
    EXPECT_EQ(chain.dags.size(), 3U);
    EXPECT_FALSE(chain.overflow);
    std::set<std::vector<std::pair<int, int>>> got;
    for (const auto& g : chain.dags) got.insert(g.edges());
    EXPECT_TRUE(got.count(Dag(3, {{0, 1}, {1, 2}}).edges()));
    EXPECT_TRUE(got.count(Dag(3, {{1, 0}, {2, 1}}).edges()));
    EXPECT_TRUE(got.count(Dag(3, {{1, 0}, {1, 2}}).edges()));

    EXPECT_EQ(enumerate_dags(MixedGraph::complete_undirected(3)).dags.size(), 6U);
    const auto one = enumerate_dags(directed(3, {{0, 1}, {2, 1}}));
    ASSERT_EQ(one.dags.size(), 1U);
    EXPECT_EQ(one.dags[0], Dag(3, {{0, 1}, {2, 1}}));

    MixedGraph bi(2);
    bi.set_bidirected(0, 1);
    EXPECT_THROW(enumerate_dags(bi), std::invalid_argument);
}

TEST(Enumerate, OverflowCarriesPartialList) {
    const auto r = enumerate_dags(MixedGraph::complete_undirected(5), 10);
    EXPECT_TRUE(r.overflow);
    EXPECT_EQ(r.dags.size(), 10U);
    EXPECT_EQ(enumerate_dags(MixedGraph::complete_undirected(5)).dags.size(), 120U);
}

TEST(Enumerate, AgreesWithBruteForceAndRoundTrips) {
    std::mt19937_64 rng(29);
    for (int rep = 0; rep < 200; ++rep) {
        const int d = 2 + rep % 4;
        const Dag dag = test::random_labelled_dag(d, 0.6, rng);
        const MixedGraph c = cpdag_from_dag(dag);
        const auto listed = enumerate_dags(c);
        std::set<std::vector<std::pair<int, int>>> got;
        for (const auto& g : listed.dags) {
            got.insert(g.edges());
            EXPECT_EQ(cpdag_from_dag(g), c);
        }
        EXPECT_EQ(got.size(), listed.dags.size());
        EXPECT_EQ(got, test::brute_force_members(c, dag));
        EXPECT_TRUE(got.count(dag.edges()));
    }
}

TEST(Enumerate, RoundTripLarger) {
    std::mt19937_64 rng(31);
    for (int rep = 0; rep < 40; ++rep) {
        const Dag dag = test::random_labelled_dag(8, 0.35, rng);
        const MixedGraph c = cpdag_from_dag(dag);
        const auto listed = enumerate_dags(c);
        bool found = false;
        for (const auto& g : listed.dags) {
            EXPECT_EQ(cpdag_from_dag(g), c);
            found = found || g == dag;
        }
        EXPECT_TRUE(found);
    }
}

TEST(ConsistentExtension, PreservesMarks) {
    MixedGraph g = directed(4, {{0, 2}, {1, 2}});
    g.set_undirected(2, 3);
    const auto ext = consistent_extension(g);
    ASSERT_TRUE(ext);
    EXPECT_TRUE(ext->has_edge(0, 2));
    EXPECT_TRUE(ext->has_edge(1, 2));
    EXPECT_TRUE(ext->has_edge(2, 3));
}

TEST(Background, ForcedDirectionAndValidation) {
    const TierOrder tiers({1, 2, 2});
    BackgroundKnowledge bk;
    bk.forbidden_edges.insert({1, 2});
    EXPECT_EQ(forced_direction(tiers, bk, 1, 0), std::make_optional(std::make_pair(0, 1)));
    EXPECT_EQ(forced_direction(tiers, bk, 1, 2), std::make_optional(std::make_pair(2, 1)));
    EXPECT_FALSE(forced_direction(tiers, {}, 1, 2));
    EXPECT_EQ(tiers.later_than_both(0, 0), (NodeSet{1, 2}));
    EXPECT_EQ(tiers.earlier_than(2), (NodeSet{0}));
    bk.forbidden_edges.insert({0, 7});
    EXPECT_THROW(bk.validate(3), std::invalid_argument);
    BackgroundKnowledge bad;
    EXPECT_THROW(bad.add_required_adjacency(1, 1), std::invalid_argument);
}

TEST(GraphIo, EdgeListAndDotRoundTrip) {
    std::mt19937_64 rng(37);
    std::uniform_int_distribution<int> kind(0, 4);
    for (int rep = 0; rep < 50; ++rep) {
        const int d = 2 + rep % 9;
        MixedGraph g(d);
        for (int a = 0; a < d; ++a)
            for (int b = a + 1; b < d; ++b) switch (kind(rng)) {
                    case 1: g.set_undirected(a, b); break;
                    case 2: g.set_directed(a, b); break;
                    case 3: g.set_directed(b, a); break;
                    case 4: g.set_bidirected(a, b); break;
                    default: break;
                }
        const std::string text = to_edge_list(g);
        EXPECT_EQ(parse_edge_list(text), g);
        EXPECT_EQ(to_edge_list(parse_edge_list(text)), text);
        const std::string dot = to_dot(g);
        EXPECT_EQ(parse_dot(dot).graph, g);
        EXPECT_EQ(to_dot(parse_dot(dot).graph), dot);
    }
}

TEST(GraphIo, Golden) {
    MixedGraph g(4);
    g.set_directed(0, 1);
    g.set_undirected(1, 2);
    g.set_bidirected(2, 3);
    EXPECT_EQ(to_edge_list(g), "nodes 4\n0 -> 1\n1 -- 2\n2 <-> 3\n");
    const auto labeled = parse_dot(to_dot(g, {"a", "b", "c", "d"}));
    EXPECT_EQ(labeled.graph, g);
    EXPECT_EQ(labeled.labels, (std::vector<std::string>{"a", "b", "c", "d"}));
}

TEST(GraphIo, ParseErrorsNameLine) {
    try {
        parse_edge_list("nodes 3\n0 -> 1\n1 => 2\n");
        FAIL() << "expected a parse error";
    } catch (const GraphParseError& e) {
        EXPECT_EQ(e.line(), 3);
    }
    EXPECT_THROW(parse_edge_list("nodes 2\n0 -> 5\n"), GraphParseError);
    EXPECT_THROW(parse_edge_list("0 -> 1\n"), GraphParseError);
}
