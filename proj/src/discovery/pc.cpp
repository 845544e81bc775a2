#include "resci/discovery/pc.hpp"

#include <stdexcept>
#include <vector>

namespace resci::discovery {

DiscoveryResult pc_stable_tiered(CiTest& test, const graph::TierOrder& tiers, const graph::BackgroundKnowledge& bk,
                                 const PcOptions& options) {
    const int d = test.num_nodes();
    if (d < 2) throw std::invalid_argument("PC needs at least two variables");
    if (tiers.num_nodes() != d) throw std::invalid_argument("tier vector length does not match the variable count");
    if (options.max_cond_size && *options.max_cond_size < 0) throw std::invalid_argument("max_cond_size must be >= 0");
    bk.validate(d);

    DiscoveryResult result{graph::MixedGraph::complete_undirected(d), graph::SepsetTable(d), {}};
    graph::MixedGraph& g = result.graph;
    Diagnostics& diag = result.diagnostics;

    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j)
            if (bk.forbids_adjacency(i, j)) g.remove_edge(i, j);

    std::vector<NodeSet> snapshot(static_cast<std::size_t>(d));
    for (int level = 0;; ++level) {
        if (options.max_cond_size && level > *options.max_cond_size) break;
        for (int v = 0; v < d; ++v) snapshot[static_cast<std::size_t>(v)] = g.adjacents(v);

        bool any_eligible = false;
        for (int i = 0; i < d; ++i) {
            for (int j : snapshot[static_cast<std::size_t>(i)]) {
                if (!g.adjacent(i, j)) continue;
                const NodeSet pool = snapshot[static_cast<std::size_t>(i)].without(j) - tiers.later_than_both(i, j);
                if (pool.size() < level) continue;
                any_eligible = true;
                for_each_subset_of_size(pool, level, [&](NodeSet s) {
                    ++diag.tests_performed;
                    const CiOutcome out = test.test(i, j, s);
                    if (out.decision == CiDecision::cannot_test) {
                        ++diag.cannot_test;
                        return false;
                    }
                    if (out.decision == CiDecision::independent) {
                        g.remove_edge(i, j);
                        result.sepsets.set(i, j, s);
                        return true;
                    }
                    return false;
                });
            }
        }
        if (!any_eligible) break;
        diag.max_level = level;
    }

    graph::VStructureOptions vopts;
    vopts.mode = options.orient_mode;
    if (options.orient_mode == graph::OrientMode::majority) {
        vopts.independent = [&test](int i, int j, NodeSet s) { return test.test(i, j, s).decision == CiDecision::independent; };
        vopts.max_cond_size = options.max_cond_size.value_or(kMaxNodes);
    }
    const graph::MixedGraph skeleton = graph::orient_forced(g, tiers, bk);
    graph::OrientationResult oriented = graph::orient_v_structures(skeleton, result.sepsets, tiers, bk, vopts);
    diag.orientation = oriented.flags;
    graph::MeekResult closed = graph::apply_meek_rules(oriented.graph, tiers, bk);
    diag.orientation.meek_skipped = closed.skipped;
    g = std::move(closed.graph);
    return result;
}

}  // namespace resci::discovery
