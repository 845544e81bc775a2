#pragma once

#include <optional>

#include "resci/discovery/ci_test.hpp"
#include "resci/graph/algorithms.hpp"
#include "resci/graph/background.hpp"

namespace resci::discovery {

struct PcOptions {
    /// Largest conditioning set tested; unlimited when empty.
    std::optional<int> max_cond_size;
    graph::OrientMode orient_mode = graph::OrientMode::standard;
};

struct Diagnostics {
    long tests_performed = 0;
    /// Hypotheses that could not be tested; their edges were kept.
    long cannot_test = 0;
    /// Largest conditioning-set size reached by the adjacency search.
    int max_level = 0;
    graph::OrientationFlags orientation;
};

struct DiscoveryResult {
    graph::MixedGraph graph;
    graph::SepsetTable sepsets;
    Diagnostics diagnostics;
};

/// Tiered PC-stable. Adjacency sets are snapshotted at the start of each
/// level; a pair (i, j) is tested given subsets of its snapshot neighbours
/// minus nodes lying in a later tier than both i and j. Afterwards edges
/// forced by tiers or forbidden directions are oriented, then the collider
/// rule, then Meek closure. Untestable hypotheses keep their edge. Pairs
/// forbidden in both directions start out non-adjacent and have no sepset.
DiscoveryResult pc_stable_tiered(CiTest& test, const graph::TierOrder& tiers, const graph::BackgroundKnowledge& bk,
                                 const PcOptions& options = {});

}  // namespace resci::discovery
