#pragma once

#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "resci/node_set.hpp"

namespace resci::graph {

/// Partial temporal order: one positive tier per node. An edge may only
/// point from an earlier (smaller) tier to a later one.
class TierOrder {
public:
    TierOrder() = default;
    explicit TierOrder(std::vector<int> tiers);

    /// Every node in tier 1.
    static TierOrder trivial(int num_nodes);

    int num_nodes() const { return static_cast<int>(tier_.size()); }
    int tier(int node) const { return tier_.at(static_cast<std::size_t>(node)); }
    const std::vector<int>& tiers() const { return tier_; }

    bool is_trivial() const;
    /// Nodes whose tier is strictly later than both i and j.
    NodeSet later_than_both(int i, int j) const;
    /// Nodes whose tier is strictly earlier than `node`.
    NodeSet earlier_than(int node) const;
    /// Tiers restricted to `keep`, renumbered like MixedGraph::induced_subgraph.
    TierOrder restricted(NodeSet keep) const;

    friend bool operator==(const TierOrder&, const TierOrder&) = default;

private:
    std::vector<int> tier_;
};

/// Forbidden directed edges, required adjacencies and an optional node
/// subset to which validity screening is restricted.
struct BackgroundKnowledge {
    std::set<std::pair<int, int>> forbidden_edges;
    /// Stored with first < second.
    std::set<std::pair<int, int>> required_adjacencies;
    std::optional<NodeSet> validity_scope;

    bool forbids(int from, int to) const { return forbidden_edges.count({from, to}) > 0; }
    /// Both directions forbidden: the pair may not be adjacent at all.
    bool forbids_adjacency(int i, int j) const { return forbids(i, j) && forbids(j, i); }

    void add_required_adjacency(int i, int j);

    /// Throws std::invalid_argument if any entry references a node outside
    /// [0, num_nodes) or a required pair is degenerate.
    void validate(int num_nodes) const;

    BackgroundKnowledge restricted(NodeSet keep) const;

    friend bool operator==(const BackgroundKnowledge&, const BackgroundKnowledge&) = default;
};

/// If tiers or forbidden edges force the direction of the pair {i, j},
/// returns (tail, head). Tiers take precedence over forbidden edges.
std::optional<std::pair<int, int>> forced_direction(const TierOrder& tiers, const BackgroundKnowledge& bk, int i, int j);

/// Separating sets for deleted edges, keyed by unordered pair.
class SepsetTable {
public:
    SepsetTable() = default;
    explicit SepsetTable(int num_nodes);

    void set(int i, int j, NodeSet s);
    std::optional<NodeSet> get(int i, int j) const;
    bool contains(int i, int j) const { return get(i, j).has_value(); }
    int num_nodes() const { return d_; }

    friend bool operator==(const SepsetTable&, const SepsetTable&) = default;

private:
    std::size_t index(int i, int j) const;

    int d_ = 0;
    std::vector<std::optional<NodeSet>> table_;
};

}  // namespace resci::graph
