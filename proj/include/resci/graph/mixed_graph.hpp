#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "resci/node_set.hpp"

namespace resci::graph {

enum class EdgeKind : std::uint8_t { undirected, directed, bidirected };

/// One edge as listed by MixedGraph::edges(). For directed edges `a` is the
/// tail and `b` the head; otherwise a < b.
struct Edge {
    int a = 0;
    int b = 0;
    EdgeKind kind = EdgeKind::undirected;

    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Graph with at most one mark per unordered pair: none, undirected,
/// directed (either way) or bidirected. Marks live in a flat
/// upper-triangular array.
class MixedGraph {
public:
    MixedGraph() = default;
    explicit MixedGraph(int num_nodes);

    static MixedGraph complete_undirected(int num_nodes);

    int num_nodes() const { return d_; }

    bool adjacent(int i, int j) const { return mark(i, j) != Mark::none; }
    bool has_undirected(int i, int j) const { return mark(i, j) == Mark::undirected; }
    bool has_bidirected(int i, int j) const { return mark(i, j) == Mark::bidirected; }
    /// True iff the graph contains from -> to.
    bool has_directed(int from, int to) const;
    /// True iff the edge between `other` and `at` carries an arrowhead at `at`
    /// (other -> at, or other <-> at).
    bool has_arrowhead(int other, int at) const;

    void set_undirected(int i, int j) { set_mark(i, j, Mark::undirected); }
    void set_directed(int from, int to);
    void set_bidirected(int i, int j) { set_mark(i, j, Mark::bidirected); }
    void remove_edge(int i, int j) { set_mark(i, j, Mark::none); }

    NodeSet adjacents(int i) const;
    /// k with k -> i.
    NodeSet parents(int i) const;
    /// k with i -> k.
    NodeSet children(int i) const;
    /// k with i -- k.
    NodeSet undirected_neighbors(int i) const;

    int num_edges() const;
    bool has_any_bidirected() const;
    bool has_any_undirected() const;

    /// All edges ordered by (min endpoint, max endpoint).
    std::vector<Edge> edges() const;

    /// Same adjacencies, every mark replaced by undirected.
    MixedGraph skeleton() const;

    /// Subgraph on `keep`, renumbered in increasing node order.
    MixedGraph induced_subgraph(NodeSet keep) const;

    friend bool operator==(const MixedGraph&, const MixedGraph&) = default;

    /// Raw mark codes, for hashing and deduplication.
    const std::vector<std::uint8_t>& raw_marks() const { return marks_; }

private:
    enum class Mark : std::uint8_t { none = 0, undirected = 1, forward = 2, backward = 3, bidirected = 4 };

    std::size_t index(int i, int j) const;
    Mark mark(int i, int j) const { return static_cast<Mark>(marks_[index(i, j)]); }
    void set_mark(int i, int j, Mark m) { marks_[index(i, j)] = static_cast<std::uint8_t>(m); }

    int d_ = 0;
    std::vector<std::uint8_t> marks_;
};

/// Directed acyclic graph. Acyclicity is enforced on every insertion.
class Dag {
public:
    Dag() = default;
    explicit Dag(int num_nodes);
    /// Throws std::invalid_argument on cycles, self-loops or duplicate pairs.
    Dag(int num_nodes, const std::vector<std::pair<int, int>>& edges);

    /// Fully directed, acyclic mixed graph -> Dag; nullopt otherwise.
    static std::optional<Dag> from_mixed(const MixedGraph& g);

    int num_nodes() const { return static_cast<int>(parents_.size()); }

    void add_edge(int parent, int child);

    bool has_edge(int from, int to) const { return parents_.at(static_cast<std::size_t>(to)).contains(from); }
    bool adjacent(int i, int j) const { return has_edge(i, j) || has_edge(j, i); }
    NodeSet parents(int i) const { return parents_.at(static_cast<std::size_t>(i)); }
    NodeSet children(int i) const;
    int num_edges() const;

    /// (parent, child) pairs ordered by (child, parent).
    std::vector<std::pair<int, int>> edges() const;
    std::vector<int> topological_order() const;
    /// Nodes reachable from i by a directed path, i excluded.
    NodeSet descendants(int i) const;

    MixedGraph to_mixed() const;

    friend bool operator==(const Dag&, const Dag&) = default;

private:
    std::vector<NodeSet> parents_;
};

}  // namespace resci::graph
