#include "resci/graph/mixed_graph.hpp"

#include <stdexcept>
#include <string>

#include "resci/graph/algorithms.hpp"

namespace resci::graph {

MixedGraph::MixedGraph(int num_nodes) : d_(num_nodes) {
    if (num_nodes < 0 || num_nodes > kMaxNodes) {
        throw std::invalid_argument("node count must be in [0, " + std::to_string(kMaxNodes) + "]");
    }
    marks_.assign(static_cast<std::size_t>(num_nodes) * static_cast<std::size_t>(num_nodes > 0 ? num_nodes - 1 : 0) / 2, 0);
}

MixedGraph MixedGraph::complete_undirected(int num_nodes) {
    MixedGraph g(num_nodes);
    for (auto& m : g.marks_) m = static_cast<std::uint8_t>(Mark::undirected);
    return g;
}

std::size_t MixedGraph::index(int i, int j) const {
    if (i == j || i < 0 || j < 0 || i >= d_ || j >= d_) {
        throw std::out_of_range("invalid node pair (" + std::to_string(i) + "," + std::to_string(j) + ")");
    }
    if (i > j) std::swap(i, j);
    // Row-major upper triangle without diagonal.
    const auto ii = static_cast<std::size_t>(i);
    const auto dd = static_cast<std::size_t>(d_);
    return ii * (2 * dd - ii - 1) / 2 + static_cast<std::size_t>(j - i - 1);
}

bool MixedGraph::has_directed(int from, int to) const {
    const Mark m = mark(from, to);
    return from < to ? m == Mark::forward : m == Mark::backward;
}

bool MixedGraph::has_arrowhead(int other, int at) const {
    return has_directed(other, at) || has_bidirected(other, at);
}

void MixedGraph::set_directed(int from, int to) {
    set_mark(from, to, from < to ? Mark::forward : Mark::backward);
}

NodeSet MixedGraph::adjacents(int i) const {
    NodeSet s;
    for (int k = 0; k < d_; ++k)
        if (k != i && adjacent(i, k)) s.insert(k);
    return s;
}

NodeSet MixedGraph::parents(int i) const {
    NodeSet s;
    for (int k = 0; k < d_; ++k)
        if (k != i && has_directed(k, i)) s.insert(k);
    return s;
}

NodeSet MixedGraph::children(int i) const {
    NodeSet s;
    for (int k = 0; k < d_; ++k)
        if (k != i && has_directed(i, k)) s.insert(k);
    return s;
}

NodeSet MixedGraph::undirected_neighbors(int i) const {
    NodeSet s;
    for (int k = 0; k < d_; ++k)
        if (k != i && has_undirected(i, k)) s.insert(k);
    return s;
}

int MixedGraph::num_edges() const {
    int count = 0;
    for (auto m : marks_)
        if (m != 0) ++count;
    return count;
}

bool MixedGraph::has_any_bidirected() const {
    for (auto m : marks_)
        if (static_cast<Mark>(m) == Mark::bidirected) return true;
    return false;
}

bool MixedGraph::has_any_undirected() const {
    for (auto m : marks_)
        if (static_cast<Mark>(m) == Mark::undirected) return true;
    return false;
}

std::vector<Edge> MixedGraph::edges() const {
    std::vector<Edge> out;
    for (int i = 0; i < d_; ++i) {
        for (int j = i + 1; j < d_; ++j) {
            switch (mark(i, j)) {
                case Mark::none: break;
                case Mark::undirected: out.push_back({i, j, EdgeKind::undirected}); break;
                case Mark::forward: out.push_back({i, j, EdgeKind::directed}); break;
                case Mark::backward: out.push_back({j, i, EdgeKind::directed}); break;
                case Mark::bidirected: out.push_back({i, j, EdgeKind::bidirected}); break;
            }
        }
    }
    return out;
}

MixedGraph MixedGraph::skeleton() const {
    MixedGraph g(d_);
    for (std::size_t t = 0; t < marks_.size(); ++t)
        if (marks_[t] != 0) g.marks_[t] = static_cast<std::uint8_t>(Mark::undirected);
    return g;
}

MixedGraph MixedGraph::induced_subgraph(NodeSet keep) const {
    const std::vector<int> nodes = keep.to_vector();
    const int m = static_cast<int>(nodes.size());
    MixedGraph g(m);
    for (int a = 0; a < m; ++a) {
        for (int b = a + 1; b < m; ++b) {
            const int i = nodes[static_cast<std::size_t>(a)];
            const int j = nodes[static_cast<std::size_t>(b)];
            // nodes are increasing, so forward/backward keep their meaning.
            g.marks_[g.index(a, b)] = marks_[index(i, j)];
        }
    }
    return g;
}

Dag::Dag(int num_nodes) {
    if (num_nodes < 0 || num_nodes > kMaxNodes) {
        throw std::invalid_argument("node count must be in [0, " + std::to_string(kMaxNodes) + "]");
    }
    parents_.assign(static_cast<std::size_t>(num_nodes), NodeSet{});
}

Dag::Dag(int num_nodes, const std::vector<std::pair<int, int>>& edges) : Dag(num_nodes) {
    for (const auto& [p, c] : edges) add_edge(p, c);
}

std::optional<Dag> Dag::from_mixed(const MixedGraph& g) {
    Dag dag(g.num_nodes());
    for (const Edge& e : g.edges()) {
        if (e.kind != EdgeKind::directed) return std::nullopt;
        dag.parents_[static_cast<std::size_t>(e.b)].insert(e.a);
    }
    if (!is_acyclic(g)) return std::nullopt;
    return dag;
}

void Dag::add_edge(int parent, int child) {
    const int d = num_nodes();
    if (parent < 0 || child < 0 || parent >= d || child >= d) throw std::out_of_range("edge endpoint out of range");
    if (parent == child) throw std::invalid_argument("self-loop " + std::to_string(parent));
    if (adjacent(parent, child)) {
        throw std::invalid_argument("pair (" + std::to_string(parent) + "," + std::to_string(child) + ") already adjacent");
    }
    if (descendants(child).contains(parent)) {
        throw std::invalid_argument("edge " + std::to_string(parent) + "->" + std::to_string(child) + " creates a cycle");
    }
    parents_[static_cast<std::size_t>(child)].insert(parent);
}

NodeSet Dag::children(int i) const {
    NodeSet s;
    for (int k = 0; k < num_nodes(); ++k)
        if (parents_[static_cast<std::size_t>(k)].contains(i)) s.insert(k);
    return s;
}

int Dag::num_edges() const {
    int count = 0;
    for (NodeSet p : parents_) count += p.size();
    return count;
}

std::vector<std::pair<int, int>> Dag::edges() const {
    std::vector<std::pair<int, int>> out;
    for (int c = 0; c < num_nodes(); ++c)
        for (int p : parents_[static_cast<std::size_t>(c)]) out.emplace_back(p, c);
    return out;
}

std::vector<int> Dag::topological_order() const {
    const int d = num_nodes();
    std::vector<int> order;
    order.reserve(static_cast<std::size_t>(d));
    NodeSet placed;
    while (static_cast<int>(order.size()) < d) {
        for (int v = 0; v < d; ++v) {
            if (!placed.contains(v) && parents_[static_cast<std::size_t>(v)].is_subset_of(placed)) {
                order.push_back(v);
                placed.insert(v);
            }
        }
    }
    return order;
}

NodeSet Dag::descendants(int i) const {
    NodeSet seen;
    std::vector<int> stack{i};
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (int c : children(v)) {
            if (!seen.contains(c)) {
                seen.insert(c);
                stack.push_back(c);
            }
        }
    }
    return seen;
}

MixedGraph Dag::to_mixed() const {
    MixedGraph g(num_nodes());
    for (const auto& [p, c] : edges()) g.set_directed(p, c);
    return g;
}

}  // namespace resci::graph
