#include "resci/graph/background.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace resci::graph {

TierOrder::TierOrder(std::vector<int> tiers) : tier_(std::move(tiers)) {
    if (tier_.size() > static_cast<std::size_t>(kMaxNodes)) throw std::invalid_argument("too many nodes in tier order");
    for (int t : tier_)
        if (t < 1) throw std::invalid_argument("tiers must be positive integers");
}

TierOrder TierOrder::trivial(int num_nodes) { return TierOrder(std::vector<int>(static_cast<std::size_t>(num_nodes), 1)); }

bool TierOrder::is_trivial() const {
    return std::adjacent_find(tier_.begin(), tier_.end(), std::not_equal_to<>()) == tier_.end();
}

NodeSet TierOrder::later_than_both(int i, int j) const {
    const int bound = std::max(tier(i), tier(j));
    NodeSet s;
    for (int k = 0; k < num_nodes(); ++k)
        if (tier_[static_cast<std::size_t>(k)] > bound) s.insert(k);
    return s;
}

NodeSet TierOrder::earlier_than(int node) const {
    const int bound = tier(node);
    NodeSet s;
    for (int k = 0; k < num_nodes(); ++k)
        if (tier_[static_cast<std::size_t>(k)] < bound) s.insert(k);
    return s;
}

TierOrder TierOrder::restricted(NodeSet keep) const {
    std::vector<int> out;
    for (int v : keep) out.push_back(tier(v));
    return TierOrder(std::move(out));
}

void BackgroundKnowledge::add_required_adjacency(int i, int j) {
    if (i == j) throw std::invalid_argument("required adjacency needs two distinct nodes");
    required_adjacencies.insert({std::min(i, j), std::max(i, j)});
}

void BackgroundKnowledge::validate(int num_nodes) const {
    auto check = [&](int v) {
        if (v < 0 || v >= num_nodes) {
            throw std::invalid_argument("background knowledge references unknown node " + std::to_string(v));
        }
    };
    for (const auto& [a, b] : forbidden_edges) {
        check(a);
        check(b);
        if (a == b) throw std::invalid_argument("forbidden edge is a self-loop");
    }
    for (const auto& [a, b] : required_adjacencies) {
        check(a);
        check(b);
        if (a == b) throw std::invalid_argument("required adjacency needs two distinct nodes");
        if (forbids_adjacency(a, b)) throw std::invalid_argument("pair is both required and forbidden");
    }
    if (validity_scope) {
        for (int v : *validity_scope) check(v);
    }
}

BackgroundKnowledge BackgroundKnowledge::restricted(NodeSet keep) const {
    std::vector<int> renumber(static_cast<std::size_t>(kMaxNodes), -1);
    int next = 0;
    for (int v : keep) renumber[static_cast<std::size_t>(v)] = next++;
    BackgroundKnowledge out;
    for (const auto& [a, b] : forbidden_edges) {
        if (keep.contains(a) && keep.contains(b)) {
            out.forbidden_edges.insert({renumber[static_cast<std::size_t>(a)], renumber[static_cast<std::size_t>(b)]});
        }
    }
    for (const auto& [a, b] : required_adjacencies) {
        if (keep.contains(a) && keep.contains(b)) {
            out.add_required_adjacency(renumber[static_cast<std::size_t>(a)], renumber[static_cast<std::size_t>(b)]);
        }
    }
    return out;
}

std::optional<std::pair<int, int>> forced_direction(const TierOrder& tiers, const BackgroundKnowledge& bk, int i, int j) {
    if (tiers.num_nodes() > 0) {
        if (tiers.tier(i) < tiers.tier(j)) return std::pair{i, j};
        if (tiers.tier(j) < tiers.tier(i)) return std::pair{j, i};
    }
    const bool no_ij = bk.forbids(i, j);
    const bool no_ji = bk.forbids(j, i);
    if (no_ij && !no_ji) return std::pair{j, i};
    if (no_ji && !no_ij) return std::pair{i, j};
    return std::nullopt;
}

SepsetTable::SepsetTable(int num_nodes) : d_(num_nodes) {
    table_.assign(static_cast<std::size_t>(num_nodes) * static_cast<std::size_t>(num_nodes), std::nullopt);
}

std::size_t SepsetTable::index(int i, int j) const {
    if (i == j || i < 0 || j < 0 || i >= d_ || j >= d_) throw std::out_of_range("invalid sepset pair");
    if (i > j) std::swap(i, j);
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(d_) + static_cast<std::size_t>(j);
}

void SepsetTable::set(int i, int j, NodeSet s) {
    if (s.contains(i) || s.contains(j)) throw std::invalid_argument("sepset must exclude its own endpoints");
    table_[index(i, j)] = s;
}

std::optional<NodeSet> SepsetTable::get(int i, int j) const { return table_[index(i, j)]; }

}  // namespace resci::graph
