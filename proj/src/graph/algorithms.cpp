#include "resci/graph/algorithms.hpp"

#include <array>
#include <bit>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>

namespace resci::graph {

namespace {

constexpr std::uint64_t bit(int v) { return std::uint64_t{1} << v; }

/// Per-node bitsets of a mixed graph without bidirected edges.
struct BitGraph {
    int d = 0;
    std::array<std::uint64_t, kMaxNodes> pa{};
    std::array<std::uint64_t, kMaxNodes> ch{};
    std::array<std::uint64_t, kMaxNodes> un{};

    explicit BitGraph(const MixedGraph& g) : d(g.num_nodes()) {
        for (const Edge& e : g.edges()) {
            if (e.kind == EdgeKind::directed) {
                ch[static_cast<std::size_t>(e.a)] |= bit(e.b);
                pa[static_cast<std::size_t>(e.b)] |= bit(e.a);
            } else if (e.kind == EdgeKind::undirected) {
                un[static_cast<std::size_t>(e.a)] |= bit(e.b);
                un[static_cast<std::size_t>(e.b)] |= bit(e.a);
            }
        }
    }

    std::uint64_t adj(int v) const {
        const auto i = static_cast<std::size_t>(v);
        return pa[i] | ch[i] | un[i];
    }

    void orient(int from, int to) {
        const auto f = static_cast<std::size_t>(from);
        const auto t = static_cast<std::size_t>(to);
        un[f] &= ~bit(to);
        un[t] &= ~bit(from);
        ch[f] |= bit(to);
        pa[t] |= bit(from);
    }

    /// Which Meek rule (1-4) orients the undirected edge a - b as a -> b, or 0.
    int meek_rule_for(int a, int b) const {
        const auto ia = static_cast<std::size_t>(a);
        const auto ib = static_cast<std::size_t>(b);
        const std::uint64_t adj_b = adj(b);
        // R1: c -> a, c and b nonadjacent.
        if (pa[ia] & ~adj_b & ~bit(b)) return 1;
        // R2: a -> c -> b.
        if (ch[ia] & pa[ib]) return 2;
        // R3: a - c -> b, a - e -> b, c and e nonadjacent.
        const std::uint64_t both = un[ia] & pa[ib];
        if (std::popcount(both) >= 2) {
            for (int c : NodeSet::from_mask(both)) {
                if (both & ~adj(c) & ~bit(c)) return 3;
            }
        }
        // R4: a - e, e -> c -> b, c adjacent to a, e and b nonadjacent.
        const std::uint64_t adj_a = adj(a);
        for (int e : NodeSet::from_mask(un[ia] & ~adj_b & ~bit(b))) {
            if (ch[static_cast<std::size_t>(e)] & pa[ib] & adj_a) return 4;
        }
        return 0;
    }

    /// Applies Meek rules to a fixed point.
    void close() {
        bool changed = true;
        while (changed) {
            changed = false;
            for (int a = 0; a < d; ++a) {
                for (int b : NodeSet::from_mask(un[static_cast<std::size_t>(a)])) {
                    if (meek_rule_for(a, b) != 0) {
                        orient(a, b);
                        changed = true;
                    }
                }
            }
        }
    }

    MixedGraph to_mixed() const {
        MixedGraph g(d);
        for (int a = 0; a < d; ++a) {
            for (int b : NodeSet::from_mask(ch[static_cast<std::size_t>(a)])) g.set_directed(a, b);
            for (int b : NodeSet::from_mask(un[static_cast<std::size_t>(a)]))
                if (a < b) g.set_undirected(a, b);
        }
        return g;
    }
};

bool has_directed_cycle(const BitGraph& w) {
    std::uint64_t remaining = NodeSet::first(w.d).mask();
    bool progress = true;
    while (remaining != 0 && progress) {
        progress = false;
        for (int v : NodeSet::from_mask(remaining)) {
            if ((w.pa[static_cast<std::size_t>(v)] & remaining) == 0) {
                remaining &= ~bit(v);
                progress = true;
            }
        }
    }
    return remaining != 0;
}

void check_node(int d, int v) {
    if (v < 0 || v >= d) throw std::out_of_range("node " + std::to_string(v) + " out of range");
}

/// v-structures a -> k <- b of a fully or partially directed graph, keyed by
/// (min(a,b), k, max(a,b)).
std::set<std::array<int, 3>> v_structures(const BitGraph& w) {
    std::set<std::array<int, 3>> out;
    for (int k = 0; k < w.d; ++k) {
        const std::uint64_t pa = w.pa[static_cast<std::size_t>(k)];
        for (int a : NodeSet::from_mask(pa)) {
            for (int b : NodeSet::from_mask(pa & ~(bit(a + 1) - 1))) {
                if (!(w.adj(a) & bit(b))) out.insert({a, k, b});
            }
        }
    }
    return out;
}

/// Separating-set census for majority-rule orientation of one pair.
struct SepsetCensus {
    int total = 0;
    std::array<int, kMaxNodes> containing{};
};

SepsetCensus census_for_pair(const MixedGraph& skeleton, int i, int j, const TierOrder& tiers,
                             const VStructureOptions& options) {
    NodeSet excluded;
    if (tiers.num_nodes() > 0) excluded = tiers.later_than_both(i, j);
    const NodeSet pool_i = skeleton.adjacents(i).without(j) - excluded;
    const NodeSet pool_j = skeleton.adjacents(j).without(i) - excluded;
    std::set<NodeSet> found;
    for (const NodeSet pool : {pool_i, pool_j}) {
        const int top = std::min(pool.size(), options.max_cond_size);
        for (int s = 0; s <= top; ++s) {
            for_each_subset_of_size(pool, s, [&](NodeSet cond) {
                if (!found.count(cond) && options.independent(i, j, cond)) found.insert(cond);
                return false;
            });
        }
    }
    SepsetCensus census;
    census.total = static_cast<int>(found.size());
    for (NodeSet cond : found)
        for (int k : cond) ++census.containing[static_cast<std::size_t>(k)];
    return census;
}

}  // namespace

bool is_acyclic(const MixedGraph& g) {
    BitGraph w(g);
    return !has_directed_cycle(w);
}

bool d_separated(const Dag& g, int i, int j, NodeSet s) {
    const int d = g.num_nodes();
    check_node(d, i);
    check_node(d, j);
    if (i == j) throw std::invalid_argument("d-separation needs two distinct nodes");
    if (s.contains(i) || s.contains(j)) throw std::invalid_argument("conditioning set must exclude i and j");
    for (int v : s) check_node(d, v);

    // Ancestors of the conditioning set, s included.
    NodeSet anc = s;
    std::vector<int> stack = s.to_vector();
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (int p : g.parents(v)) {
            if (!anc.contains(p)) {
                anc.insert(p);
                stack.push_back(p);
            }
        }
    }

    // Reachability over (node, direction): up = entered from a child,
    // down = entered from a parent.
    NodeSet seen_up;
    NodeSet seen_down;
    std::vector<std::pair<int, bool>> queue{{i, true}};
    while (!queue.empty()) {
        const auto [v, up] = queue.back();
        queue.pop_back();
        if (up ? seen_up.contains(v) : seen_down.contains(v)) continue;
        (up ? seen_up : seen_down).insert(v);
        if (v == j) return false;
        const bool observed = s.contains(v);
        if (up && !observed) {
            for (int p : g.parents(v)) queue.emplace_back(p, true);
            for (int c : g.children(v)) queue.emplace_back(c, false);
        } else if (!up) {
            if (!observed)
                for (int c : g.children(v)) queue.emplace_back(c, false);
            if (anc.contains(v))
                for (int p : g.parents(v)) queue.emplace_back(p, true);
        }
    }
    return true;
}

NodeSet parents(const MixedGraph& g, int i) {
    check_node(g.num_nodes(), i);
    return g.parents(i);
}

NodeSet parents(const Dag& g, int i) {
    check_node(g.num_nodes(), i);
    return g.parents(i);
}

MixedGraph orient_forced(MixedGraph g, const TierOrder& tiers, const BackgroundKnowledge& bk) {
    for (const Edge& e : g.edges()) {
        if (e.kind != EdgeKind::undirected) continue;
        if (auto dir = forced_direction(tiers, bk, e.a, e.b)) g.set_directed(dir->first, dir->second);
    }
    return g;
}

OrientationResult orient_v_structures(const MixedGraph& skeleton, const SepsetTable& sepsets, const TierOrder& tiers,
                                      const BackgroundKnowledge& bk, const VStructureOptions& options) {
    if (options.mode == OrientMode::majority && !options.independent) {
        throw std::invalid_argument("majority-rule orientation needs an independence callback");
    }
    const int d = skeleton.num_nodes();
    OrientationResult result{skeleton, {}};
    MixedGraph& g = result.graph;

    // Arrowheads requested by the collider rule, per (tail, head).
    std::set<std::pair<int, int>> arrowheads;
    std::map<std::pair<int, int>, SepsetCensus> censuses;

    for (int k = 0; k < d; ++k) {
        const std::vector<int> adj = skeleton.adjacents(k).to_vector();
        for (std::size_t x = 0; x < adj.size(); ++x) {
            for (std::size_t y = x + 1; y < adj.size(); ++y) {
                const int i = adj[x];
                const int j = adj[y];
                if (skeleton.adjacent(i, j)) continue;
                bool collider = false;
                if (options.mode == OrientMode::standard) {
                    const auto sep = sepsets.get(i, j);
                    if (!sep) continue;
                    collider = !sep->contains(k);
                } else {
                    auto it = censuses.find({i, j});
                    if (it == censuses.end()) it = censuses.emplace(std::pair{i, j}, census_for_pair(skeleton, i, j, tiers, options)).first;
                    const SepsetCensus& census = it->second;
                    if (census.total == 0) {
                        const auto sep = sepsets.get(i, j);
                        if (!sep) continue;
                        collider = !sep->contains(k);
                    } else {
                        const int twice_in = 2 * census.containing[static_cast<std::size_t>(k)];
                        if (twice_in == census.total) {
                            ++result.flags.ambiguous_triples;
                            continue;
                        }
                        collider = twice_in < census.total;
                    }
                }
                if (collider) {
                    arrowheads.insert({i, k});
                    arrowheads.insert({j, k});
                }
            }
        }
    }

    for (const auto& [tail, head] : arrowheads) {
        const auto forced = forced_direction(tiers, bk, tail, head);
        if (forced && forced->first == head) {
            ++result.flags.background_conflicts;
            g.set_directed(head, tail);
            continue;
        }
        if (g.has_directed(head, tail) || g.has_bidirected(tail, head)) {
            if (!g.has_bidirected(tail, head)) ++result.flags.bidirected_conflicts;
            g.set_bidirected(tail, head);
        } else {
            g.set_directed(tail, head);
        }
    }
    return result;
}

MeekResult apply_meek_rules(const MixedGraph& g, const TierOrder& tiers, const BackgroundKnowledge& bk) {
    if (g.has_any_bidirected()) return {g, true};
    BitGraph w(orient_forced(g, tiers, bk));
    w.close();
    return {w.to_mixed(), false};
}

MixedGraph cpdag_from_dag(const Dag& dag, const TierOrder& tiers, const BackgroundKnowledge& bk) {
    const int d = dag.num_nodes();
    if (tiers.num_nodes() != 0 && tiers.num_nodes() != d) throw std::invalid_argument("tier vector length mismatch");
    for (const auto& [p, c] : dag.edges()) {
        const auto forced = forced_direction(tiers, bk, p, c);
        if (forced && forced->first != p) {
            throw std::invalid_argument("DAG edge " + std::to_string(p) + "->" + std::to_string(c) +
                                        " contradicts background knowledge");
        }
    }
    MixedGraph g = dag.to_mixed().skeleton();
    for (int k = 0; k < d; ++k) {
        const std::vector<int> pa = dag.parents(k).to_vector();
        for (std::size_t x = 0; x < pa.size(); ++x) {
            for (std::size_t y = x + 1; y < pa.size(); ++y) {
                if (!dag.adjacent(pa[x], pa[y])) {
                    g.set_directed(pa[x], k);
                    g.set_directed(pa[y], k);
                }
            }
        }
    }
    return apply_meek_rules(g, tiers, bk).graph;
}

std::optional<Dag> consistent_extension(const MixedGraph& g) {
    if (g.has_any_bidirected()) return std::nullopt;
    BitGraph w(g);
    BitGraph out = w;
    std::uint64_t remaining = NodeSet::first(w.d).mask();
    while (remaining != 0) {
        bool removed = false;
        for (int x : NodeSet::from_mask(remaining)) {
            const auto ix = static_cast<std::size_t>(x);
            if (w.ch[ix] & remaining) continue;
            const std::uint64_t adj_x = w.adj(x) & remaining;
            const std::uint64_t nbrs = w.un[ix] & remaining;
            bool admissible = true;
            for (int y : NodeSet::from_mask(nbrs)) {
                if ((adj_x & ~bit(y)) & ~w.adj(y)) {
                    admissible = false;
                    break;
                }
            }
            if (!admissible) continue;
            for (int y : NodeSet::from_mask(nbrs)) out.orient(y, x);
            remaining &= ~bit(x);
            removed = true;
            break;
        }
        if (!removed) return std::nullopt;
    }
    if (has_directed_cycle(out)) return std::nullopt;
    return Dag::from_mixed(out.to_mixed());
}

std::string_view to_string(Invalidity reason) {
    switch (reason) {
        case Invalidity::none: return "valid";
        case Invalidity::bidirected_edge: return "bidirected edge";
        case Invalidity::directed_cycle: return "directed cycle";
        case Invalidity::missing_required_adjacency: return "missing required adjacency";
        case Invalidity::not_extendable: return "no consistent extension";
        case Invalidity::not_closed: return "orientation not reproducible";
    }
    return "unknown";
}

Invalidity check_cpdag(const MixedGraph& g, ValidityLevel level, const BackgroundKnowledge& bk, const TierOrder& tiers) {
    for (const auto& [a, b] : bk.required_adjacencies) {
        if (a >= g.num_nodes() || b >= g.num_nodes() || !g.adjacent(a, b)) return Invalidity::missing_required_adjacency;
    }

    const bool scoped = bk.validity_scope.has_value();
    const MixedGraph target = scoped ? g.induced_subgraph(*bk.validity_scope) : g;
    const TierOrder scoped_tiers = scoped && tiers.num_nodes() > 0 ? tiers.restricted(*bk.validity_scope) : tiers;
    const BackgroundKnowledge scoped_bk = scoped ? bk.restricted(*bk.validity_scope) : bk;

    if (target.has_any_bidirected()) return Invalidity::bidirected_edge;
    if (!is_acyclic(target)) return Invalidity::directed_cycle;
    if (level == ValidityLevel::basic) return Invalidity::none;

    const auto extension = consistent_extension(target);
    if (!extension) return Invalidity::not_extendable;

    if (scoped) {
        if (apply_meek_rules(target, scoped_tiers, scoped_bk).graph != target) return Invalidity::not_closed;
        return Invalidity::none;
    }
    for (const auto& [p, c] : extension->edges()) {
        const auto forced = forced_direction(scoped_tiers, scoped_bk, p, c);
        if (forced && forced->first != p) return Invalidity::not_closed;
    }
    if (cpdag_from_dag(*extension, scoped_tiers, scoped_bk) != target) return Invalidity::not_closed;
    return Invalidity::none;
}

DagEnumeration enumerate_dags(const MixedGraph& c, int cap) {
    if (cap < 1) throw std::invalid_argument("enumeration cap must be positive");
    if (!is_valid_cpdag(c, ValidityLevel::basic)) {
        throw std::invalid_argument("enumerate_dags needs a graph without bidirected edges or directed cycles");
    }
    const BitGraph root(c);
    const auto allowed = v_structures(root);

    DagEnumeration out;
    std::set<std::vector<std::uint8_t>> seen;

    // A partial orientation is a dead end once it has a cycle or a
    // v-structure the input does not contain.
    auto dead_end = [&](const BitGraph& w) {
        if (has_directed_cycle(w)) return true;
        for (const auto& v : v_structures(w))
            if (!allowed.count(v)) return true;
        return false;
    };

    std::function<void(const BitGraph&)> recurse = [&](const BitGraph& w) {
        if (out.overflow) return;
        int a = -1;
        int b = -1;
        for (int v = 0; v < w.d && a < 0; ++v) {
            const std::uint64_t up = w.un[static_cast<std::size_t>(v)] & ~(bit(v + 1) - 1);
            if (up) {
                a = v;
                b = std::countr_zero(up);
            }
        }
        if (a < 0) {
            MixedGraph g = w.to_mixed();
            if (!seen.insert(g.raw_marks()).second) return;
            if (static_cast<int>(out.dags.size()) == cap) {
                out.overflow = true;
                return;
            }
            out.dags.push_back(*Dag::from_mixed(g));
            return;
        }
        for (const auto& [from, to] : {std::pair{a, b}, std::pair{b, a}}) {
            BitGraph next = w;
            next.orient(from, to);
            next.close();
            if (!dead_end(next)) recurse(next);
        }
    };

    if (!dead_end(root)) {
        BitGraph start = root;
        start.close();
        if (!dead_end(start)) recurse(start);
    }
    return out;
}

}  // namespace resci::graph
