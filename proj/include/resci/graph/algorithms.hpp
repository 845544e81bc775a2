#pragma once

#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "resci/graph/background.hpp"
#include "resci/graph/mixed_graph.hpp"

namespace resci::graph {

/// True iff the directed part of `g` has no directed cycle.
bool is_acyclic(const MixedGraph& g);

/// Standard d-separation of i and j given s in a DAG.
/// Throws std::out_of_range / std::invalid_argument on bad nodes or
/// when s contains i or j.
bool d_separated(const Dag& g, int i, int j, NodeSet s);

NodeSet parents(const MixedGraph& g, int i);
NodeSet parents(const Dag& g, int i);

enum class OrientMode { standard, majority };

/// Callback deciding conditional independence of i and j given s.
using IndependenceCallback = std::function<bool(int i, int j, NodeSet s)>;

struct VStructureOptions {
    OrientMode mode = OrientMode::standard;
    /// Required in majority mode.
    IndependenceCallback independent;
    /// Largest conditioning set re-tested in majority mode.
    int max_cond_size = kMaxNodes;
};

/// Counts of the orientation problems met while building a graph.
struct OrientationFlags {
    /// Edges that received arrowheads at both ends.
    int bidirected_conflicts = 0;
    /// Collider arrowheads refused because tiers or forbidden edges fix the
    /// opposite direction.
    int background_conflicts = 0;
    /// Majority mode: triples whose middle node sits in exactly half the
    /// separating sets.
    int ambiguous_triples = 0;
    /// Meek closure skipped because the graph had bidirected edges.
    bool meek_skipped = false;

    bool any_conflict() const { return bidirected_conflicts > 0 || background_conflicts > 0; }
};

struct OrientationResult {
    MixedGraph graph;
    OrientationFlags flags;
};

/// Orients undirected edges whose direction is fixed by tiers or forbidden
/// edges. Other marks are left untouched.
MixedGraph orient_forced(MixedGraph g, const TierOrder& tiers, const BackgroundKnowledge& bk);

/// Collider rule over every unshielded triple i - k - j. Arrowheads
/// accumulate, so opposing colliders on one edge yield i <-> k. An arrowhead
/// contradicting a forced direction is dropped and counted.
/// Throws std::invalid_argument in majority mode without a callback.
OrientationResult orient_v_structures(const MixedGraph& skeleton, const SepsetTable& sepsets, const TierOrder& tiers,
                                      const BackgroundKnowledge& bk, const VStructureOptions& options = {});

struct MeekResult {
    MixedGraph graph;
    bool skipped = false;
};

/// Forced orientations first, then Meek rules R1-R4 to a fixed point. A graph
/// with bidirected edges is returned unchanged with skipped = true.
MeekResult apply_meek_rules(const MixedGraph& g, const TierOrder& tiers = {}, const BackgroundKnowledge& bk = {});

/// CPDAG of a DAG: its v-structures plus Meek closure. With nontrivial tiers
/// or forbidden edges this is the maximally oriented graph under that
/// knowledge. Throws std::invalid_argument if the DAG contradicts it.
MixedGraph cpdag_from_dag(const Dag& g, const TierOrder& tiers = {}, const BackgroundKnowledge& bk = {});

/// Some DAG with the skeleton and directed marks of `g` and no new
/// v-structure, found by repeatedly removing admissible sinks.
std::optional<Dag> consistent_extension(const MixedGraph& g);

enum class ValidityLevel { basic, strict };

enum class Invalidity {
    none,
    bidirected_edge,
    directed_cycle,
    missing_required_adjacency,
    not_extendable,
    not_closed,
};

std::string_view to_string(Invalidity reason);

/// Screening check. basic: no bidirected edge and no directed cycle. strict
/// additionally needs a consistent extension whose re-derived CPDAG (under
/// tiers and bk) equals `g`. With bk.validity_scope set, both checks run on
/// the induced subgraph, and strict there means extendable and closed under
/// the orientation rules. Required adjacencies are always checked on `g`.
Invalidity check_cpdag(const MixedGraph& g, ValidityLevel level, const BackgroundKnowledge& bk = {},
                       const TierOrder& tiers = {});

inline bool is_valid_cpdag(const MixedGraph& g, ValidityLevel level, const BackgroundKnowledge& bk = {},
                           const TierOrder& tiers = {}) {
    return check_cpdag(g, level, bk, tiers) == Invalidity::none;
}

inline constexpr int kDefaultEnumerationCap = 10'000;

struct DagEnumeration {
    std::vector<Dag> dags;
    /// More than `cap` members exist; `dags` holds the first cap found.
    bool overflow = false;
};

/// All consistent extensions of `c`: orient an undirected edge both ways,
/// close under the Meek rules, recurse; results are deduplicated.
/// Throws std::invalid_argument unless `c` passes basic validity.
DagEnumeration enumerate_dags(const MixedGraph& c, int cap = kDefaultEnumerationCap);

}  // namespace resci::graph
