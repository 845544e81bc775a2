#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "resci/graph/mixed_graph.hpp"

namespace resci::graph {

class GraphParseError : public std::runtime_error {
public:
    GraphParseError(int line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

/// Edge-list text:
///
///     nodes 4
///     0 -> 1
///     1 -- 2
///     2 <-> 3
///
/// Edges appear in MixedGraph::edges() order; each line ends with '\n'.
std::string to_edge_list(const MixedGraph& g);
/// Accepts the format above, plus blank lines and '#' comments.
MixedGraph parse_edge_list(std::string_view text);

/// A graph with optional node labels, as read back from DOT.
struct LabeledGraph {
    MixedGraph graph;
    std::vector<std::string> labels;
};

/// DOT digraph; undirected edges use dir=none, bidirected dir=both.
/// Labels default to the node index.
std::string to_dot(const MixedGraph& g, const std::vector<std::string>& labels = {});
/// Parses the subset of DOT written by to_dot.
LabeledGraph parse_dot(std::string_view text);

}  // namespace resci::graph
