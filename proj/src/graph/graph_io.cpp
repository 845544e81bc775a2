#include "resci/graph/graph_io.hpp"

#include <charconv>
#include <sstream>

namespace resci::graph {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

int parse_int(std::string_view token, int line) {
    int value = 0;
    const auto* end = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(token.data(), end, value);
    if (ec != std::errc{} || ptr != end) throw GraphParseError(line, "expected an integer, got '" + std::string(token) + "'");
    return value;
}

std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (pos < s.size()) {
        while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
        std::size_t end = pos;
        while (end < s.size() && s[end] != ' ' && s[end] != '\t') ++end;
        if (end > pos) out.push_back(s.substr(pos, end - pos));
        pos = end;
    }
    return out;
}

void add_edge_checked(MixedGraph& g, int a, int b, EdgeKind kind, int line) {
    if (a < 0 || b < 0 || a >= g.num_nodes() || b >= g.num_nodes() || a == b) {
        throw GraphParseError(line, "invalid edge endpoints");
    }
    if (g.adjacent(a, b)) throw GraphParseError(line, "duplicate edge between " + std::to_string(a) + " and " + std::to_string(b));
    switch (kind) {
        case EdgeKind::directed: g.set_directed(a, b); break;
        case EdgeKind::undirected: g.set_undirected(a, b); break;
        case EdgeKind::bidirected: g.set_bidirected(a, b); break;
    }
}

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

}  // namespace

std::string to_edge_list(const MixedGraph& g) {
    std::ostringstream os;
    os << "nodes " << g.num_nodes() << '\n';
    for (const Edge& e : g.edges()) {
        const char* op = e.kind == EdgeKind::directed ? "->" : e.kind == EdgeKind::undirected ? "--" : "<->";
        os << e.a << ' ' << op << ' ' << e.b << '\n';
    }
    return os.str();
}

MixedGraph parse_edge_list(std::string_view text) {
    MixedGraph g;
    bool have_header = false;
    int line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto tokens = split_ws(line);
        if (!have_header) {
            if (tokens.size() != 2 || tokens[0] != "nodes") throw GraphParseError(line_no, "expected 'nodes <count>'");
            const int d = parse_int(tokens[1], line_no);
            if (d < 0 || d > kMaxNodes) throw GraphParseError(line_no, "node count out of range");
            g = MixedGraph(d);
            have_header = true;
            continue;
        }
        if (tokens.size() != 3) throw GraphParseError(line_no, "expected '<a> <op> <b>'");
        const int a = parse_int(tokens[0], line_no);
        const int b = parse_int(tokens[2], line_no);
        EdgeKind kind;
        if (tokens[1] == "->") {
            kind = EdgeKind::directed;
        } else if (tokens[1] == "--") {
            kind = EdgeKind::undirected;
        } else if (tokens[1] == "<->") {
            kind = EdgeKind::bidirected;
        } else {
            throw GraphParseError(line_no, "unknown edge operator '" + std::string(tokens[1]) + "'");
        }
        add_edge_checked(g, a, b, kind, line_no);
    }
    if (!have_header) throw GraphParseError(line_no, "missing 'nodes <count>' header");
    return g;
}

std::string to_dot(const MixedGraph& g, const std::vector<std::string>& labels) {
    if (!labels.empty() && static_cast<int>(labels.size()) != g.num_nodes()) {
        throw std::invalid_argument("label count does not match node count");
    }
    std::ostringstream os;
    os << "digraph G {\n";
    for (int v = 0; v < g.num_nodes(); ++v) {
        os << "  " << v << " [label=" << quote(labels.empty() ? std::to_string(v) : labels[static_cast<std::size_t>(v)])
           << "];\n";
    }
    for (const Edge& e : g.edges()) {
        os << "  " << e.a << " -> " << e.b;
        if (e.kind == EdgeKind::undirected) os << " [dir=none]";
        if (e.kind == EdgeKind::bidirected) os << " [dir=both]";
        os << ";\n";
    }
    os << "}\n";
    return os.str();
}

LabeledGraph parse_dot(std::string_view text) {
    struct RawEdge {
        int a, b;
        EdgeKind kind;
        int line;
    };
    std::vector<std::pair<int, std::string>> nodes;
    std::vector<RawEdge> raw;
    int line_no = 0;
    bool opened = false;
    bool closed = false;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = trim(text.substr(0, nl));
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (line.empty()) continue;
        if (!opened) {
            if (line != "digraph G {") throw GraphParseError(line_no, "expected 'digraph G {'");
            opened = true;
            continue;
        }
        if (line == "}") {
            closed = true;
            continue;
        }
        if (closed) throw GraphParseError(line_no, "content after closing brace");
        if (line.back() != ';') throw GraphParseError(line_no, "statement must end with ';'");
        line.remove_suffix(1);
        if (const auto arrow = line.find(" -> "); arrow != std::string_view::npos) {
            std::string_view rest = line.substr(arrow + 4);
            EdgeKind kind = EdgeKind::directed;
            if (const auto attr = rest.find(" ["); attr != std::string_view::npos) {
                const std::string_view spec = rest.substr(attr + 1);
                rest = rest.substr(0, attr);
                if (spec == "[dir=none]") {
                    kind = EdgeKind::undirected;
                } else if (spec == "[dir=both]") {
                    kind = EdgeKind::bidirected;
                } else {
                    throw GraphParseError(line_no, "unsupported edge attribute");
                }
            }
            raw.push_back({parse_int(line.substr(0, arrow), line_no), parse_int(rest, line_no), kind, line_no});
            continue;
        }
        const auto attr = line.find(" [label=\"");
        if (attr == std::string_view::npos || line.back() != ']') throw GraphParseError(line_no, "unrecognized statement");
        const int id = parse_int(line.substr(0, attr), line_no);
        std::string_view body = line.substr(attr + 9);
        body.remove_suffix(1);
        if (body.empty() || body.back() != '"') throw GraphParseError(line_no, "unterminated label");
        body.remove_suffix(1);
        std::string label;
        for (std::size_t t = 0; t < body.size(); ++t) {
            if (body[t] == '\\' && t + 1 < body.size()) ++t;
            label += body[t];
        }
        if (id != static_cast<int>(nodes.size())) throw GraphParseError(line_no, "nodes must be listed in order");
        nodes.emplace_back(id, std::move(label));
    }
    if (!opened || !closed) throw GraphParseError(line_no, "incomplete digraph");
    LabeledGraph out{MixedGraph(static_cast<int>(nodes.size())), {}};
    for (auto& [id, label] : nodes) out.labels.push_back(std::move(label));
    for (const RawEdge& e : raw) add_edge_checked(out.graph, e.a, e.b, e.kind, e.line);
    return out;
}

}  // namespace resci::graph
