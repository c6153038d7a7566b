#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace braess {

struct ParseError : std::runtime_error {
    int line;
    ParseError(int line_, const std::string& what_)
        : std::runtime_error("line " + std::to_string(line_) + ": " + what_), line(line_) {}
};

struct PreconditionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct InternalError : std::logic_error {
    using std::logic_error::logic_error;
};

struct ExplosionGuard : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define BRAESS_CHECK(cond, msg) \
    do { if (!(cond)) throw ::braess::InternalError(msg); } while (0)

struct Edge {
    int tail = -1;
    int head = -1;
};

// Directed multigraph with distinguished source/target. Edge ids are indices
// into edge_table and survive deletion unchanged (edge_alive goes false, the
// slot stays). Node ids live in [0, node_space); absent ids are dead slots.
// Immutable by convention: every mutation returns a fresh Net.
struct Net {
    int node_space = 0;
    std::vector<char> node_alive;
    std::vector<Edge> edge_table;
    std::vector<char> edge_alive;
    int source = -1;
    int target = -1;
    std::vector<std::vector<int>> out_edges;  // alive edges only, ascending ids
    std::vector<std::vector<int>> in_edges;

    bool has_node(int v) const { return v >= 0 && v < node_space && node_alive[v]; }
    bool has_edge(int e) const {
        return e >= 0 && e < (int)edge_table.size() && edge_alive[e];
    }
    int alive_node_count() const {
        return (int)std::count(node_alive.begin(), node_alive.end(), (char)1);
    }
    int alive_edge_count() const {
        return (int)std::count(edge_alive.begin(), edge_alive.end(), (char)1);
    }
    std::vector<int> alive_nodes() const {
        std::vector<int> r;
        for (int v = 0; v < node_space; ++v)
            if (node_alive[v]) r.push_back(v);
        return r;
    }
    std::vector<int> alive_edges() const {
        std::vector<int> r;
        for (int e = 0; e < (int)edge_table.size(); ++e)
            if (edge_alive[e]) r.push_back(e);
        return r;
    }

    void rebuild_adjacency() {
        out_edges.assign(node_space, {});
        in_edges.assign(node_space, {});
        for (int e = 0; e < (int)edge_table.size(); ++e) {
            if (!edge_alive[e]) continue;
            out_edges[edge_table[e].tail].push_back(e);
            in_edges[edge_table[e].head].push_back(e);
        }
    }

    static Net build(int n_nodes, const std::vector<std::pair<int, int>>& edges,
                     int s, int t) {
        if (n_nodes <= 0) throw PreconditionError("net needs at least one node");
        Net g;
        g.node_space = n_nodes;
        g.node_alive.assign(n_nodes, 1);
        for (auto [u, v] : edges) {
            if (u < 0 || u >= n_nodes || v < 0 || v >= n_nodes)
                throw PreconditionError("edge endpoint out of range");
            g.edge_table.push_back({u, v});
        }
        g.edge_alive.assign(g.edge_table.size(), 1);
        g.source = s;
        g.target = t;
        if (s >= 0 || t >= 0) {
            if (!g.has_node(s) || !g.has_node(t))
                throw PreconditionError("source/target not a node");
            if (s == t) throw PreconditionError("source equals target");
        }
        g.rebuild_adjacency();
        return g;
    }

    Net with_st(int s, int t) const {
        Net g = *this;
        if (!g.has_node(s) || !g.has_node(t))
            throw PreconditionError("source/target not a node");
        if (s == t) throw PreconditionError("source equals target");
        g.source = s;
        g.target = t;
        return g;
    }

    Net without_edges(const std::vector<int>& dead) const {
        Net g = *this;
        for (int e : dead) {
            BRAESS_CHECK(g.has_edge(e), "deleting a dead or unknown edge");
            g.edge_alive[e] = 0;
        }
        g.rebuild_adjacency();
        return g;
    }

    // Node-induced subnet: keeps exactly the flagged nodes and the edges whose
    // endpoints both survive.
    Net induced(const std::vector<char>& keep) const {
        Net g = *this;
        for (int v = 0; v < node_space; ++v)
            if (!keep[v]) g.node_alive[v] = 0;
        for (int e = 0; e < (int)edge_table.size(); ++e)
            if (edge_alive[e] &&
                (!g.node_alive[edge_table[e].tail] || !g.node_alive[edge_table[e].head]))
                g.edge_alive[e] = 0;
        BRAESS_CHECK(source < 0 || g.node_alive[source], "induced subnet dropped source");
        BRAESS_CHECK(target < 0 || g.node_alive[target], "induced subnet dropped target");
        g.rebuild_adjacency();
        return g;
    }
};

inline bool same_net(const Net& a, const Net& b) {
    if (a.node_space != b.node_space || a.source != b.source || a.target != b.target)
        return false;
    if (a.node_alive != b.node_alive) return false;
    if (a.edge_table.size() != b.edge_table.size()) return false;
    for (size_t e = 0; e < a.edge_table.size(); ++e) {
        if (a.edge_alive[e] != b.edge_alive[e]) return false;
        if (a.edge_alive[e] && (a.edge_table[e].tail != b.edge_table[e].tail ||
                                a.edge_table[e].head != b.edge_table[e].head))
            return false;
    }
    return true;
}

// Alternating node/edge sequence. nodes.size() == edges.size() + 1; a
// single-node path (no edges) is legal and stands for the empty path.
struct Path {
    std::vector<int> nodes;
    std::vector<int> edges;

    int length() const { return (int)edges.size(); }
    bool empty() const { return edges.empty(); }
    int front() const { return nodes.front(); }
    int back() const { return nodes.back(); }
};

inline bool path_valid(const Net& g, const Path& p) {
    if (p.nodes.size() != p.edges.size() + 1) return false;
    for (int v : p.nodes)
        if (!g.has_node(v)) return false;
    for (size_t i = 0; i < p.edges.size(); ++i) {
        int e = p.edges[i];
        if (!g.has_edge(e)) return false;
        if (g.edge_table[e].tail != p.nodes[i] || g.edge_table[e].head != p.nodes[i + 1])
            return false;
    }
    return true;
}

inline bool path_simple(const Path& p) {
    std::vector<int> ns = p.nodes;
    std::sort(ns.begin(), ns.end());
    return std::adjacent_find(ns.begin(), ns.end()) == ns.end();
}

inline Path path_concat(const Path& a, const Path& b) {
    BRAESS_CHECK(!a.nodes.empty() && !b.nodes.empty() && a.back() == b.front(),
                 "concatenating non-adjacent paths");
    Path r = a;
    r.nodes.insert(r.nodes.end(), b.nodes.begin() + 1, b.nodes.end());
    r.edges.insert(r.edges.end(), b.edges.begin(), b.edges.end());
    return r;
}

// Inclusive slice by node positions.
inline Path path_slice(const Path& p, int from, int to) {
    BRAESS_CHECK(0 <= from && from <= to && to < (int)p.nodes.size(), "bad path slice");
    Path r;
    r.nodes.assign(p.nodes.begin() + from, p.nodes.begin() + to + 1);
    r.edges.assign(p.edges.begin() + from, p.edges.begin() + to);
    return r;
}

// Simple cycle: k distinct nodes, k edges, edges[i] goes nodes[i] ->
// nodes[(i+1) % k]. A self-loop is the k = 1 case.
struct Cycle {
    std::vector<int> nodes;
    std::vector<int> edges;

    int size() const { return (int)nodes.size(); }
    int node_at(int pos) const { return nodes[pos % nodes.size()]; }
};

inline bool cycle_valid(const Net& g, const Cycle& c) {
    int k = c.size();
    if (k < 1 || (int)c.edges.size() != k) return false;
    for (int i = 0; i < k; ++i) {
        int e = c.edges[i];
        if (!g.has_edge(e)) return false;
        if (g.edge_table[e].tail != c.nodes[i] ||
            g.edge_table[e].head != c.nodes[(i + 1) % k])
            return false;
    }
    std::vector<int> ns = c.nodes;
    std::sort(ns.begin(), ns.end());
    return std::adjacent_find(ns.begin(), ns.end()) == ns.end();
}

enum class Dir { forward, backward };

struct BfsResult {
    std::vector<int> dist;         // -1 = unreachable
    std::vector<int> parent_edge;  // -1 at roots / unreached
};

// Unit-weight BFS over alive edges, skipping any edge flagged in `forbidden`
// (indexed by edge id; pass nullptr for none). Backward direction walks edges
// head-to-tail. Roots are seeded in the order given.
inline BfsResult bfs_shortest(const Net& g, const std::vector<int>& roots,
                              const std::vector<char>* forbidden, Dir dir) {
    BfsResult r;
    r.dist.assign(g.node_space, -1);
    r.parent_edge.assign(g.node_space, -1);
    std::deque<int> q;
    for (int v : roots) {
        BRAESS_CHECK(g.has_node(v), "BFS root is not an alive node");
        if (r.dist[v] == -1) {
            r.dist[v] = 0;
            q.push_back(v);
        }
    }
    while (!q.empty()) {
        int u = q.front();
        q.pop_front();
        const auto& adj = dir == Dir::forward ? g.out_edges[u] : g.in_edges[u];
        for (int e : adj) {
            if (forbidden && (*forbidden)[e]) continue;
            int w = dir == Dir::forward ? g.edge_table[e].head : g.edge_table[e].tail;
            if (r.dist[w] != -1) continue;
            r.dist[w] = r.dist[u] + 1;
            r.parent_edge[w] = e;
            q.push_back(w);
        }
    }
    return r;
}

// Tree path root..v (forward) or v..root (backward) from a BFS forest.
inline Path bfs_tree_path(const Net& g, const BfsResult& b, int v, Dir dir) {
    BRAESS_CHECK(b.dist[v] >= 0, "no tree path to unreached node");
    Path p;
    p.nodes.push_back(v);
    int cur = v;
    while (b.parent_edge[cur] != -1) {
        int e = b.parent_edge[cur];
        cur = dir == Dir::forward ? g.edge_table[e].tail : g.edge_table[e].head;
        p.nodes.push_back(cur);
        p.edges.push_back(e);
    }
    if (dir == Dir::forward) {
        std::reverse(p.nodes.begin(), p.nodes.end());
        std::reverse(p.edges.begin(), p.edges.end());
    }
    return p;
}

inline bool is_acyclic(const Net& g) {
    std::vector<int> indeg(g.node_space, 0);
    for (int e = 0; e < (int)g.edge_table.size(); ++e)
        if (g.edge_alive[e]) ++indeg[g.edge_table[e].head];
    std::deque<int> q;
    int alive = 0;
    for (int v = 0; v < g.node_space; ++v)
        if (g.node_alive[v]) {
            ++alive;
            if (indeg[v] == 0) q.push_back(v);
        }
    int seen = 0;
    while (!q.empty()) {
        int u = q.front();
        q.pop_front();
        ++seen;
        for (int e : g.out_edges[u])
            if (--indeg[g.edge_table[e].head] == 0) q.push_back(g.edge_table[e].head);
    }
    return seen == alive;
}

// Maximal subnet whose every node both is reachable from s and reaches t
// (source and target always survive). When s cannot reach t at all the result
// is the bare pair {s, t} with no edges.
inline Net make_st_connected(const Net& g) {
    BRAESS_CHECK(g.has_node(g.source) && g.has_node(g.target), "net lacks source/target");
    BfsResult fwd = bfs_shortest(g, {g.source}, nullptr, Dir::forward);
    if (fwd.dist[g.target] < 0) {
        std::vector<char> keep(g.node_space, 0);
        keep[g.source] = keep[g.target] = 1;
        Net r = g.induced(keep);
        for (int e = 0; e < (int)r.edge_table.size(); ++e) r.edge_alive[e] = 0;
        r.rebuild_adjacency();
        return r;
    }
    BfsResult bwd = bfs_shortest(g, {g.target}, nullptr, Dir::backward);
    std::vector<char> keep(g.node_space, 0);
    for (int v = 0; v < g.node_space; ++v)
        if (g.node_alive[v] && fwd.dist[v] >= 0 && bwd.dist[v] >= 0) keep[v] = 1;
    keep[g.source] = keep[g.target] = 1;
    return g.induced(keep);
}

// ---- NetFile text format ----
// Lines: `s <int>`, `t <int>`, `e <tail> <head>`, `#` comments, blanks.
// Edge ids are assigned in file order starting at 0.

inline Net parse_netfile(const std::string& text, bool require_st = true) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    long long s = -1, t = -1;
    std::vector<std::pair<long long, long long>> edges;
    int s_line = 0, t_line = 0;
    constexpr long long kMaxId = 10'000'000;

    while (std::getline(in, line)) {
        ++lineno;
        size_t i = line.find_first_not_of(" \t\r");
        if (i == std::string::npos || line[i] == '#') continue;
        std::istringstream ls(line);
        std::string kind;
        ls >> kind;
        auto read_id = [&](const char* what) {
            long long v;
            if (!(ls >> v)) throw ParseError(lineno, std::string("expected ") + what);
            if (v < 0) throw ParseError(lineno, std::string(what) + " must be non-negative");
            if (v > kMaxId) throw ParseError(lineno, std::string(what) + " too large");
            return v;
        };
        auto expect_end = [&]() {
            std::string trail;
            if (ls >> trail) throw ParseError(lineno, "trailing tokens on line");
        };
        if (kind == "s") {
            if (s_line) throw ParseError(lineno, "duplicate s line (first at line " +
                                                     std::to_string(s_line) + ")");
            s = read_id("source node id");
            s_line = lineno;
            expect_end();
        } else if (kind == "t") {
            if (t_line) throw ParseError(lineno, "duplicate t line (first at line " +
                                                     std::to_string(t_line) + ")");
            t = read_id("target node id");
            t_line = lineno;
            expect_end();
        } else if (kind == "e") {
            long long u = read_id("edge tail");
            long long v = read_id("edge head");
            edges.emplace_back(u, v);
            expect_end();
        } else {
            throw ParseError(lineno, "unknown directive '" + kind + "'");
        }
    }
    if (require_st) {
        if (s < 0) throw ParseError(lineno, "missing s line");
        if (t < 0) throw ParseError(lineno, "missing t line");
    }
    if (s >= 0 && t >= 0 && s == t) throw ParseError(t_line ? t_line : lineno,
                                                     "source equals target");

    long long max_id = std::max(s, t);
    for (auto [u, v] : edges) max_id = std::max({max_id, u, v});
    if (max_id < 0) throw ParseError(lineno, "empty net");

    Net g;
    g.node_space = (int)max_id + 1;
    g.node_alive.assign(g.node_space, 0);
    if (s >= 0) g.node_alive[s] = 1;
    if (t >= 0) g.node_alive[t] = 1;
    for (auto [u, v] : edges) {
        g.node_alive[u] = g.node_alive[v] = 1;
        g.edge_table.push_back({(int)u, (int)v});
    }
    g.edge_alive.assign(g.edge_table.size(), 1);
    g.source = (int)s;
    g.target = (int)t;
    g.rebuild_adjacency();
    return g;
}

inline std::string emit_netfile(const Net& g, const std::string& header = "") {
    std::ostringstream out;
    if (!header.empty()) {
        std::istringstream h(header);
        std::string line;
        while (std::getline(h, line)) out << "# " << line << "\n";
    }
    if (g.source >= 0) out << "s " << g.source << "\n";
    if (g.target >= 0) out << "t " << g.target << "\n";
    for (int e = 0; e < (int)g.edge_table.size(); ++e)
        if (g.edge_alive[e])
            out << "e " << g.edge_table[e].tail << " " << g.edge_table[e].head << "\n";
    return out.str();
}

inline std::string emit_dot(const Net& g) {
    std::ostringstream out;
    out << "digraph net {\n  rankdir=LR;\n";
    for (int v = 0; v < g.node_space; ++v) {
        if (!g.node_alive[v]) continue;
        out << "  n" << v << " [label=\"" << v << "\"";
        if (v == g.source) out << ", shape=box, style=filled, fillcolor=palegreen";
        else if (v == g.target) out << ", shape=box, style=filled, fillcolor=lightblue";
        out << "];\n";
    }
    for (int e = 0; e < (int)g.edge_table.size(); ++e)
        if (g.edge_alive[e])
            out << "  n" << g.edge_table[e].tail << " -> n" << g.edge_table[e].head
                << " [label=\"" << e << "\"];\n";
    out << "}\n";
    return out.str();
}

}  // namespace braess
