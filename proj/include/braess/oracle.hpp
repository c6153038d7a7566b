#pragma once

#include <optional>

#include "embedding.hpp"
#include "graph.hpp"

// Exponential-time reference implementations used as ground truth on small
// nets. Everything here fails loudly (ExplosionGuard) instead of hanging.

namespace braess::oracle {

inline constexpr long long kDefaultPathCap = 1'000'000;
inline constexpr int kDefaultEmbedNodeBound = 10;

// Exhaustive backtracking over simple source-to-target paths, in ascending
// edge-id order. The visitor returns false to stop early. Throws once more
// than `cap` paths have been produced.
template <class F>
void for_each_simple_st_path(const Net& g, F&& visit,
                             long long cap = kDefaultPathCap) {
    BRAESS_CHECK(g.has_node(g.source) && g.has_node(g.target), "net lacks source/target");
    std::vector<char> on_path(g.node_space, 0);
    Path p;
    p.nodes.push_back(g.source);
    on_path[g.source] = 1;
    long long count = 0;

    auto rec = [&](auto&& self, int u) -> bool {
        if (u == g.target) {
            if (++count > cap)
                throw ExplosionGuard("simple st-path enumeration exceeded cap of " +
                                     std::to_string(cap));
            return visit(static_cast<const Path&>(p));
        }
        for (int e : g.out_edges[u]) {
            int w = g.edge_table[e].head;
            if (on_path[w]) continue;
            on_path[w] = 1;
            p.nodes.push_back(w);
            p.edges.push_back(e);
            bool keep_going = self(self, w);
            p.nodes.pop_back();
            p.edges.pop_back();
            on_path[w] = 0;
            if (!keep_going) return false;
        }
        return true;
    };
    rec(rec, g.source);
}

inline std::vector<Path> enumerate_simple_st_paths(const Net& g,
                                                   long long cap = kDefaultPathCap) {
    std::vector<Path> out;
    for_each_simple_st_path(
        g,
        [&](const Path& p) {
            out.push_back(p);
            return true;
        },
        cap);
    return out;
}

// Edges lying on at least one simple st-path, ascending. Stops enumerating as
// soon as every alive edge has been seen.
inline std::vector<int> irredundant_edges(const Net& g,
                                          long long cap = kDefaultPathCap) {
    std::vector<char> seen(g.edge_table.size(), 0);
    int remaining = g.alive_edge_count();
    if (remaining > 0) {
        for_each_simple_st_path(
            g,
            [&](const Path& p) {
                for (int e : p.edges)
                    if (!seen[e]) {
                        seen[e] = 1;
                        --remaining;
                    }
                return remaining > 0;
            },
            cap);
    }
    std::vector<int> out;
    for (int e = 0; e < (int)g.edge_table.size(); ++e)
        if (seen[e]) out.push_back(e);
    return out;
}

// Restriction to irredundant edges, then to nodes still carrying an edge
// (source and target always stay). Preserves the simple st-path set.
inline Net mis(const Net& g, long long cap = kDefaultPathCap) {
    std::vector<int> irr = irredundant_edges(g, cap);
    std::vector<char> keep_edge(g.edge_table.size(), 0);
    for (int e : irr) keep_edge[e] = 1;
    std::vector<int> dead;
    for (int e = 0; e < (int)g.edge_table.size(); ++e)
        if (g.edge_alive[e] && !keep_edge[e]) dead.push_back(e);
    Net h = g.without_edges(dead);
    std::vector<char> keep_node(g.node_space, 0);
    keep_node[g.source] = keep_node[g.target] = 1;
    for (int e : irr) {
        keep_node[g.edge_table[e].tail] = 1;
        keep_node[g.edge_table[e].head] = 1;
    }
    return h.induced(keep_node);
}

// Existence of node-disjoint simple paths s..u and v..t (they may not share
// any node at all). Exhaustive on the first path, BFS for the second.
inline bool two_disjoint_paths(const Net& g, int u, int v,
                               long long cap = kDefaultPathCap) {
    BRAESS_CHECK(g.has_node(u) && g.has_node(v), "probe nodes must be alive");
    std::vector<char> on_path(g.node_space, 0);
    std::vector<int> stack_nodes;
    long long count = 0;

    auto second_leg = [&]() {
        if (on_path[v] || on_path[g.target]) return false;
        std::deque<int> q{v};
        std::vector<char> vis(g.node_space, 0);
        vis[v] = 1;
        while (!q.empty()) {
            int x = q.front();
            q.pop_front();
            if (x == g.target) return true;
            for (int e : g.out_edges[x]) {
                int w = g.edge_table[e].head;
                if (vis[w] || on_path[w]) continue;
                vis[w] = 1;
                q.push_back(w);
            }
        }
        return false;
    };

    auto rec = [&](auto&& self, int cur) -> bool {
        if (cur == u) {
            if (++count > cap) throw ExplosionGuard("disjoint-path search exceeded cap");
            return second_leg();
        }
        for (int e : g.out_edges[cur]) {
            int w = g.edge_table[e].head;
            if (on_path[w]) continue;
            on_path[w] = 1;
            if (self(self, w)) {
                on_path[w] = 0;
                return true;
            }
            on_path[w] = 0;
        }
        return false;
    };
    on_path[g.source] = 1;
    bool found = rec(rec, g.source);
    return found;
}

namespace detail {

struct EmbedSearcher {
    const Net& g;
    std::array<int, 6> image;            // pattern s,a,b,c,d,t -> node ids
    std::vector<char> interior_blocked;  // nodes claimed by a chosen interior
    std::vector<char> is_image;
    std::array<Path, 7> chosen;

    explicit EmbedSearcher(const Net& g_) : g(g_) {}

    // Simple u..goal paths whose interior avoids blocked and image nodes;
    // parallel edges are collapsed to the lowest id. Calls next() per path.
    template <class Next>
    bool paths(int slot, int cur, int goal, Path& partial, Next&& next) {
        std::vector<char> tried_head(g.node_space, 0);
        for (int e : g.out_edges[cur]) {
            int w = g.edge_table[e].head;
            if (tried_head[w]) continue;
            tried_head[w] = 1;
            if (w == goal) {
                partial.nodes.push_back(w);
                partial.edges.push_back(e);
                if (next()) return true;
                partial.nodes.pop_back();
                partial.edges.pop_back();
                continue;
            }
            if (interior_blocked[w] || is_image[w]) continue;
            interior_blocked[w] = 1;
            partial.nodes.push_back(w);
            partial.edges.push_back(e);
            if (paths(slot, w, goal, partial, next)) return true;
            partial.nodes.pop_back();
            partial.edges.pop_back();
            interior_blocked[w] = 0;
        }
        return false;
    }

    bool solve(int slot) {
        if (slot == 7) return true;
        int from = image[braess::detail::kPatternEnds[slot][0]];
        int to = image[braess::detail::kPatternEnds[slot][1]];
        bool tail = slot == 0 || slot == 6;
        if (tail && from == to) {
            chosen[slot] = Path{{from}, {}};
            return solve(slot + 1);
        }
        Path partial;
        partial.nodes.push_back(from);
        bool ok = paths(slot, from, to, partial, [&]() {
            chosen[slot] = partial;
            return solve(slot + 1);
        });
        return ok;
    }
};

}  // namespace detail

// Exhaustive search for a pattern subdivision with tails. Exact for any net
// whose alive node count is within the bound; deterministic (ascending node
// and edge ids). The result always passes validate_embedding.
inline std::optional<WEmbedding> has_w_embedding(const Net& g,
                                                 int node_bound = kDefaultEmbedNodeBound) {
    if (g.alive_node_count() > node_bound)
        throw ExplosionGuard("embedding search limited to " +
                             std::to_string(node_bound) + " nodes");
    std::vector<int> nodes = g.alive_nodes();

    std::vector<std::vector<char>> reach(g.node_space);
    for (int v : nodes) {
        BfsResult r = bfs_shortest(g, {v}, nullptr, Dir::forward);
        reach[v].assign(g.node_space, 0);
        for (int w : nodes)
            if (r.dist[w] >= 0) reach[v][w] = 1;
    }
    int s = g.source, t = g.target;

    // Branch nodes may coincide with a terminal only where the pattern
    // collapses: a with the source, d with the target. Any other collision
    // would force paths to meet at a node none of them may share.
    for (int a : nodes) {
        if (a == t || !reach[s][a]) continue;
        for (int b : nodes) {
            if (b == a || b == s || b == t || !reach[a][b]) continue;
            for (int c : nodes) {
                if (c == a || c == b || c == s || c == t) continue;
                if (!reach[a][c] || !reach[b][c]) continue;
                for (int d : nodes) {
                    if (d == a || d == b || d == c || d == s) continue;
                    if (!reach[b][d] || !reach[c][d] || !reach[d][t]) continue;
                    detail::EmbedSearcher es(g);
                    es.image = {s, a, b, c, d, t};
                    es.interior_blocked.assign(g.node_space, 0);
                    es.is_image.assign(g.node_space, 0);
                    for (int v : es.image) es.is_image[v] = 1;
                    if (es.solve(0)) {
                        WEmbedding w;
                        w.a = a;
                        w.b = b;
                        w.c = c;
                        w.d = d;
                        w.tail_s = es.chosen[0];
                        w.ab = es.chosen[1];
                        w.ac = es.chosen[2];
                        w.bc = es.chosen[3];
                        w.bd = es.chosen[4];
                        w.cd = es.chosen[5];
                        w.tail_t = es.chosen[6];
                        require_valid_embedding(g, w, "embedding search");
                        return w;
                    }
                }
            }
        }
    }
    return std::nullopt;
}

inline bool brute_force_vulnerable(const Net& g,
                                   int node_bound = kDefaultEmbedNodeBound) {
    Net pruned = make_st_connected(g);
    return has_w_embedding(pruned, node_bound).has_value();
}

}  // namespace braess::oracle
