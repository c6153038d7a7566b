#pragma once

#include <map>
#include <random>

#include "graph.hpp"

namespace braess {

namespace detail {

// Worklist reduction to a single source->target edge. Two moves: collapse a
// parallel bundle to one edge, and splice out an interior node with exactly
// one edge in and one edge out. The verdict is order-independent; the picker
// chooses among currently applicable moves so tests can randomize the order.
template <class Picker>
bool ttsp_reduce(const Net& g, Picker&& pick) {
    BRAESS_CHECK(g.has_node(g.source) && g.has_node(g.target), "net lacks source/target");
    if (!is_acyclic(g))
        throw PreconditionError("series-parallel check requires an acyclic net");

    std::vector<std::map<int, int>> out(g.node_space), in(g.node_space);
    std::vector<long long> out_deg(g.node_space, 0), in_deg(g.node_space, 0);
    std::vector<char> alive = g.node_alive;
    int alive_nodes = 0;
    for (int v = 0; v < g.node_space; ++v)
        if (alive[v]) ++alive_nodes;
    for (int e = 0; e < (int)g.edge_table.size(); ++e) {
        if (!g.edge_alive[e]) continue;
        int u = g.edge_table[e].tail, w = g.edge_table[e].head;
        ++out[u][w];
        ++in[w][u];
        ++out_deg[u];
        ++in_deg[w];
    }
    for (int v = 0; v < g.node_space; ++v)
        if (alive[v] && v != g.source && v != g.target)
            BRAESS_CHECK(in_deg[v] > 0 && out_deg[v] > 0,
                         "interior node off every st-path; prune first");

    struct Move {
        bool series;
        int x, y;  // parallel: bundle x->y; series: the interior node is x
    };

    while (true) {
        std::vector<Move> moves;
        for (int v = 0; v < g.node_space; ++v) {
            if (!alive[v]) continue;
            for (auto& [w, cnt] : out[v])
                if (cnt >= 2) moves.push_back({false, v, w});
            if (v != g.source && v != g.target && in_deg[v] == 1 && out_deg[v] == 1)
                moves.push_back({true, v, -1});
        }
        if (moves.empty()) break;
        Move m = moves[pick(moves.size())];
        if (!m.series) {
            int extra = out[m.x][m.y] - 1;
            out[m.x][m.y] = 1;
            in[m.y][m.x] = 1;
            out_deg[m.x] -= extra;
            in_deg[m.y] -= extra;
        } else {
            int v = m.x;
            int x = in[v].begin()->first;
            int y = out[v].begin()->first;
            if (x == y)
                throw PreconditionError("cycle surfaced during series-parallel reduction");
            if (--out[x][v] == 0) out[x].erase(v);
            if (--in[v][x] == 0) in[v].erase(x);
            if (--out[v][y] == 0) out[v].erase(y);
            if (--in[y][v] == 0) in[y].erase(v);
            --out_deg[x];
            --in_deg[v];
            --out_deg[v];
            --in_deg[y];
            ++out[x][y];
            ++in[y][x];
            ++out_deg[x];
            ++in_deg[y];
            alive[v] = 0;
            --alive_nodes;
        }
    }
    return alive_nodes == 2 && out_deg[g.source] == 1 && in_deg[g.target] == 1 &&
           out[g.source].count(g.target) == 1 && in_deg[g.source] == 0 &&
           out_deg[g.target] == 0;
}

}  // namespace detail

// Requires an acyclic net where every interior node has an edge in and out.
inline bool is_ttsp(const Net& g) {
    return detail::ttsp_reduce(g, [](size_t) { return 0; });
}

// Same verdict, random reduction order; used to exercise confluence.
inline bool is_ttsp_shuffled(const Net& g, uint64_t seed) {
    std::mt19937_64 rng(seed);
    return detail::ttsp_reduce(g, [&](size_t n) {
        return (size_t)(rng() % n);
    });
}

}  // namespace braess
