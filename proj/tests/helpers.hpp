#pragma once

#include <random>

#include "braess/graph.hpp"

namespace testutil {

// Random multi-digraph with s=0, t=1: parallel edges, self-loops and cycles
// through the terminals all occur. Node/edge counts are inclusive bounds.
inline braess::Net random_net(std::mt19937_64& rng, int max_nodes = 8,
                              int max_edges = 14) {
    int n = 2 + (int)(rng() % (uint64_t)(max_nodes - 1));
    int m = 1 + (int)(rng() % (uint64_t)max_edges);
    std::vector<std::pair<int, int>> es;
    es.reserve(m);
    for (int i = 0; i < m; ++i)
        es.emplace_back((int)(rng() % n), (int)(rng() % n));
    return braess::Net::build(n, es, 0, 1);
}

// Like random_net but s only feeds and t only drains, so neither terminal
// sits on a cycle. Plain random nets almost always put a terminal on the
// nearest cycle, which short-circuits cycle analysis down its easy paths;
// this shape is what reaches the multi-entry/multi-exit branches.
inline braess::Net random_flow_net(std::mt19937_64& rng, int max_nodes = 8,
                                   int max_edges = 15) {
    int n = 5 + (int)(rng() % (uint64_t)(max_nodes - 4));
    int m = 8 + (int)(rng() % (uint64_t)(max_edges - 7));
    std::vector<std::pair<int, int>> es;
    for (int i = 0; i < m; ++i) {
        int a = (int)(rng() % n), b = (int)(rng() % n);
        if (b == 0 || a == 1) continue;
        es.emplace_back(a, b);
    }
    if (es.empty()) es.emplace_back(0, 1);
    return braess::Net::build(n, es, 0, 1);
}

// Random DAG: edges respect a random topological order, s is its first node
// and t its last. May still need make_st_connected before use.
inline braess::Net random_dag(std::mt19937_64& rng, int max_nodes = 8,
                              int max_edges = 14) {
    int n = 2 + (int)(rng() % (uint64_t)(max_nodes - 1));
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    int m = 1 + (int)(rng() % (uint64_t)max_edges);
    std::vector<std::pair<int, int>> es;
    for (int k = 0; k < m; ++k) {
        int i = (int)(rng() % (uint64_t)(n - 1));
        int j = i + 1 + (int)(rng() % (uint64_t)(n - i - 1));
        es.emplace_back(order[i], order[j]);
    }
    return braess::Net::build(n, es, order.front(), order.back());
}

// Relabel nodes by `perm` (a permutation of [0, node_space)); edge ids and
// their order are untouched.
inline braess::Net permute_nodes(const braess::Net& g, const std::vector<int>& perm) {
    std::vector<std::pair<int, int>> es;
    for (int e = 0; e < (int)g.edge_table.size(); ++e) {
        BRAESS_CHECK(g.edge_alive[e], "permute_nodes expects a fully alive net");
        es.emplace_back(perm[g.edge_table[e].tail], perm[g.edge_table[e].head]);
    }
    braess::Net out =
        braess::Net::build(g.node_space, es, perm[g.source], perm[g.target]);
    for (int v = 0; v < g.node_space; ++v)
        if (!g.node_alive[v]) out.node_alive[perm[v]] = 0;
    out.rebuild_adjacency();
    return out;
}

// Reorder the edge table by `eperm` (new id -> old id); nodes untouched.
inline braess::Net permute_edges(const braess::Net& g, const std::vector<int>& eperm) {
    std::vector<std::pair<int, int>> es;
    for (int old_id : eperm) {
        BRAESS_CHECK(g.edge_alive[old_id], "permute_edges expects a fully alive net");
        es.emplace_back(g.edge_table[old_id].tail, g.edge_table[old_id].head);
    }
    braess::Net out = braess::Net::build(g.node_space, es, g.source, g.target);
    for (int v = 0; v < g.node_space; ++v)
        if (!g.node_alive[v]) out.node_alive[v] = 0;
    out.rebuild_adjacency();
    return out;
}

inline std::vector<int> random_perm(std::mt19937_64& rng, int n) {
    std::vector<int> p(n);
    for (int i = 0; i < n; ++i) p[i] = i;
    std::shuffle(p.begin(), p.end(), rng);
    return p;
}

}  // namespace testutil
