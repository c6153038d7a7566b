#pragma once

#include "graph.hpp"

namespace braess {

// Layout of the doubled net returned by gadget_gstar: copy one keeps the
// input ids, copy two is shifted by the input's node-id space, and the eight
// fresh terminals follow. Exposed so callers (and the CLI header comment) can
// name gadget nodes.
struct GadgetLayout {
    int shift;  // x -> x (copy 1), x -> x + shift (copy 2)
    int s_star, z1, z2, a1, a2, r1, r2, t_star;
};

inline GadgetLayout gadget_layout(const Net& g) {
    int n = g.node_space;
    return GadgetLayout{n, 2 * n, 2 * n + 1, 2 * n + 2, 2 * n + 3,
                        2 * n + 4, 2 * n + 5, 2 * n + 6, 2 * n + 7};
}

// Doubling construction that ties the irredundancy of one designated edge
// u->v to the irredundancy of the whole result: the output net is fully
// irredundant exactly when u->v lies on a simple st-path of the input. The
// designated edge must not be redundant by shape alone, so loops, edges into
// the source and edges out of the target are rejected.
inline Net gadget_gstar(const Net& g, int edge_id) {
    BRAESS_CHECK(g.has_node(g.source) && g.has_node(g.target), "net lacks source/target");
    if (!g.has_edge(edge_id)) throw PreconditionError("no such edge");
    int u = g.edge_table[edge_id].tail;
    int v = g.edge_table[edge_id].head;
    if (v == g.source) throw PreconditionError("designated edge enters the source");
    if (u == g.target) throw PreconditionError("designated edge leaves the target");
    if (u == v) throw PreconditionError("designated edge is a loop");

    GadgetLayout L = gadget_layout(g);
    int s = g.source, t = g.target;
    std::vector<std::pair<int, int>> es;

    // Both copies, minus the edges no simple path can ever use: edges into
    // the copied source, edges out of the copied target, and loops. Keeping
    // any of those would leave the result trivially non-irredundant.
    for (int off : {0, L.shift}) {
        for (int e = 0; e < (int)g.edge_table.size(); ++e) {
            if (!g.edge_alive[e]) continue;
            int x = g.edge_table[e].tail, y = g.edge_table[e].head;
            if (y == s || x == t || x == y) continue;
            es.emplace_back(x + off, y + off);
        }
    }

    int s1 = s, t1 = t, s2 = s + L.shift, t2 = t + L.shift;
    es.emplace_back(L.s_star, L.z1);
    es.emplace_back(L.z1, L.r1);
    es.emplace_back(L.r1, s1);
    es.emplace_back(t1, L.a2);
    es.emplace_back(L.a2, L.z2);
    es.emplace_back(L.z2, L.t_star);
    es.emplace_back(L.s_star, L.z2);
    es.emplace_back(L.z2, L.r2);
    es.emplace_back(L.r2, s2);
    es.emplace_back(t2, L.a1);
    es.emplace_back(L.a1, L.z1);
    es.emplace_back(L.z1, L.t_star);

    std::vector<int> originals = g.alive_nodes();
    es.emplace_back(u, L.a1);
    es.emplace_back(L.r2, v);
    for (int x : originals) es.emplace_back(L.a1, x + L.shift);
    for (int x : originals) es.emplace_back(x + L.shift, L.r2);
    es.emplace_back(u + L.shift, L.a2);
    es.emplace_back(L.r1, v + L.shift);
    for (int x : originals) es.emplace_back(L.a2, x);
    for (int x : originals) es.emplace_back(x, L.r1);

    Net out = Net::build(2 * g.node_space + 8, es, L.s_star, L.t_star);
    // Dead slots of the input stay dead in both copies.
    for (int x = 0; x < g.node_space; ++x)
        if (!g.node_alive[x]) out.node_alive[x] = out.node_alive[x + L.shift] = 0;
    out.rebuild_adjacency();
    return out;
}

}  // namespace braess
