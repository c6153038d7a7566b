#pragma once

#include "braess/cycles.hpp"
#include "braess/oracle.hpp"
#include "braess/ttsp.hpp"

namespace braess {

// Everything the detector learned in one run: the verdict, a pattern witness
// when the cycle analysis produced one (the terminal series-parallel check
// decides without constructing one), every deleted edge tagged with the round
// that removed it, and loop counters backing the complexity asserts in the
// tests. Witnesses always validate against the original input net.
struct Verdict {
    bool vulnerable = false;
    std::optional<WEmbedding> witness;
    std::vector<std::pair<int, int>> deleted_edges;  // (round, edge id)
    struct Stats {
        int rounds = 0;     // cycle rounds; each ends in a deletion or a witness
        int analyses = 0;   // analyze_cycle calls across all rounds
        int max_chain = 0;  // longest closer-cycle chain inside one round
    } stats;
};

// Decides whether the net can be made faster by deleting edges under selfish
// routing, by hunting for the diamond-with-shortcut pattern between source
// and target. Cyclic nets are peeled: the cycle nearest the source either
// surrenders provably useless edges (deleted, then the net is re-restricted
// to nodes on source-target walks) or yields a witness; once acyclic, the
// net is vulnerable exactly when it is not two-terminal series-parallel.
// Runs in polynomial time; every deletion is checked against the oracles in
// the tests, never here.
inline Verdict is_vulnerable(const Net& input) {
    BRAESS_CHECK(input.has_node(input.source) && input.has_node(input.target),
                 "net lacks source/target");
    if (input.source == input.target)
        throw PreconditionError("vulnerability needs distinct source and target");

    Verdict v;
    Net g = make_st_connected(input);
    int edge_budget = g.alive_edge_count();
    while (g.alive_edge_count() > 0) {
        auto cyc = find_nearest_cycle(g);
        if (!cyc) break;
        BRAESS_CHECK(++v.stats.rounds <= edge_budget,
                     "detector rounds exceeded the edge budget");
        CycleContext ctx = make_cycle_context(g, *cyc);
        int chain = 0;
        for (;;) {
            BRAESS_CHECK(++chain <= g.node_space + 1,
                         "closer-cycle chain exceeded the node budget");
            ++v.stats.analyses;
            CycleOutcome out = analyze_cycle(ctx);
            if (auto* red = std::get_if<RedundantEdges>(&out)) {
                for (int e : red->edges)
                    v.deleted_edges.emplace_back(v.stats.rounds, e);
                g = make_st_connected(g.without_edges(red->edges));
                break;
            }
            if (auto* found = std::get_if<FoundEmbedding>(&out)) {
                require_valid_embedding(input, found->witness, "the detector");
                v.vulnerable = true;
                v.witness = std::move(found->witness);
                v.stats.max_chain = std::max(v.stats.max_chain, chain);
                return v;
            }
            ctx = make_cycle_context(g, std::get<CloserCycle>(out).cycle);
        }
        v.stats.max_chain = std::max(v.stats.max_chain, chain);
    }
    // No simple source-target path at all means nothing to slow down.
    v.vulnerable = g.alive_edge_count() > 0 && !is_ttsp(g);
    return v;
}

// Bounded-effort witness for the acyclic case, where the detector's verdict
// comes from the series-parallel reduction and is witness-free. Exhaustive
// search, so callers get an embedding only on small nets; the verdict itself
// is exact at any size.
inline std::optional<WEmbedding> find_witness_acyclic(const Net& g,
                                                      int node_bound = 16) {
    if (!is_acyclic(g))
        throw PreconditionError("acyclic witness search got a cyclic net");
    if (g.alive_node_count() > node_bound) return std::nullopt;
    return oracle::has_w_embedding(g, node_bound);
}

}  // namespace braess
