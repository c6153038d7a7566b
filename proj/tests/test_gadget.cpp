#include <catch2/catch_amalgamated.hpp>
#include <set>

#include "braess/fixtures.hpp"
#include "braess/gadget.hpp"
#include "braess/oracle.hpp"
#include "helpers.hpp"

using namespace braess;

namespace {

bool fully_irredundant(const Net& g) {
    return (int)oracle::irredundant_edges(g).size() == g.alive_edge_count();
}

}  // namespace

TEST_CASE("doubled net layout is deterministic") {
    Net g = gadget_gstar(fixtures::series2(), 0);
    GadgetLayout lay = gadget_layout(fixtures::series2());
    REQUIRE(lay.shift == 3);
    REQUIRE(lay.s_star == 6);
    REQUIRE(lay.t_star == 13);
    REQUIRE(g.source == 6);
    REQUIRE(g.target == 13);
    REQUIRE(g.node_space == 14);
    REQUIRE(g.alive_node_count() == 14);
    REQUIRE(g.alive_edge_count() == 32);

    // First copy keeps original ids, second copy is shifted by three.
    REQUIRE(g.edge_table[0].tail == 0);
    REQUIRE(g.edge_table[0].head == 1);
    REQUIRE(g.edge_table[2].tail == 3);
    REQUIRE(g.edge_table[2].head == 4);
}

TEST_CASE("copy edges touching the terminals are dropped") {
    // s->a->t plus a->s and t->a, which can never appear on a route.
    Net g = Net::build(3, {{0, 1}, {1, 2}, {1, 0}, {2, 1}}, 0, 2);
    Net star = gadget_gstar(g, 0);
    // Copies keep only 2 of 4 edges each: 4 + 12 connectors + 16 fan edges.
    REQUIRE(star.alive_edge_count() == 32);
    // The surviving copies of a->s / t->a would make these per-node counts 3.
    REQUIRE((int)star.in_edges[0].size() == 2);   // r'->s', a''->s'
    REQUIRE((int)star.out_edges[2].size() == 2);  // t'->a'', t'->r'
}

TEST_CASE("gadget of an irredundant edge is fully irredundant") {
    Net star = gadget_gstar(fixtures::series2(), 0);
    REQUIRE(fully_irredundant(star));
}

TEST_CASE("stray loops in the input do not poison the gadget") {
    // The loop at node 3 is redundant, but the designated edge 0->3 is on a
    // route, so the doubled net must still come out fully irredundant.
    Net g = Net::build(4, {{3, 3}, {0, 3}, {3, 1}}, 0, 1);
    Net star = gadget_gstar(g, 1);
    for (int e = 0; e < (int)star.edge_table.size(); ++e)
        if (star.edge_alive[e])
            REQUIRE(star.edge_table[e].tail != star.edge_table[e].head);
    REQUIRE(fully_irredundant(star));
}

TEST_CASE("gadget of a redundant edge has a redundant edge") {
    // In redundant_cycle_a the detour edge u->v lies on no route.
    Net star = gadget_gstar(fixtures::redundant_cycle_a(), 2);
    REQUIRE_FALSE(fully_irredundant(star));
}

TEST_CASE("forbidden designated edges are rejected") {
    Net g = Net::build(3, {{0, 1}, {1, 2}, {1, 0}, {2, 1}}, 0, 2);
    REQUIRE_THROWS_AS(gadget_gstar(g, 2), PreconditionError);  // enters source
    REQUIRE_THROWS_AS(gadget_gstar(g, 3), PreconditionError);  // leaves target
    REQUIRE_THROWS_AS(gadget_gstar(g, 7), PreconditionError);  // no such edge
    Net loops = Net::build(3, {{0, 1}, {1, 1}, {1, 2}}, 0, 2);
    REQUIRE_THROWS_AS(gadget_gstar(loops, 1), PreconditionError);
    Net dead = g.without_edges({1});
    REQUIRE_THROWS_AS(gadget_gstar(dead, 1), PreconditionError);
}

TEST_CASE("gadget survives a text round trip") {
    Net star = gadget_gstar(fixtures::redundant_cycle_a(), 2);
    Net back = parse_netfile(emit_netfile(star, "doubled net"));
    REQUIRE(same_net(star, back));
}

TEST_CASE("gadget irredundancy mirrors the designated edge") {
    std::mt19937_64 rng(48);
    int checked = 0;
    while (checked < 120) {
        Net g = testutil::random_net(rng, 4, 7);
        auto irr = oracle::irredundant_edges(g);
        std::set<int> irr_set(irr.begin(), irr.end());
        for (int e = 0; e < (int)g.edge_table.size() && checked < 120; ++e) {
            if (g.edge_table[e].head == g.source) continue;
            if (g.edge_table[e].tail == g.target) continue;
            if (g.edge_table[e].tail == g.edge_table[e].head) continue;
            Net star = gadget_gstar(g, e);
            REQUIRE(fully_irredundant(star) == (irr_set.count(e) > 0));
            ++checked;
        }
    }
}
