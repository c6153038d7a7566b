#pragma once

#include "graph.hpp"

// Small nets shared by the test suites and the CLI demo.

namespace braess::fixtures {

// a=0, b=1, c=2, d=3; the minimal net exhibiting the paradox.
inline Net wheatstone() {
    return Net::build(4, {{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 3}}, 0, 3);
}

// Wheatstone without the b->c shortcut; series-parallel.
inline Net diamond() {
    return Net::build(4, {{0, 1}, {0, 2}, {1, 3}, {2, 3}}, 0, 3);
}

// s=0 -> a=1 -> t=2.
inline Net series2() {
    return Net::build(3, {{0, 1}, {1, 2}}, 0, 2);
}

// Each of these carries a 2-cycle that no simple st-path can use, so the
// cycle edges are redundant and the net is not vulnerable.
// s=0, u=1, t=2, v=3: s->u, u->t, u->v, v->u.
inline Net redundant_cycle_a() {
    return Net::build(4, {{0, 1}, {1, 2}, {1, 3}, {3, 1}}, 0, 2);
}

// s=0, u=1, v=2, t=3: s->u, u->v, v->u, v->t.
inline Net redundant_cycle_b() {
    return Net::build(4, {{0, 1}, {1, 2}, {2, 1}, {2, 3}}, 0, 3);
}

// s=0, u=1, v=2, t=3, x=4, y=5: the 2-cycle x<->y hangs between u and v but
// any simple st-path through it would need y twice.
inline Net redundant_cycle_c() {
    return Net::build(6, {{0, 1}, {1, 2}, {2, 3}, {1, 4}, {4, 5}, {5, 4}, {5, 2}},
                      0, 3);
}

}  // namespace braess::fixtures
