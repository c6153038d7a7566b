#pragma once

#include <numeric>
#include <string>

#include "braess/embedding.hpp"
#include "braess/graph.hpp"

namespace braess {

// Exact rational, always normalized with a positive denominator. Values in
// this module stay tiny (latencies bounded by the edge count), so plain
// long long arithmetic is plenty.
struct Rat {
    long long num = 0;
    long long den = 1;

    Rat() = default;
    Rat(long long n) : num(n) {}  // NOLINT: implicit on purpose
    Rat(long long n, long long d) : num(n), den(d) {
        BRAESS_CHECK(den != 0, "rational with zero denominator");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        long long g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
    }

    friend Rat operator+(Rat a, Rat b) {
        return {a.num * b.den + b.num * a.den, a.den * b.den};
    }
    friend Rat operator-(Rat a, Rat b) {
        return {a.num * b.den - b.num * a.den, a.den * b.den};
    }
    friend Rat operator*(Rat a, Rat b) { return {a.num * b.num, a.den * b.den}; }
    friend bool operator==(Rat a, Rat b) { return a.num == b.num && a.den == b.den; }
    friend bool operator!=(Rat a, Rat b) { return !(a == b); }
    friend bool operator<(Rat a, Rat b) { return a.num * b.den < b.num * a.den; }
    friend bool operator<=(Rat a, Rat b) { return a.num * b.den <= b.num * a.den; }
    friend bool operator>(Rat a, Rat b) { return b < a; }
    friend bool operator>=(Rat a, Rat b) { return b <= a; }

    std::string str() const {
        if (den == 1) return std::to_string(num);
        return std::to_string(num) + "/" + std::to_string(den);
    }
};

// Per-edge latency descriptor. Constant edges charge `value` regardless of
// flow; linear edges charge exactly their flow; blocked edges are constant
// at the big-M value, which no route can afford.
enum class LatencyKind { constant, linear, blocked };

struct Latency {
    LatencyKind kind = LatencyKind::blocked;
    Rat value;
};

struct LatencyAssignment {
    std::vector<Latency> edge;  // indexed by edge id; dead slots stay blocked
    Rat big_m;
};

// The slowdown-demonstrating assignment for a pattern witness: free riding
// along the middle branch and the tails, unit tolls at the top of one branch
// pair, flow-priced meters at the top of the other, and everything outside
// the witness priced out entirely. With these latencies all traffic piles
// onto the a->b->c->d zigzag, while deleting the b->c branch would split it
// across the two short routes and lower everyone's travel time.
inline LatencyAssignment build_latencies(const Net& g, const WEmbedding& w) {
    std::string err = embedding_error(g, w);
    if (!err.empty())
        throw PreconditionError("latency assignment needs a valid witness: " + err);

    LatencyAssignment out;
    out.big_m = Rat(1 + g.alive_edge_count());
    out.edge.assign(g.edge_table.size(), {LatencyKind::blocked, out.big_m});

    auto zero = [&](const Path& p) {
        for (int e : p.edges) out.edge[e] = {LatencyKind::constant, Rat(0)};
    };
    zero(w.tail_s);
    zero(w.bc);
    zero(w.tail_t);
    auto priced = [&](const Path& p, Latency first) {
        zero(p);
        out.edge[p.edges.front()] = first;
    };
    priced(w.ab, {LatencyKind::linear, Rat(0)});
    priced(w.cd, {LatencyKind::linear, Rat(0)});
    priced(w.ac, {LatencyKind::constant, Rat(1)});
    priced(w.bd, {LatencyKind::constant, Rat(1)});
    return out;
}

struct EquilibriumReport {
    Rat demand;
    Rat full_latency;  // everyone on the zigzag route
    Rat sub_latency;   // b->c branch removed, traffic split across both routes
    bool paradox = false;
};

namespace detail {

// Sum of edge latencies along `p`, with linear edges charging flow(e).
template <class Flow>
Rat route_latency(const LatencyAssignment& l, const Path& p, Flow&& flow) {
    Rat total(0);
    for (int e : p.edges) {
        const Latency& le = l.edge[e];
        total = total + (le.kind == LatencyKind::linear ? flow(e) : le.value);
    }
    return total;
}

}  // namespace detail

// Exact equilibrium latencies of the witness instance at demand r, before
// and after deleting the b->c branch. Closed forms are checked against the
// witness's actual routes, so a tampered assignment fails loudly. Demands
// above 1 would leave the regime where the zigzag route wins; the
// demonstration never needs them.
inline EquilibriumReport equilibrium(const Net& g, const WEmbedding& w,
                                     const LatencyAssignment& l, Rat r) {
    if (!(Rat(0) < r && r <= Rat(1)))
        throw PreconditionError("demand must lie in (0, 1], got " + r.str());
    BRAESS_CHECK(l.edge.size() == g.edge_table.size(), "assignment covers a different net");

    Path zig = path_concat(path_concat(path_concat(w.tail_s, w.ab), w.bc),
                           path_concat(w.cd, w.tail_t));
    Path top = path_concat(path_concat(w.tail_s, w.ab), path_concat(w.bd, w.tail_t));
    Path bot = path_concat(path_concat(w.tail_s, w.ac), path_concat(w.cd, w.tail_t));
    for (const Path* p : {&zig, &top, &bot})
        for (int e : p->edges)
            BRAESS_CHECK(l.edge[e].kind != LatencyKind::blocked,
                         "witness route runs through a blocked edge");

    std::vector<char> on_zig(g.edge_table.size(), 0);
    for (int e : zig.edges) on_zig[e] = 1;
    auto full_flow = [&](int e) { return on_zig[e] ? r : Rat(0); };

    EquilibriumReport rep;
    rep.demand = r;
    rep.full_latency = detail::route_latency(l, zig, full_flow);
    BRAESS_CHECK(rep.full_latency == r + r, "zigzag route latency is off");
    BRAESS_CHECK(detail::route_latency(l, top, full_flow) >= rep.full_latency &&
                     detail::route_latency(l, bot, full_flow) >= rep.full_latency,
                 "zigzag route is not an equilibrium");

    // Flows after deleting b->c: half the demand on each remaining route;
    // shared tail edges carry all of it.
    Rat half = r * Rat(1, 2);
    std::vector<Rat> f(g.edge_table.size(), Rat(0));
    for (int e : top.edges) f[e] = f[e] + half;
    for (int e : bot.edges) f[e] = f[e] + half;
    auto split_flow = [&](int e) { return f[e]; };

    Rat lt = detail::route_latency(l, top, split_flow);
    Rat lb = detail::route_latency(l, bot, split_flow);
    BRAESS_CHECK(lt == lb, "split routes disagree at the even split");
    rep.sub_latency = lt;
    BRAESS_CHECK(rep.sub_latency == Rat(1) + half, "split latency is off");

    rep.paradox = rep.full_latency > rep.sub_latency;
    return rep;
}

}  // namespace braess
