#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <tuple>
#include <variant>
#include <vector>

#include "embedding.hpp"
#include "graph.hpp"

// Locating cycles near the source and deciding, per cycle, whether it yields
// provably redundant edges, a pattern witness, or a replacement cycle that is
// strictly closer to the target. analyze_cycle is the entry point; the
// detector loops it until the net runs out of cycles.

namespace braess {

namespace detail {

inline constexpr long long kFar = 1LL << 60;

struct SccPartition {
    std::vector<int> comp;  // -1 on dead nodes
    std::vector<int> size;
};

inline SccPartition scc_partition(const Net& g) {
    SccPartition r;
    r.comp.assign(g.node_space, -1);
    std::vector<int> order(g.node_space, -1), low(g.node_space, 0);
    std::vector<char> open(g.node_space, 0);
    std::vector<int> trail;
    std::vector<std::pair<int, int>> frames;  // node, next out-edge slot
    int clock = 0;
    for (int root = 0; root < g.node_space; ++root) {
        if (!g.node_alive[root] || order[root] != -1) continue;
        frames.push_back({root, 0});
        order[root] = low[root] = clock++;
        trail.push_back(root);
        open[root] = 1;
        while (!frames.empty()) {
            int u = frames.back().first;
            int i = frames.back().second;
            if (i < (int)g.out_edges[u].size()) {
                ++frames.back().second;
                int w = g.edge_table[g.out_edges[u][i]].head;
                if (order[w] == -1) {
                    order[w] = low[w] = clock++;
                    trail.push_back(w);
                    open[w] = 1;
                    frames.push_back({w, 0});
                } else if (open[w]) {
                    low[u] = std::min(low[u], order[w]);
                }
            } else {
                frames.pop_back();
                if (low[u] == order[u]) {
                    int id = (int)r.size.size();
                    int sz = 0, w;
                    do {
                        w = trail.back();
                        trail.pop_back();
                        open[w] = 0;
                        r.comp[w] = id;
                        ++sz;
                    } while (w != u);
                    r.size.push_back(sz);
                }
                if (!frames.empty())
                    low[frames.back().first] = std::min(low[frames.back().first], low[u]);
            }
        }
    }
    return r;
}

inline Cycle cycle_from_closed(const Path& p) {
    BRAESS_CHECK(p.length() >= 1 && p.front() == p.back(), "not a closed walk");
    Cycle c;
    c.nodes.assign(p.nodes.begin(), p.nodes.end() - 1);
    c.edges = p.edges;
    return c;
}

}  // namespace detail

// A simple cycle through the node that no other cycle node beats on (BFS
// distance from the source, id). Only cycles reachable from the source count;
// nullopt when there are none. The detector analyzes cycles in this order so
// deletions peel the net from the source outward.
inline std::optional<Cycle> find_nearest_cycle(const Net& g) {
    BRAESS_CHECK(g.has_node(g.source), "net lacks a source");
    BfsResult from_s = bfs_shortest(g, {g.source}, nullptr, Dir::forward);
    detail::SccPartition scc = detail::scc_partition(g);
    std::vector<char> looped(g.node_space, 0);
    for (int e = 0; e < (int)g.edge_table.size(); ++e)
        if (g.edge_alive[e] && g.edge_table[e].tail == g.edge_table[e].head)
            looped[g.edge_table[e].tail] = 1;
    int best = -1;
    for (int v = 0; v < g.node_space; ++v) {
        if (!g.node_alive[v] || from_s.dist[v] < 0) continue;
        if (scc.size[scc.comp[v]] < 2 && !looped[v]) continue;
        if (best == -1 || from_s.dist[v] < from_s.dist[best]) best = v;
    }
    if (best == -1) return std::nullopt;
    if (looped[best])
        for (int e : g.out_edges[best])
            if (g.edge_table[e].head == best) return Cycle{{best}, {e}};

    // Shortest detour back to `best` inside its strongly connected component.
    std::vector<char> outside(g.edge_table.size(), 0);
    for (int e = 0; e < (int)g.edge_table.size(); ++e)
        if (g.edge_alive[e] && (scc.comp[g.edge_table[e].tail] != scc.comp[best] ||
                                scc.comp[g.edge_table[e].head] != scc.comp[best]))
            outside[e] = 1;
    BfsResult walk = bfs_shortest(g, {best}, &outside, Dir::forward);
    int closing = -1;
    for (int e : g.in_edges[best]) {
        if (outside[e]) continue;
        int u = g.edge_table[e].tail;
        if (u == best || walk.dist[u] < 0) continue;
        if (closing == -1) {
            closing = e;
            continue;
        }
        int cu = g.edge_table[closing].tail;
        if (walk.dist[u] < walk.dist[cu] ||
            (walk.dist[u] == walk.dist[cu] && e < closing))
            closing = e;
    }
    BRAESS_CHECK(closing != -1, "strongly connected node has no closing edge");
    Path back = bfs_tree_path(g, walk, g.edge_table[closing].tail, Dir::forward);
    Cycle c{back.nodes, back.edges};
    c.edges.push_back(closing);
    BRAESS_CHECK(cycle_valid(g, c), "assembled cycle is not simple");
    return c;
}

// Everything the per-cycle analysis keeps asking for. Entries are the cycle
// nodes a walk from the source can reach without ever using an edge that
// leaves the cycle, so each entry path meets the cycle only at its end; exits
// mirror that toward the target. Both restricted walks come from one BFS, so
// two entry paths share a prefix and then stay apart, and two exit paths stay
// apart until they merge for good.
struct CycleContext {
    const Net* net = nullptr;  // borrowed; keep the net alive while using this
    Cycle cyc;                 // rotated so the entry nearest the source sits first
    int k = 0;
    std::vector<int> pos;       // node -> position on cyc, -1 off the cycle
    BfsResult from_source;      // may enter the cycle, never leaves it
    BfsResult to_target;        // may leave the cycle, never enters it
    BfsResult plain_to_target;  // unrestricted distances to the target
    long long cycle_target_dist = detail::kFar;
    std::vector<int> entries;  // ascending position
    std::vector<int> exits;
    std::map<int, Path> entry_path;  // source .. entry, interior off the cycle
    std::map<int, Path> exit_path;   // exit .. target, interior off the cycle
    int near_entry = -1;  // entry minimizing (distance from source, id)
    int near_exit = -1;   // exit minimizing (distance to target, id)

    bool is_entry(int v) const { return pos[v] >= 0 && from_source.dist[v] >= 0; }
    bool is_exit(int v) const { return pos[v] >= 0 && to_target.dist[v] >= 0; }

    // Position of v when the cycle is read starting from `root`.
    int rooted(int v, int root) const { return ((pos[v] - pos[root]) % k + k) % k; }
    int at_rooted(int root, int off) const {
        return cyc.nodes[((pos[root] + off) % k + k) % k];
    }
    int edge_into(int v) const { return cyc.edges[(pos[v] + k - 1) % k]; }
    int edge_out_of(int v) const { return cyc.edges[pos[v]]; }

    // Forward arc of the cycle between two positions; from == to gives the
    // empty path at that node.
    Path arc(int from, int to) const {
        Path p;
        p.nodes.push_back(cyc.nodes[from % k]);
        int steps = ((to - from) % k + k) % k;
        for (int i = 0; i < steps; ++i) {
            int at = (from + i) % k;
            p.edges.push_back(cyc.edges[at]);
            p.nodes.push_back(cyc.nodes[(at + 1) % k]);
        }
        return p;
    }

    // Index of x on a full entry path, -1 when absent. Tree-path nodes sit at
    // their BFS distance, so membership is one array lookup. Only valid for
    // the paths stored in entry_path / exit_path, not for slices of them.
    int entry_path_index(const Path& p, int x) const {
        int d = from_source.dist[x];
        if (d < 0 || d > p.length() || p.nodes[d] != x) return -1;
        return d;
    }
    int exit_path_index(const Path& q, int x) const {
        int d = to_target.dist[x];
        if (d < 0) return -1;
        int j = q.length() - d;
        if (j < 0 || q.nodes[j] != x) return -1;
        return j;
    }
};

// The context borrows the net, so a temporary argument would dangle.
CycleContext make_cycle_context(const Net&& g, Cycle c) = delete;

inline CycleContext make_cycle_context(const Net& g, Cycle c) {
    BRAESS_CHECK(cycle_valid(g, c), "cycle analysis needs a simple cycle");
    BRAESS_CHECK(g.has_node(g.source) && g.has_node(g.target), "net lacks source/target");
    CycleContext ctx;
    ctx.net = &g;
    ctx.k = c.size();

    std::vector<char> on(g.node_space, 0);
    for (int v : c.nodes) on[v] = 1;
    std::vector<char> leaves(g.edge_table.size(), 0), enters(g.edge_table.size(), 0);
    for (int e = 0; e < (int)g.edge_table.size(); ++e) {
        if (!g.edge_alive[e]) continue;
        if (on[g.edge_table[e].tail]) leaves[e] = 1;
        if (on[g.edge_table[e].head]) enters[e] = 1;
    }
    ctx.from_source = bfs_shortest(g, {g.source}, &leaves, Dir::forward);
    ctx.to_target = bfs_shortest(g, {g.target}, &enters, Dir::backward);
    ctx.plain_to_target = bfs_shortest(g, {g.target}, nullptr, Dir::backward);

    int best_in = -1, best_out = -1;
    for (int v : c.nodes) {
        int ds = ctx.from_source.dist[v];
        if (ds >= 0 && (best_in == -1 || ds < ctx.from_source.dist[best_in] ||
                        (ds == ctx.from_source.dist[best_in] && v < best_in)))
            best_in = v;
        int dt = ctx.to_target.dist[v];
        if (dt >= 0 && (best_out == -1 || dt < ctx.to_target.dist[best_out] ||
                        (dt == ctx.to_target.dist[best_out] && v < best_out)))
            best_out = v;
    }
    BRAESS_CHECK(best_in != -1, "cycle unreachable from the source");
    BRAESS_CHECK(best_out != -1, "cycle cannot reach the target");
    ctx.near_entry = best_in;
    ctx.near_exit = best_out;

    int at = 0;
    while (c.nodes[at] != best_in) ++at;
    std::rotate(c.nodes.begin(), c.nodes.begin() + at, c.nodes.end());
    std::rotate(c.edges.begin(), c.edges.begin() + at, c.edges.end());
    ctx.cyc = std::move(c);

    ctx.pos.assign(g.node_space, -1);
    for (int p = 0; p < ctx.k; ++p) ctx.pos[ctx.cyc.nodes[p]] = p;

    for (int p = 0; p < ctx.k; ++p) {
        int v = ctx.cyc.nodes[p];
        if (ctx.from_source.dist[v] >= 0) {
            ctx.entries.push_back(v);
            ctx.entry_path.emplace(v, bfs_tree_path(g, ctx.from_source, v, Dir::forward));
        }
        if (ctx.to_target.dist[v] >= 0) {
            ctx.exits.push_back(v);
            ctx.exit_path.emplace(v, bfs_tree_path(g, ctx.to_target, v, Dir::backward));
        }
    }

    for (int v : ctx.cyc.nodes)
        if (ctx.plain_to_target.dist[v] >= 0)
            ctx.cycle_target_dist =
                std::min(ctx.cycle_target_dist, (long long)ctx.plain_to_target.dist[v]);
    // The shortest way from the cycle to the target never re-enters the
    // cycle, so the restricted walk must agree with the plain one.
    BRAESS_CHECK(ctx.to_target.dist[ctx.near_exit] == ctx.cycle_target_dist,
                 "restricted and plain target distances disagree");
    return ctx;
}

// Marked nodes in cyclic order, an entry token before an exit token when a
// node is both. The cycle splits cleanly when there is exactly one place
// where an entry token is followed by an exit token; the four stations then
// bound one entry block and one exit block. The pivot is where the blocks
// meet: a shared node when last_entry == first_exit, otherwise the cycle
// edge from the entry block into first_exit.
struct BlockSplit {
    bool clean = false;
    bool pivot_is_node = false;
    int first_entry = -1, last_entry = -1;
    int first_exit = -1, last_exit = -1;
};

inline BlockSplit split_blocks(const CycleContext& ctx) {
    BlockSplit r;
    std::vector<std::pair<int, char>> toks;
    for (int p = 0; p < ctx.k; ++p) {
        int v = ctx.cyc.nodes[p];
        if (ctx.is_entry(v)) toks.push_back({v, 'E'});
        if (ctx.is_exit(v)) toks.push_back({v, 'X'});
    }
    int m = (int)toks.size();
    int cut = -1, cuts = 0;
    for (int i = 0; i < m; ++i)
        if (toks[i].second == 'E' && toks[(i + 1) % m].second == 'X') {
            cut = i;
            ++cuts;
        }
    if (cuts != 1) return r;  // entries and exits interleave
    r.clean = true;
    r.last_entry = toks[cut].first;
    int j = (cut + 1) % m;
    r.first_exit = toks[j].first;
    while (toks[(j + 1) % m].second == 'X') j = (j + 1) % m;
    r.last_exit = toks[j].first;
    r.first_entry = toks[(j + 1) % m].first;
    r.pivot_is_node = r.last_entry == r.first_exit;
    return r;
}

// Which stretch of a cleanly split cycle a node sits on, reading from
// first_entry: the entry arc runs up to the pivot, the exit arc from
// first_exit through last_exit, the neutral arc covers the rest. A node
// pivot belongs to no arc.
enum class Sector { entry_arc, exit_arc, neutral_arc, pivot };

inline Sector sector_of(const CycleContext& ctx, const BlockSplit& bs, int v) {
    BRAESS_CHECK(ctx.pos[v] >= 0, "sector query off the cycle");
    if (bs.pivot_is_node && v == bs.first_exit) return Sector::pivot;
    int rel = ctx.rooted(v, bs.first_entry);
    if (rel < ctx.rooted(bs.first_exit, bs.first_entry)) return Sector::entry_arc;
    if (rel <= ctx.rooted(bs.last_exit, bs.first_entry)) return Sector::exit_arc;
    return Sector::neutral_arc;
}

// Backward search for paths that leave the entry arc and rejoin the exit arc
// while staying on the neutral arc or off the cycle in between. Roots are the
// exit-arc nodes past first_exit, seeded in cycle order; an entry-arc node is
// recorded when reached and never expanded, so walk/parent give the whole
// crossing path and root_of names the exit-arc node it rejoins.
struct ShortcutSearch {
    BfsResult walk;
    std::vector<int> root_of;
    std::vector<int> reached;  // entry-arc nodes a shortcut departs from
};

inline ShortcutSearch find_shortcuts(const CycleContext& ctx, const BlockSplit& bs) {
    const Net& g = *ctx.net;
    ShortcutSearch r;
    r.walk.dist.assign(g.node_space, -1);
    r.walk.parent_edge.assign(g.node_space, -1);
    r.root_of.assign(g.node_space, -1);
    std::deque<int> q;
    int lo = ctx.rooted(bs.first_exit, bs.first_entry) + 1;
    int hi = ctx.rooted(bs.last_exit, bs.first_entry);
    for (int off = lo; off <= hi; ++off) {
        int v = ctx.at_rooted(bs.first_entry, off);
        r.walk.dist[v] = 0;
        r.root_of[v] = v;
        q.push_back(v);
    }
    while (!q.empty()) {
        int u = q.front();
        q.pop_front();
        for (int e : g.in_edges[u]) {
            int v = g.edge_table[e].tail;
            if (r.walk.dist[v] != -1) continue;
            bool terminal = false;
            if (ctx.pos[v] >= 0) {
                Sector s = sector_of(ctx, bs, v);
                if (s == Sector::exit_arc || s == Sector::pivot) continue;
                terminal = s == Sector::entry_arc;
            }
            r.walk.dist[v] = r.walk.dist[u] + 1;
            r.walk.parent_edge[v] = e;
            r.root_of[v] = r.root_of[u];
            if (terminal)
                r.reached.push_back(v);
            else
                q.push_back(v);
        }
    }
    return r;
}

namespace detail {

// Reachability from `seeds` where every node entered along the way lies off
// the cycle or strictly inside the neutral arc.
inline BfsResult neutral_reach(const CycleContext& ctx, const BlockSplit& bs,
                               const std::vector<int>& seeds, Dir dir) {
    const Net& g = *ctx.net;
    BfsResult r;
    r.dist.assign(g.node_space, -1);
    r.parent_edge.assign(g.node_space, -1);
    std::deque<int> q;
    for (int v : seeds) {
        r.dist[v] = 0;
        q.push_back(v);
    }
    while (!q.empty()) {
        int u = q.front();
        q.pop_front();
        const auto& adj = dir == Dir::forward ? g.out_edges[u] : g.in_edges[u];
        for (int e : adj) {
            int v = dir == Dir::forward ? g.edge_table[e].head : g.edge_table[e].tail;
            if (r.dist[v] != -1) continue;
            if (ctx.pos[v] >= 0 && sector_of(ctx, bs, v) != Sector::neutral_arc) continue;
            r.dist[v] = r.dist[u] + 1;
            r.parent_edge[v] = e;
            q.push_back(v);
        }
    }
    return r;
}

}  // namespace detail

// With no shortcut across the pivot, some neutral-arc edges cannot lie on
// any simple source-target path. A neutral-arc edge x -> y stays usable only
// if x is fed from the entry side and y drains back toward it directly, or x
// is fed from the exit side and y reaches the exit arc through a shortcut
// interior. Everything failing both tests is redundant; at least one edge
// always is, or the analysis upstream was wrong.
inline std::vector<int> redundant_neutral_edges(const CycleContext& ctx,
                                                const BlockSplit& bs,
                                                const ShortcutSearch& sc) {
    int k = ctx.k;
    int rx1 = ctx.rooted(bs.first_exit, bs.first_entry);
    int rxh = ctx.rooted(bs.last_exit, bs.first_entry);
    std::vector<int> entry_seeds, exit_seeds, co_seeds;
    for (int off = 0; off < rx1; ++off)
        entry_seeds.push_back(ctx.at_rooted(bs.first_entry, off));
    for (int off = rx1; off <= rxh; ++off)
        exit_seeds.push_back(ctx.at_rooted(bs.first_entry, off));
    co_seeds = entry_seeds;
    co_seeds.push_back(ctx.at_rooted(bs.first_entry, rx1));

    BfsResult fed_by_entries = detail::neutral_reach(ctx, bs, entry_seeds, Dir::forward);
    BfsResult fed_by_exits = detail::neutral_reach(ctx, bs, exit_seeds, Dir::forward);
    BfsResult drains_to_entries = detail::neutral_reach(ctx, bs, co_seeds, Dir::backward);

    std::vector<int> doomed;
    for (int off = rxh; off < k; ++off) {
        int p = (ctx.pos[bs.first_entry] + off) % k;
        int x = ctx.cyc.nodes[p];
        int y = ctx.cyc.nodes[(p + 1) % k];
        int e = ctx.cyc.edges[p];
        bool direct = fed_by_entries.dist[x] >= 0 &&
                      (y == bs.first_entry || drains_to_entries.dist[y] >= 0);
        bool detour =
            fed_by_exits.dist[x] >= 0 && y != bs.first_entry && sc.walk.dist[y] >= 0;
        if (!direct && !detour) doomed.push_back(e);
    }
    BRAESS_CHECK(!doomed.empty(), "no redundant edge on the neutral arc");
    std::sort(doomed.begin(), doomed.end());
    return doomed;
}

// The three ways a cycle analysis can end. Redundant edges never lie on a
// simple source-target path, so deleting them preserves the verdict; an
// embedding settles the question outright; a closer cycle restarts the
// analysis strictly nearer the target, which bounds the loop.
struct RedundantEdges {
    std::vector<int> edges;
};
struct FoundEmbedding {
    WEmbedding witness;
};
struct CloserCycle {
    Cycle cycle;
};
using CycleOutcome = std::variant<RedundantEdges, FoundEmbedding, CloserCycle>;

inline bool closer_cycle_ok(const CycleContext& ctx, const Cycle& c2) {
    if (!cycle_valid(*ctx.net, c2)) return false;
    if (std::find(c2.nodes.begin(), c2.nodes.end(), ctx.near_entry) == c2.nodes.end())
        return false;
    long long d2 = detail::kFar;
    for (int v : c2.nodes)
        if (ctx.plain_to_target.dist[v] >= 0)
            d2 = std::min(d2, (long long)ctx.plain_to_target.dist[v]);
    return d2 < ctx.cycle_target_dist;
}

namespace detail {

// First node of qa that also lies on qb. Both are full exit paths into the
// target, so they merge eventually and stay merged.
inline std::tuple<int, int, int> merge_point(const CycleContext& ctx, const Path& qa,
                                             const Path& qb) {
    for (int j = 0; j < (int)qa.nodes.size(); ++j) {
        int idx = ctx.exit_path_index(qb, qa.nodes[j]);
        if (idx >= 0) return {qa.nodes[j], j, idx};
    }
    throw InternalError("exit paths never merge");
}

// Where a probing entry path lands on a pair of exit paths. Nodes on either
// path at or past the merge point count as suffix hits; the fronts (the exits
// themselves) do not count at all.
struct Touch {
    int node = -1;
    int seq = -1;   // index on the probe
    int on_a = -1;  // index on the first exit path, -1 when absent
    int on_b = -1;
    enum Where { leg_a, leg_b, suffix } where = leg_a;
};

inline std::vector<Touch> exit_touches(const CycleContext& ctx, const Path& probe,
                                       int after, const Path& qa, int merge_a,
                                       const Path& qb, int merge_b) {
    std::vector<Touch> r;
    for (int j = after + 1; j < (int)probe.nodes.size(); ++j) {
        Touch t;
        t.node = probe.nodes[j];
        t.seq = j;
        t.on_a = ctx.exit_path_index(qa, t.node);
        t.on_b = ctx.exit_path_index(qb, t.node);
        if ((t.on_a >= 0 && t.on_a >= merge_a) || (t.on_b >= 0 && t.on_b >= merge_b))
            t.where = Touch::suffix;
        else if (t.on_a > 0)
            t.where = Touch::leg_a;
        else if (t.on_b > 0)
            t.where = Touch::leg_b;
        else
            continue;
        r.push_back(t);
    }
    return r;
}

// Index of the last equal position of two tree paths from the same BFS; they
// share a prefix and never meet again after it.
inline int fork_index(const Path& a, const Path& b) {
    int j = 0;
    while (j + 1 < (int)a.nodes.size() && j + 1 < (int)b.nodes.size() &&
           a.nodes[j + 1] == b.nodes[j + 1])
        ++j;
    return j;
}

}  // namespace detail

// Witness assembled straight from a shortcut: enter at w, run the entry arc
// to exit_a, cross via the shortcut to z, continue to exit_b, drain both legs
// to where the exit paths merge.
inline WEmbedding shortcut_witness(const CycleContext& ctx, int w, int z,
                                   const Path& shortcut, int exit_a, int exit_b,
                                   const Path& qa, const Path& qb, int ja, int jb,
                                   Path tail) {
    WEmbedding e;
    e.a = w;
    e.b = exit_a;
    e.c = z;
    e.d = qa.nodes[ja];
    e.tail_s = std::move(tail);
    e.ab = ctx.arc(ctx.pos[w], ctx.pos[exit_a]);
    e.ac = shortcut;
    e.bc = ctx.arc(ctx.pos[exit_a], ctx.pos[z]);
    e.bd = path_slice(qa, 0, ja);
    e.cd = path_concat(ctx.arc(ctx.pos[z], ctx.pos[exit_b]), path_slice(qb, 0, jb));
    e.tail_t = path_slice(qa, ja, (int)qa.nodes.size() - 1);
    return e;
}

// Analysis of a cleanly split cycle. A shortcut, when one exists, all but
// hands over the pattern; the work is picking the two exit legs and routing
// around any places where first_entry's tree path crosses them. Without a
// shortcut the neutral arc must contain redundant edges.
inline CycleOutcome analyze_split(const CycleContext& ctx, const BlockSplit& bs) {
    const Net& g = *ctx.net;
    ShortcutSearch sc = find_shortcuts(ctx, bs);
    if (sc.reached.empty())
        return RedundantEdges{redundant_neutral_edges(ctx, bs, sc)};

    auto rel = [&](int v) { return ctx.rooted(v, bs.first_entry); };
    int w = sc.reached.front();
    for (int v : sc.reached)
        if (rel(v) > rel(w)) w = v;
    int z = sc.root_of[w];
    Path shortcut = bfs_tree_path(g, sc.walk, w, Dir::backward);

    // Keep the nearest exit as a leg; which leg depends on whether it falls
    // between the shortcut's endpoints along the cycle.
    bool inside = rel(w) < rel(ctx.near_exit) && rel(ctx.near_exit) < rel(z);
    int exit_a = inside ? ctx.near_exit : bs.first_exit;
    int exit_b = ctx.near_exit;
    if (inside) {
        exit_b = -1;
        for (int off = rel(z); off <= rel(bs.last_exit) && exit_b == -1; ++off) {
            int v = ctx.at_rooted(bs.first_entry, off);
            if (ctx.is_exit(v)) exit_b = v;
        }
        BRAESS_CHECK(exit_b != -1, "no exit leg beyond the shortcut");
    }
    const Path& qa = ctx.exit_path.at(exit_a);
    const Path& qb = ctx.exit_path.at(exit_b);
    auto [tprime, ja, jb] = detail::merge_point(ctx, qa, qb);
    const Path& near_path = ctx.entry_path.at(ctx.near_entry);

    if (rel(ctx.near_entry) <= rel(w)) {
        Path tail = path_concat(near_path, ctx.arc(ctx.pos[ctx.near_entry], ctx.pos[w]));
        return FoundEmbedding{shortcut_witness(ctx, w, z, shortcut, exit_a, exit_b, qa,
                                               qb, ja, jb, std::move(tail))};
    }

    // The nearest entry sits past the shortcut, so the pattern has to come in
    // through first_entry instead, and its tree path may cross the exit legs.
    const Path& head_path = ctx.entry_path.at(bs.first_entry);
    int js = detail::fork_index(head_path, near_path);
    int sprime = head_path.nodes[js];
    auto touches = detail::exit_touches(ctx, head_path, js, qa, ja, qb, jb);
    bool any_a = false, any_b = false, any_suffix = false;
    for (const auto& t : touches) {
        any_a |= t.where == detail::Touch::leg_a;
        any_b |= t.where == detail::Touch::leg_b;
        any_suffix |= t.where == detail::Touch::suffix;
    }
    int qa_end = (int)qa.nodes.size() - 1;

    if (any_suffix) {
        // Crossing the shared suffix exposes a cycle through it, strictly
        // closer to the target than the one under analysis.
        const Path& qstar = exit_a == ctx.near_exit ? qa : qb;
        int wj = -1, wq = -1;
        for (int j = 0; j < (int)head_path.nodes.size(); ++j) {
            int idx = ctx.exit_path_index(qstar, head_path.nodes[j]);
            if (idx >= 0) {
                wj = j;
                wq = idx;
            }
        }
        BRAESS_CHECK(wj >= 0, "suffix crossing vanished");
        Path closed = path_slice(head_path, wj, (int)head_path.nodes.size() - 1);
        closed = path_concat(closed, ctx.arc(ctx.pos[bs.first_entry],
                                             ctx.pos[ctx.near_entry]));
        closed = path_concat(closed,
                             ctx.arc(ctx.pos[ctx.near_entry], ctx.pos[ctx.near_exit]));
        closed = path_concat(closed, path_slice(ctx.exit_path.at(ctx.near_exit), 0, wq));
        return CloserCycle{detail::cycle_from_closed(closed)};
    }
    if (any_a && any_b) {
        // Crossings on both legs: pick two adjacent ones on different legs
        // and bend the pattern through the stretch between them.
        const detail::Touch* ta = nullptr;
        const detail::Touch* tb = nullptr;
        for (size_t i = 0; i + 1 < touches.size(); ++i)
            if (touches[i].where != touches[i + 1].where) {
                ta = &touches[i];
                tb = &touches[i + 1];
                break;
            }
        BRAESS_CHECK(ta, "crossings on both legs but never adjacent");
        auto leg_to = [&](const detail::Touch& t) {
            if (t.where == detail::Touch::leg_a) return path_slice(qa, 0, t.on_a);
            return path_concat(ctx.arc(ctx.pos[exit_a], ctx.pos[exit_b]),
                               path_slice(qb, 0, t.on_b));
        };
        auto leg_down = [&](const detail::Touch& t) {
            if (t.where == detail::Touch::leg_a) return path_slice(qa, t.on_a, ja);
            return path_slice(qb, t.on_b, jb);
        };
        WEmbedding e;
        e.a = exit_a;
        e.b = ta->node;
        e.c = tb->node;
        e.d = tprime;
        e.tail_s = path_concat(near_path, ctx.arc(ctx.pos[ctx.near_entry], ctx.pos[exit_a]));
        e.ab = leg_to(*ta);
        e.ac = leg_to(*tb);
        e.bc = path_slice(head_path, ta->seq, tb->seq);
        e.bd = leg_down(*ta);
        e.cd = leg_down(*tb);
        e.tail_t = path_slice(qa, ja, qa_end);
        return FoundEmbedding{e};
    }
    if (any_a || any_b) {
        // Crossings on one leg only: bend at the one deepest along that leg,
        // so the leg's upper part and the probe's tail part stay clear.
        bool on_a = any_a;
        const detail::Touch* om = nullptr;
        for (const auto& t : touches) {
            if (t.where != (on_a ? detail::Touch::leg_a : detail::Touch::leg_b)) continue;
            if (!om || (on_a ? t.on_a > om->on_a : t.on_b > om->on_b)) om = &t;
        }
        WEmbedding e;
        e.a = sprime;
        e.b = om->node;
        e.c = ctx.near_entry;
        e.d = tprime;
        e.tail_s = path_slice(near_path, 0, js);
        e.ab = path_slice(head_path, js, om->seq);
        e.ac = path_slice(near_path, js, (int)near_path.nodes.size() - 1);
        e.bc = path_concat(
            path_slice(head_path, om->seq, (int)head_path.nodes.size() - 1),
            ctx.arc(ctx.pos[bs.first_entry], ctx.pos[ctx.near_entry]));
        if (on_a) {
            e.bd = path_slice(qa, om->on_a, ja);
            e.cd = path_concat(ctx.arc(ctx.pos[ctx.near_entry], ctx.pos[exit_b]),
                               path_slice(qb, 0, jb));
        } else {
            e.bd = path_slice(qb, om->on_b, jb);
            e.cd = path_concat(ctx.arc(ctx.pos[ctx.near_entry], ctx.pos[exit_a]),
                               path_slice(qa, 0, ja));
        }
        e.tail_t = path_slice(qa, ja, qa_end);
        return FoundEmbedding{e};
    }
    // No crossings at all: the direct witness works, entered through
    // first_entry's tree path.
    Path tail = path_concat(head_path, ctx.arc(ctx.pos[bs.first_entry], ctx.pos[w]));
    return FoundEmbedding{shortcut_witness(ctx, w, z, shortcut, exit_a, exit_b, qa, qb,
                                           ja, jb, std::move(tail))};
}

// One attempt at pinning the pattern onto an interleaved cycle: come in
// through `anchor`, leave at exit_a, come in again through entry_b, leave
// again at exit_b, all in cycle order from the anchor. exit_a may be the
// anchor itself and entry_b may equal exit_b (a node playing both roles).
struct Frame {
    int anchor = -1;
    int exit_a = -1;
    int entry_b = -1;
    int exit_b = -1;
};

// Try one frame. Returns nothing when the frame is malformed, its anchor
// path is crossed by an exit leg, or the assembled result fails its own
// contract; the caller then moves on to the next frame.
inline std::optional<CycleOutcome> run_frame(const CycleContext& ctx, const Frame& fr) {
    const Net& g = *ctx.net;
    BRAESS_CHECK(ctx.is_entry(fr.anchor) && ctx.is_entry(fr.entry_b) &&
                     ctx.is_exit(fr.exit_a) && ctx.is_exit(fr.exit_b),
                 "frame roles mismatch");
    int pa = ctx.rooted(fr.exit_a, fr.anchor);
    int pe = ctx.rooted(fr.entry_b, fr.anchor);
    int pb = ctx.rooted(fr.exit_b, fr.anchor);
    if (pa == 0 && fr.exit_a != fr.anchor) return std::nullopt;
    if (pa >= pe) return std::nullopt;
    if (pe > pb) return std::nullopt;
    if (pe == pb && fr.entry_b != fr.exit_b) return std::nullopt;

    const Path& anchor_path = ctx.entry_path.at(fr.anchor);
    const Path& probe = ctx.entry_path.at(fr.entry_b);
    const Path& qa = ctx.exit_path.at(fr.exit_a);
    const Path& qb = ctx.exit_path.at(fr.exit_b);
    auto [tprime, ja, jb] = detail::merge_point(ctx, qa, qb);

    // The anchor's own approach must stay clear of both exit legs; only its
    // final node may sit on them (it does when anchor == exit_a).
    for (int i = 0; i + 1 < (int)anchor_path.nodes.size(); ++i) {
        int x = anchor_path.nodes[i];
        if (ctx.exit_path_index(qa, x) >= 0 || ctx.exit_path_index(qb, x) >= 0)
            return std::nullopt;
    }

    int js = detail::fork_index(anchor_path, probe);
    int sprime = anchor_path.nodes[js];
    auto touches = detail::exit_touches(ctx, probe, js, qa, ja, qb, jb);

    int probe_end = (int)probe.nodes.size() - 1;
    int anchor_end = (int)anchor_path.nodes.size() - 1;
    int qa_end = (int)qa.nodes.size() - 1;

    auto stem = [&] {  // fork .. anchor .. exit_a
        return path_concat(path_slice(anchor_path, js, anchor_end),
                           ctx.arc(ctx.pos[fr.anchor], ctx.pos[fr.exit_a]));
    };
    auto full_stem = [&] {  // source .. anchor .. exit_a, used as a tail
        return path_concat(anchor_path, ctx.arc(ctx.pos[fr.anchor], ctx.pos[fr.exit_a]));
    };
    auto wrap_back = [&] {  // exit_b .. exit_a the long way around the cycle
        return ctx.arc(ctx.pos[fr.exit_b], ctx.pos[fr.exit_a]);
    };
    auto accept = [&](WEmbedding e) -> std::optional<CycleOutcome> {
        if (!validate_embedding(g, e)) return std::nullopt;
        return CycleOutcome{FoundEmbedding{std::move(e)}};
    };
    auto accept_cycle = [&](const Path& closed) -> std::optional<CycleOutcome> {
        Cycle c2 = detail::cycle_from_closed(closed);
        if (!closer_cycle_ok(ctx, c2)) return std::nullopt;
        return CycleOutcome{CloserCycle{std::move(c2)}};
    };

    if (touches.empty()) {
        WEmbedding e;
        e.a = sprime;
        e.b = fr.exit_a;
        e.c = fr.entry_b;
        e.d = tprime;
        e.tail_s = path_slice(anchor_path, 0, js);
        e.ab = stem();
        e.ac = path_slice(probe, js, probe_end);
        e.bc = ctx.arc(ctx.pos[fr.exit_a], ctx.pos[fr.entry_b]);
        e.bd = path_slice(qa, 0, ja);
        e.cd = path_concat(ctx.arc(ctx.pos[fr.entry_b], ctx.pos[fr.exit_b]),
                           path_slice(qb, 0, jb));
        e.tail_t = path_slice(qa, ja, qa_end);
        return accept(std::move(e));
    }
    const detail::Touch& alpha = touches.front();
    const detail::Touch& omega = touches.back();

    if (alpha.where == detail::Touch::leg_a) {
        // The probe hits the first leg before anything else: reroute the
        // pattern's middle through the leg's upper part.
        WEmbedding e;
        e.a = sprime;
        e.b = fr.exit_a;
        e.c = alpha.node;
        e.d = tprime;
        e.tail_s = path_slice(anchor_path, 0, js);
        e.ab = stem();
        e.ac = path_slice(probe, js, alpha.seq);
        e.bc = path_slice(qa, 0, alpha.on_a);
        e.bd = path_concat(ctx.arc(ctx.pos[fr.exit_a], ctx.pos[fr.exit_b]),
                           path_slice(qb, 0, jb));
        e.cd = path_slice(qa, alpha.on_a, ja);
        e.tail_t = path_slice(qa, ja, qa_end);
        return accept(std::move(e));
    }
    if (alpha.where == detail::Touch::leg_b) {
        WEmbedding e;
        e.a = sprime;
        e.b = fr.exit_a;
        e.c = alpha.node;
        e.d = tprime;
        e.tail_s = path_slice(anchor_path, 0, js);
        e.ab = stem();
        e.ac = path_slice(probe, js, alpha.seq);
        e.bc = path_concat(ctx.arc(ctx.pos[fr.exit_a], ctx.pos[fr.exit_b]),
                           path_slice(qb, 0, alpha.on_b));
        e.bd = path_slice(qa, 0, ja);
        e.cd = path_slice(qb, alpha.on_b, jb);
        e.tail_t = path_slice(qa, ja, qa_end);
        return accept(std::move(e));
    }
    // First crossing lands on the shared suffix.
    if (omega.where == detail::Touch::leg_a) {
        WEmbedding e;
        e.a = fr.exit_a;
        e.b = omega.node;
        e.c = fr.entry_b;
        e.d = tprime;
        e.tail_s = full_stem();
        e.ab = path_slice(qa, 0, omega.on_a);
        e.ac = ctx.arc(ctx.pos[fr.exit_a], ctx.pos[fr.entry_b]);
        e.bc = path_slice(probe, omega.seq, probe_end);
        e.bd = path_slice(qa, omega.on_a, ja);
        e.cd = path_concat(ctx.arc(ctx.pos[fr.entry_b], ctx.pos[fr.exit_b]),
                           path_slice(qb, 0, jb));
        e.tail_t = path_slice(qa, ja, qa_end);
        return accept(std::move(e));
    }
    if (omega.where == detail::Touch::suffix) {
        // Probe enters and leaves through the suffix: close a cycle through
        // its last crossing.
        Path closed = path_slice(probe, omega.seq, probe_end);
        closed = path_concat(closed, ctx.arc(ctx.pos[fr.entry_b], ctx.pos[fr.exit_b]));
        closed = path_concat(closed, wrap_back());
        closed = path_concat(closed, path_slice(qa, 0, omega.on_a));
        return accept_cycle(closed);
    }
    // First crossing on the suffix, last inside the second leg.
    std::vector<const detail::Touch*> leg_a_hits;
    for (const auto& t : touches)
        if (t.where == detail::Touch::leg_a) leg_a_hits.push_back(&t);
    if (leg_a_hits.empty()) {
        // Close a cycle through the first suffix node the probe visits,
        // walking the suffix from the merge point.
        int bq = -1, bseq = -1;
        for (int j2 = ja; j2 <= qa_end && bq == -1; ++j2) {
            int idx = ctx.entry_path_index(probe, qa.nodes[j2]);
            if (idx >= 0) {
                bq = j2;
                bseq = idx;
            }
        }
        BRAESS_CHECK(bq >= 0, "suffix crossing vanished");
        Path closed = path_slice(probe, bseq, probe_end);
        closed = path_concat(closed, ctx.arc(ctx.pos[fr.entry_b], ctx.pos[fr.exit_b]));
        closed = path_concat(closed, wrap_back());
        closed = path_concat(closed, path_slice(qa, 0, bq));
        return accept_cycle(closed);
    }
    const detail::Touch& bhat = *leg_a_hits.back();
    const detail::Touch* ghat = nullptr;
    for (const auto& t : touches)
        if (t.seq > bhat.seq && t.where == detail::Touch::leg_b) {
            ghat = &t;
            break;
        }
    BRAESS_CHECK(ghat, "no second-leg crossing after the last first-leg one");
    bool crosses_suffix_between = false;
    for (const auto& t : touches)
        if (t.seq > bhat.seq && t.seq < ghat->seq && t.where == detail::Touch::suffix)
            crosses_suffix_between = true;
    if (!crosses_suffix_between) {
        // The probe stretch between its deepest first-leg crossing and the
        // next second-leg one is clear: bend the pattern through it.
        WEmbedding e;
        e.a = fr.exit_a;
        e.b = bhat.node;
        e.c = ghat->node;
        e.d = tprime;
        e.tail_s = full_stem();
        e.ab = path_slice(qa, 0, bhat.on_a);
        e.ac = path_concat(ctx.arc(ctx.pos[fr.exit_a], ctx.pos[fr.exit_b]),
                           path_slice(qb, 0, ghat->on_b));
        e.bc = path_slice(probe, bhat.seq, ghat->seq);
        e.bd = path_slice(qa, bhat.on_a, ja);
        e.cd = path_slice(qb, ghat->on_b, jb);
        e.tail_t = path_slice(qa, ja, qa_end);
        return accept(std::move(e));
    }
    // A suffix node pollutes that stretch: it closes a strictly closer cycle
    // instead.
    Path closed = path_slice(probe, bhat.seq, probe_end);
    closed = path_concat(closed, ctx.arc(ctx.pos[fr.entry_b], ctx.pos[fr.exit_b]));
    closed = path_concat(closed, wrap_back());
    closed = path_concat(closed, path_slice(qa, 0, bhat.on_a));
    return accept_cycle(closed);
}

// Analysis of a cycle whose entries and exits interleave. Some node then
// plays both roles, and one of a fixed repertoire of frames must stick; each
// is tried in turn and checked against its own contract, so a frame that
// fails cleanly just passes the baton.
inline CycleOutcome analyze_mixed(const CycleContext& ctx) {
    int k = ctx.k;
    auto node_at = [&](int p) { return ctx.cyc.nodes[((p % k) + k) % k]; };
    auto first_exit_in = [&](int lo, int hi) {
        for (int p = lo; p <= hi; ++p)
            if (ctx.is_exit(node_at(p))) return node_at(p);
        return -1;
    };
    auto first_entry_in = [&](int lo, int hi) {
        for (int p = lo; p <= hi; ++p)
            if (ctx.is_entry(node_at(p))) return node_at(p);
        return -1;
    };
    auto last_entry_in = [&](int lo, int hi) {
        for (int p = hi; p >= lo; --p)
            if (ctx.is_entry(node_at(p))) return node_at(p);
        return -1;
    };

    // Primary frames spread the four stations over distinct nodes; the
    // fallback list collapses the second entry/exit pair onto one both-role
    // node (and, anchored at a both-role nearest entry, the first pair too),
    // which is the only shape available on very small or very busy cycles.
    std::vector<Frame> frames, fallback;
    int ne = ctx.near_entry, nx = ctx.near_exit;
    int pxs = ctx.pos[nx];
    if (pxs > 0) {
        int f0 = first_exit_in(1, k - 1);
        if (f0 != -1) {
            int mid = last_entry_in(ctx.pos[f0] + 1, pxs - 1);
            if (mid != -1) frames.push_back({ne, f0, mid, nx});
            if (ctx.is_entry(nx)) fallback.push_back({ne, f0, nx, nx});
        }
        int mid = first_entry_in(pxs + 1, k - 1);
        if (mid != -1) {
            int xb = first_exit_in(ctx.pos[mid] + 1, k - 1);
            if (xb != -1) frames.push_back({ne, nx, mid, xb});
            if (ctx.is_exit(mid)) fallback.push_back({ne, nx, mid, mid});
        }
    }
    for (int u : ctx.entries) {  // ascending position
        if (!ctx.is_exit(u)) continue;
        int pu = ctx.pos[u];
        {
            // u as both the anchor and the first exit; the middle entry may
            // sit anywhere else on the cycle, wrapping past position zero.
            int mid = -1;
            for (int off = 1; off < k && mid == -1; ++off)
                if (ctx.is_entry(node_at(pu + off))) mid = node_at(pu + off);
            if (mid != -1) {
                int xb = -1;
                for (int off = ctx.rooted(mid, u) + 1; off < k && xb == -1; ++off)
                    if (ctx.is_exit(node_at(pu + off))) xb = node_at(pu + off);
                if (xb != -1) frames.push_back({u, u, mid, xb});
                if (ctx.is_exit(mid)) fallback.push_back({u, u, mid, mid});
            }
        }
        if (pu > 0) {
            int xa = first_exit_in(1, pu - 1);
            if (xa != -1) frames.push_back({ne, xa, u, u});
            if (ctx.is_exit(ne)) fallback.push_back({ne, ne, u, u});
        }
        {
            int mid = first_entry_in(pu + 1, k - 1);
            if (mid != -1) {
                int xb = first_exit_in(ctx.pos[mid] + 1, k - 1);
                if (xb != -1) frames.push_back({ne, u, mid, xb});
                if (ctx.is_exit(mid)) fallback.push_back({ne, u, mid, mid});
            }
        }
    }
    frames.insert(frames.end(), fallback.begin(), fallback.end());
    for (const Frame& fr : frames)
        if (auto out = run_frame(ctx, fr)) return *out;
    throw InternalError("cycle analysis exhausted its pattern frames");
}

// Decide one cycle. A single entry or a single exit pins a redundant cycle
// edge immediately; otherwise the block structure picks the analysis. The
// result is checked against its contract before it leaves.
inline CycleOutcome analyze_cycle(const CycleContext& ctx) {
    if ((int)ctx.entries.size() == 1)
        return RedundantEdges{{ctx.edge_into(ctx.entries[0])}};
    if ((int)ctx.exits.size() == 1)
        return RedundantEdges{{ctx.edge_out_of(ctx.exits[0])}};
    BlockSplit bs = split_blocks(ctx);
    CycleOutcome out = bs.clean ? analyze_split(ctx, bs) : analyze_mixed(ctx);
    if (auto* f = std::get_if<FoundEmbedding>(&out))
        require_valid_embedding(*ctx.net, f->witness, "cycle analysis");
    else if (auto* c = std::get_if<CloserCycle>(&out))
        BRAESS_CHECK(closer_cycle_ok(ctx, c->cycle),
                     "follow-up cycle fails its contract");
    return out;
}

inline CycleOutcome analyze_cycle(const Net& g, const Cycle& c) {
    CycleContext ctx = make_cycle_context(g, c);
    return analyze_cycle(ctx);
}

}  // namespace braess
