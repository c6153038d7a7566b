#pragma once

#include <array>
#include <string>

#include "graph.hpp"

namespace braess {

// Witness that the net contains a subdivision of the 4-node diamond-with-
// shortcut pattern (edges a->b, a->c, b->c, b->d, c->d), reachable from the
// source and reaching the target through tails that may be empty. Branch
// paths carry at least one edge; tail_s is the single node [s] when a == s,
// and tail_t is [t] when d == t.
struct WEmbedding {
    int a = -1, b = -1, c = -1, d = -1;
    Path tail_s;
    Path ab, ac, bc, bd, cd;
    Path tail_t;
};

namespace detail {

// Pattern endpoints of the seven paths, over pattern nodes {s,a,b,c,d,t}
// encoded 0..5. Path order: tail_s, ab, ac, bc, bd, cd, tail_t.
inline constexpr std::array<std::array<int, 2>, 7> kPatternEnds = {{
    {0, 1}, {1, 2}, {1, 3}, {2, 3}, {2, 4}, {3, 4}, {4, 5},
}};

}  // namespace detail

// Empty string when valid, else a short reason. A shared node is legal only
// when it is the image of a pattern node incident (in the pattern) to every
// path that touches it; this is exactly "the seven paths form a subdivision",
// and it keeps s and t out of branch-path interiors.
inline std::string embedding_error(const Net& g, const WEmbedding& w) {
    const std::array<const Path*, 7> paths = {&w.tail_s, &w.ab, &w.ac,
                                              &w.bc,     &w.bd, &w.cd, &w.tail_t};
    static const char* names[7] = {"tail_s", "ab", "ac", "bc", "bd", "cd", "tail_t"};

    const std::array<int, 6> image = {g.source, w.a, w.b, w.c, w.d, g.target};
    for (int v : {w.a, w.b, w.c, w.d})
        if (!g.has_node(v)) return "branch node is not an alive node";
    if (w.a == w.b || w.a == w.c || w.a == w.d || w.b == w.c || w.b == w.d ||
        w.c == w.d)
        return "branch nodes not distinct";

    for (int i = 0; i < 7; ++i) {
        const Path& p = *paths[i];
        if (p.nodes.empty()) return std::string(names[i]) + ": no nodes";
        if (!path_valid(g, p)) return std::string(names[i]) + ": not a path in the net";
        if (!path_simple(p)) return std::string(names[i]) + ": repeats a node";
        int want_front = image[detail::kPatternEnds[i][0]];
        int want_back = image[detail::kPatternEnds[i][1]];
        if (p.front() != want_front || p.back() != want_back)
            return std::string(names[i]) + ": wrong endpoints";
        bool tail = i == 0 || i == 6;
        if (!tail && p.empty()) return std::string(names[i]) + ": branch path is empty";
        if (tail && p.empty() && want_front != want_back)
            return std::string(names[i]) + ": empty tail with distinct endpoints";
    }

    // Which paths the pattern allows through each pattern node.
    std::array<unsigned, 6> incident{};
    for (int i = 0; i < 7; ++i) {
        incident[detail::kPatternEnds[i][0]] |= 1u << i;
        incident[detail::kPatternEnds[i][1]] |= 1u << i;
    }

    std::vector<unsigned> touched(g.node_space, 0);
    for (int i = 0; i < 7; ++i)
        for (int v : paths[i]->nodes) touched[v] |= 1u << i;

    for (int v = 0; v < g.node_space; ++v) {
        unsigned m = touched[v];
        if (m == 0 || (m & (m - 1)) == 0) continue;  // untouched or single path
        bool ok = false;
        for (int pi = 0; pi < 6; ++pi)
            if (image[pi] == v && (m & ~incident[pi]) == 0) {
                ok = true;
                break;
            }
        if (!ok)
            return "node " + std::to_string(v) + " shared by paths that may not meet there";
    }
    return "";
}

inline bool validate_embedding(const Net& g, const WEmbedding& w) {
    return embedding_error(g, w).empty();
}

inline void require_valid_embedding(const Net& g, const WEmbedding& w,
                                    const char* who) {
    std::string err = embedding_error(g, w);
    if (!err.empty())
        throw InternalError(std::string(who) + " built an invalid witness: " + err);
}

}  // namespace braess
