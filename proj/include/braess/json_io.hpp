#pragma once

#include <json.hpp>

#include "braess/detect.hpp"
#include "braess/wardrop.hpp"

// JSON views of the library's result types. Key order is fixed so output is
// byte-stable for a given input; rationals go out as "p/q" strings, never as
// floats.

namespace braess {

using Json = nlohmann::ordered_json;

inline Json to_json(const Path& p) {
    return Json{{"nodes", p.nodes}, {"edges", p.edges}};
}

inline Json to_json(const WEmbedding& w) {
    Json j;
    j["a"] = w.a;
    j["b"] = w.b;
    j["c"] = w.c;
    j["d"] = w.d;
    j["tail_s"] = to_json(w.tail_s);
    j["ab"] = to_json(w.ab);
    j["ac"] = to_json(w.ac);
    j["bc"] = to_json(w.bc);
    j["bd"] = to_json(w.bd);
    j["cd"] = to_json(w.cd);
    j["tail_t"] = to_json(w.tail_t);
    return j;
}

inline Json to_json(const Verdict& v) {
    Json j;
    j["vulnerable"] = v.vulnerable;
    j["witness"] = v.witness ? to_json(*v.witness) : Json(nullptr);
    Json del = Json::array();
    for (auto [round, e] : v.deleted_edges)
        del.push_back(Json{{"round", round}, {"edge", e}});
    j["deleted_edges"] = std::move(del);
    j["iterations"] = Json{{"rounds", v.stats.rounds},
                           {"analyses", v.stats.analyses},
                           {"max_chain", v.stats.max_chain}};
    return j;
}

inline Json to_json(const EquilibriumReport& r) {
    return Json{{"demand", r.demand.str()},
                {"full_latency", r.full_latency.str()},
                {"sub_latency", r.sub_latency.str()},
                {"paradox", r.paradox}};
}

}  // namespace braess
