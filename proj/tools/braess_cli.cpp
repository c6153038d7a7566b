#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "braess/gadget.hpp"
#include "braess/json_io.hpp"
#include "braess/oracle.hpp"

namespace {

// Input problems that are not netfile syntax errors (unreadable file, ...).
// They share exit code 2 with parse and precondition failures.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void print(const braess::Json& j) { std::cout << j.dump(2) << "\n"; }

void run_check(const std::string& file, bool want_witness, bool want_demo,
               bool want_dot) {
    braess::Net g = braess::parse_netfile(slurp(file));
    if (want_dot) {
        std::cout << braess::emit_dot(g);
        return;
    }
    braess::Verdict v = braess::is_vulnerable(g);
    if ((want_witness || want_demo) && v.vulnerable && !v.witness) {
        // The cycle loop proved vulnerability without pinning down a concrete
        // pattern. Replay its deletions and search the acyclic remainder,
        // which stays exhaustive up to the node bound.
        std::vector<int> dead;
        dead.reserve(v.deleted_edges.size());
        for (auto [round, e] : v.deleted_edges) dead.push_back(e);
        braess::Net pruned = braess::make_st_connected(g.without_edges(dead));
        v.witness = braess::find_witness_acyclic(pruned);
    }
    braess::Json j = braess::to_json(v);
    if (want_demo) {
        j["equilibrium"] = nullptr;
        if (v.witness) {
            braess::LatencyAssignment l = braess::build_latencies(g, *v.witness);
            j["equilibrium"] =
                to_json(braess::equilibrium(g, *v.witness, l, braess::Rat(1)));
        }
    }
    print(j);
}

void run_all_pairs(const std::string& file) {
    braess::Net g = braess::parse_netfile(slurp(file), /*require_st=*/false);
    braess::Json j;
    j["vulnerable"] = false;
    j["pair"] = nullptr;
    std::vector<int> nodes = g.alive_nodes();
    braess::Net h = g;  // one parsed net, terminals swapped per pair
    for (int s : nodes) {
        for (int t : nodes) {
            if (s == t) continue;
            h.source = s;
            h.target = t;
            if (braess::is_vulnerable(h).vulnerable) {
                j["vulnerable"] = true;
                j["pair"] = braess::Json::array({s, t});
                print(j);
                return;
            }
        }
    }
    print(j);
}

void run_oracle(const std::string& kind, const std::string& file) {
    braess::Net g = braess::parse_netfile(slurp(file));
    braess::Json j;
    if (kind == "paths") {
        braess::Json arr = braess::Json::array();
        braess::oracle::for_each_simple_st_path(g, [&](const braess::Path& p) {
            arr.push_back(to_json(p));
            return true;
        });
        j["count"] = arr.size();
        j["paths"] = std::move(arr);
    } else if (kind == "irr") {
        j["irredundant_edges"] = braess::oracle::irredundant_edges(g);
    } else if (kind == "mis") {
        braess::Net m = braess::oracle::mis(g);
        j["kept_edges"] = m.alive_edges();
        j["netfile"] = braess::emit_netfile(m);
    } else if (kind == "wembed") {
        std::optional<braess::WEmbedding> w = braess::oracle::has_w_embedding(g);
        j["witness"] = w ? to_json(*w) : braess::Json(nullptr);
    } else {
        j["vulnerable"] = braess::oracle::brute_force_vulnerable(g);
    }
    print(j);
}

void run_gadget(const std::string& file, int edge) {
    braess::Net g = braess::parse_netfile(slurp(file));
    braess::Net star = braess::gadget_gstar(g, edge);
    braess::GadgetLayout lay = braess::gadget_layout(g);
    std::ostringstream h;
    h << "two-copy gadget for edge " << edge << " (" << g.edge_table[edge].tail
      << " -> " << g.edge_table[edge].head << ")\n";
    h << "copy one keeps the input node ids, copy two shifts them by "
      << lay.shift << "\n";
    h << "fresh terminals: s*=" << lay.s_star << " z1=" << lay.z1
      << " z2=" << lay.z2 << " a1=" << lay.a1 << " a2=" << lay.a2
      << " r1=" << lay.r1 << " r2=" << lay.r2 << " t*=" << lay.t_star;
    std::cout << braess::emit_netfile(star, h.str());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Detects whether a routed network is vulnerable to the "
                 "add-a-road slowdown"};
    app.require_subcommand(1);

    std::string check_file;
    bool want_witness = false, want_demo = false, want_dot = false;
    CLI::App* check = app.add_subcommand(
        "check", "decide vulnerability for the net's source/target pair");
    check->add_option("file", check_file, "netfile to analyze")->required();
    check->add_flag("--witness", want_witness,
                    "extract an explicit pattern witness when one is not "
                    "already part of the verdict");
    check->add_flag("--demo", want_demo,
                    "also price the witness and report equilibrium travel "
                    "times at demand 1");
    check->add_flag("--dot", want_dot,
                    "emit a DOT rendering of the parsed net instead of a "
                    "verdict");

    std::string pairs_file;
    CLI::App* pairs = app.add_subcommand(
        "check-all-pairs",
        "scan every ordered node pair for a vulnerable source/target choice");
    pairs->add_option("file", pairs_file, "netfile, terminal lines optional")
        ->required();

    std::string oracle_kind, oracle_file;
    CLI::App* orc = app.add_subcommand(
        "oracle", "run the exhaustive reference algorithms on a small net");
    orc->add_option("kind", oracle_kind,
                    "paths | irr | mis | wembed | vulnerable")
        ->required()
        ->check(CLI::IsMember({"paths", "irr", "mis", "wembed", "vulnerable"}));
    orc->add_option("file", oracle_file, "netfile to analyze")->required();

    std::string gadget_file;
    int gadget_edge = -1;
    CLI::App* gad = app.add_subcommand(
        "gadget",
        "emit the two-copy construction that ties the whole net's "
        "irredundancy to one designated edge");
    gad->add_option("file", gadget_file, "netfile to wrap")->required();
    gad->add_option("edge", gadget_edge, "designated edge id")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*check) run_check(check_file, want_witness, want_demo, want_dot);
        else if (*pairs) run_all_pairs(pairs_file);
        else if (*orc) run_oracle(oracle_kind, oracle_file);
        else if (*gad) run_gadget(gadget_file, gadget_edge);
    } catch (const braess::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const braess::PreconditionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const braess::ExplosionGuard& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const braess::InternalError& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
