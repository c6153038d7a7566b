#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sys/wait.h>

#include "braess/fixtures.hpp"
#include "braess/gadget.hpp"
#include "braess/json_io.hpp"
#include "braess/oracle.hpp"
#include "helpers.hpp"

using namespace braess;

namespace {

struct RunResult {
    int status = -1;
    std::string out;
};

// Runs the real binary. Stdout is captured; stderr is discarded unless the
// caller wants it folded in to inspect diagnostics.
RunResult run_cli(const std::string& args, bool merge_stderr = false) {
    std::string cmd = std::string(BRAESS_CLI_PATH) + " " + args;
    cmd += merge_stderr ? " 2>&1" : " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
    int rc = pclose(pipe);
    r.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    return r;
}

std::string write_file(const std::string& name, const std::string& text) {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "braess_cli_scratch";
    fs::create_directories(dir);
    fs::path p = dir / name;
    std::ofstream(p) << text;
    return p.string();
}

std::string net_file(const std::string& name, const Net& g) {
    return write_file(name, emit_netfile(g));
}

Json out_json(const RunResult& r) {
    REQUIRE(r.status == 0);
    return Json::parse(r.out);
}

std::vector<std::pair<int, int>> edge_pairs(const Net& g) {
    std::vector<std::pair<int, int>> v;
    for (int e : g.alive_edges())
        v.emplace_back(g.edge_table[e].tail, g.edge_table[e].head);
    return v;
}

}  // namespace

TEST_CASE("json views keep a fixed key order") {
    Path p{{0, 1}, {0}};
    CHECK(to_json(p).dump() == R"({"nodes":[0,1],"edges":[0]})");

    Verdict v;
    CHECK(to_json(v).dump() ==
          R"({"vulnerable":false,"witness":null,"deleted_edges":[],)"
          R"("iterations":{"rounds":0,"analyses":0,"max_chain":0}})");

    v.deleted_edges = {{1, 5}, {2, 0}};
    Json j = to_json(v);
    CHECK(j["deleted_edges"][0]["round"] == 1);
    CHECK(j["deleted_edges"][0]["edge"] == 5);
    CHECK(j["deleted_edges"][1]["edge"] == 0);

    EquilibriumReport rep{Rat(1), Rat(2), Rat(3, 2), true};
    CHECK(to_json(rep).dump() ==
          R"({"demand":"1","full_latency":"2","sub_latency":"3/2","paradox":true})");

    auto w = find_witness_acyclic(fixtures::wheatstone());
    REQUIRE(w);
    Json wj = to_json(*w);
    CHECK(wj["a"] == 0);
    CHECK(wj["d"] == 3);
    CHECK(wj["tail_s"]["nodes"] == Json::array({0}));
    CHECK(wj["bd"]["nodes"] == Json::array({1, 3}));
}

TEST_CASE("check reports the frozen fixture verdicts") {
    Json j = out_json(
        run_cli("check " + net_file("wheatstone.net", fixtures::wheatstone())));
    CHECK(j["vulnerable"] == true);
    CHECK(j["witness"].is_null());
    CHECK(j["deleted_edges"].empty());
    CHECK(j["iterations"]["rounds"] == 0);

    j = out_json(
        run_cli("check " + net_file("series2.net", fixtures::series2())));
    CHECK(j["vulnerable"] == false);
    CHECK(j["deleted_edges"].empty());

    j = out_json(
        run_cli("check " + net_file("diamond.net", fixtures::diamond())));
    CHECK(j["vulnerable"] == false);

    j = out_json(run_cli(
        "check " + net_file("redc.net", fixtures::redundant_cycle_c())));
    CHECK(j["vulnerable"] == false);
    REQUIRE(j["deleted_edges"].size() == 1);
    CHECK(j["deleted_edges"][0]["round"] == 1);
    CHECK(j["deleted_edges"][0]["edge"] == 5);
}

TEST_CASE("multi-round deletions are reported round by round") {
    Net g = Net::build(7,
                       {{1, 2}, {2, 3}, {3, 4}, {4, 1}, {1, 4}, {0, 5},
                        {5, 1}, {0, 2}, {3, 5}, {4, 5}, {5, 6}},
                       0, 6);
    Json j = out_json(run_cli("check " + net_file("drain.net", g)));
    CHECK(j["vulnerable"] == false);
    CHECK(j["iterations"]["rounds"] == 3);
    CHECK(j["iterations"]["analyses"] == 4);
    CHECK(j["iterations"]["max_chain"] == 2);
    REQUIRE(j["deleted_edges"].size() == 3);
    CHECK(j["deleted_edges"][0]["round"] == 1);
    CHECK(j["deleted_edges"][0]["edge"] == 6);
    CHECK(j["deleted_edges"][1]["round"] == 2);
    CHECK(j["deleted_edges"][1]["edge"] == 0);
    CHECK(j["deleted_edges"][2]["round"] == 3);
    CHECK(j["deleted_edges"][2]["edge"] == 4);
}

TEST_CASE("the demo flag prices the slowdown pattern") {
    auto ws = net_file("wheatstone.net", fixtures::wheatstone());
    Json j = out_json(run_cli("check --demo " + ws));
    REQUIRE_FALSE(j["witness"].is_null());
    CHECK(j["witness"]["a"] == 0);
    CHECK(j["witness"]["b"] == 1);
    CHECK(j["witness"]["c"] == 2);
    CHECK(j["witness"]["d"] == 3);
    REQUIRE_FALSE(j["equilibrium"].is_null());
    CHECK(j["equilibrium"]["demand"] == "1");
    CHECK(j["equilibrium"]["full_latency"] == "2");
    CHECK(j["equilibrium"]["sub_latency"] == "3/2");
    CHECK(j["equilibrium"]["paradox"] == true);

    j = out_json(run_cli("check --witness " + ws));
    CHECK_FALSE(j["witness"].is_null());
    CHECK_FALSE(j.contains("equilibrium"));

    j = out_json(
        run_cli("check --demo " + net_file("series2.net", fixtures::series2())));
    CHECK(j["vulnerable"] == false);
    CHECK(j["equilibrium"].is_null());
}

TEST_CASE("a witness found on a cycle is priced against the whole input") {
    Net g = Net::build(6,
                       {{3, 4}, {2, 5}, {5, 4}, {4, 3}, {3, 1},
                        {2, 3}, {4, 1}, {0, 2}, {4, 1}, {5, 3}},
                       0, 1);
    Json j = out_json(run_cli("check --demo " + net_file("busy.net", g)));
    CHECK(j["vulnerable"] == true);
    REQUIRE_FALSE(j["witness"].is_null());
    CHECK(j["witness"]["a"] == 2);
    CHECK(j["witness"]["b"] == 3);
    CHECK(j["witness"]["c"] == 4);
    CHECK(j["witness"]["d"] == 1);
    CHECK(j["equilibrium"]["full_latency"] == "2");
    CHECK(j["equilibrium"]["sub_latency"] == "3/2");
    CHECK(j["equilibrium"]["paradox"] == true);
}

TEST_CASE("the dot flag renders the net instead of judging it") {
    RunResult r = run_cli(
        "check --dot " + net_file("wheatstone.net", fixtures::wheatstone()));
    REQUIRE(r.status == 0);
    CHECK(r.out.rfind("digraph net {", 0) == 0);
    CHECK(r.out.find("n0 -> n1") != std::string::npos);
    CHECK(r.out.find("vulnerable") == std::string::npos);
}

TEST_CASE("bad inputs exit with pointed diagnostics") {
    RunResult r = run_cli("check " + write_file("loop.net", "s 0\nt 0\n"), true);
    CHECK(r.status == 2);
    CHECK(r.out.find("line 2") != std::string::npos);
    CHECK(r.out.find("source equals target") != std::string::npos);

    r = run_cli("check " + write_file("junk.net", "s 0\nt 1\nq 0 1\n"), true);
    CHECK(r.status == 2);
    CHECK(r.out.find("line 3") != std::string::npos);

    r = run_cli("check /no/such/file.net", true);
    CHECK(r.status == 2);
    CHECK(r.out.find("cannot open") != std::string::npos);

    CHECK(run_cli("", true).status != 0);
    CHECK(run_cli("oracle nope junk.net", true).status != 0);
}

TEST_CASE("the all-pairs scan finds the vulnerable orientation") {
    auto bare =
        write_file("bare.net", "e 0 1\ne 0 2\ne 1 2\ne 1 3\ne 2 3\n");
    Json j = out_json(run_cli("check-all-pairs " + bare));
    CHECK(j["vulnerable"] == true);
    CHECK(j["pair"] == Json::array({0, 3}));

    auto tri = write_file("tri.net", "e 0 1\ne 1 2\ne 2 0\n");
    j = out_json(run_cli("check-all-pairs " + tri));
    CHECK(j["vulnerable"] == false);
    CHECK(j["pair"].is_null());

    auto twin = write_file("twin.net", "e 0 1\ne 1 2\ne 3 4\ne 4 5\n");
    j = out_json(run_cli("check-all-pairs " + twin));
    CHECK(j["vulnerable"] == false);

    // declared terminals do not constrain the scan
    j = out_json(run_cli("check-all-pairs " +
                         net_file("series2.net", fixtures::series2())));
    CHECK(j["vulnerable"] == false);
}

TEST_CASE("oracle subcommands expose the reference algorithms") {
    auto ws = net_file("wheatstone.net", fixtures::wheatstone());
    Json j = out_json(run_cli("oracle paths " + ws));
    CHECK(j["count"] == 3);
    std::vector<std::vector<int>> routes;
    for (const Json& p : j["paths"])
        routes.push_back(p["nodes"].get<std::vector<int>>());
    std::sort(routes.begin(), routes.end());
    CHECK(routes ==
          std::vector<std::vector<int>>{{0, 1, 2, 3}, {0, 1, 3}, {0, 2, 3}});

    auto ra = net_file("ra.net", fixtures::redundant_cycle_a());
    j = out_json(run_cli("oracle irr " + ra));
    CHECK(j["irredundant_edges"] == Json::array({0, 1}));

    j = out_json(run_cli("oracle mis " + ra));
    CHECK(j["kept_edges"] == Json::array({0, 1}));
    Net m = parse_netfile(j["netfile"].get<std::string>());
    CHECK(m.alive_edge_count() == 2);
    CHECK(m.source == 0);
    CHECK(m.target == 2);

    j = out_json(run_cli("oracle wembed " + ws));
    REQUIRE_FALSE(j["witness"].is_null());
    CHECK(j["witness"]["a"] == 0);
    j = out_json(
        run_cli("oracle wembed " + net_file("diamond.net", fixtures::diamond())));
    CHECK(j["witness"].is_null());

    j = out_json(run_cli("oracle vulnerable " + ws));
    CHECK(j["vulnerable"] == true);

    std::string chain = "s 0\nt 12\n";
    for (int i = 0; i < 12; ++i)
        chain += "e " + std::to_string(i) + " " + std::to_string(i + 1) + "\n";
    RunResult guarded =
        run_cli("oracle vulnerable " + write_file("chain13.net", chain), true);
    CHECK(guarded.status == 4);
}

TEST_CASE("gadget emits a parseable doubled net") {
    auto s2 = net_file("series2.net", fixtures::series2());
    RunResult r = run_cli("gadget " + s2 + " 0");
    REQUIRE(r.status == 0);
    CHECK(r.out.rfind("# two-copy gadget", 0) == 0);

    Net star = parse_netfile(r.out);
    CHECK(star.alive_node_count() == 14);
    CHECK(star.alive_edge_count() == 32);
    GadgetLayout lay = gadget_layout(fixtures::series2());
    CHECK(star.source == lay.s_star);
    CHECK(star.target == lay.t_star);

    Net direct = gadget_gstar(fixtures::series2(), 0);
    CHECK(star.alive_nodes() == direct.alive_nodes());
    CHECK(edge_pairs(star) == edge_pairs(direct));

    auto back = write_file("back.net", "s 0\nt 2\ne 0 1\ne 1 0\ne 1 2\n");
    CHECK(run_cli("gadget " + back + " 1", true).status == 2);
    CHECK(run_cli("gadget " + s2 + " 99", true).status == 2);
}

TEST_CASE("gadget output is fully irredundant exactly for a useful edge") {
    auto ra = net_file("ra.net", fixtures::redundant_cycle_a());

    // edge 0 lies on the only route, edge 3 merely closes the side cycle
    RunResult good = run_cli("gadget " + ra + " 0");
    REQUIRE(good.status == 0);
    Json j = out_json(
        run_cli("oracle irr " + write_file("ra_gadget0.net", good.out)));
    CHECK((int)j["irredundant_edges"].size() ==
          parse_netfile(good.out).alive_edge_count());

    RunResult bad = run_cli("gadget " + ra + " 3");
    REQUIRE(bad.status == 0);
    j = out_json(
        run_cli("oracle irr " + write_file("ra_gadget3.net", bad.out)));
    CHECK((int)j["irredundant_edges"].size() <
          parse_netfile(bad.out).alive_edge_count());
}

TEST_CASE("netfiles round-trip through emit and parse") {
    std::mt19937_64 rng(99);
    for (int it = 0; it < 200; ++it) {
        Net g = testutil::random_net(rng);
        Net h = parse_netfile(emit_netfile(g));
        CHECK(h.source == g.source);
        CHECK(h.target == g.target);
        CHECK(edge_pairs(h) == edge_pairs(g));
    }
}

TEST_CASE("repeated runs print identical bytes") {
    auto ws = net_file("wheatstone.net", fixtures::wheatstone());
    CHECK(run_cli("check --demo " + ws).out == run_cli("check --demo " + ws).out);
    auto ra = net_file("ra.net", fixtures::redundant_cycle_a());
    CHECK(run_cli("oracle wembed " + ra).out ==
          run_cli("oracle wembed " + ra).out);
}
