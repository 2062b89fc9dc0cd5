#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "rewrite/parser.hpp"
#include "rewrite/specimens.hpp"

using namespace rewrite;

namespace {

NodeId n(HostGraph& g, const std::string& name, Mark m = Mark::grey, bool rooted = false,
         HostList label = {}) {
    return g.add_node(std::move(label), m, rooted, name);
}

EdgeId e(HostGraph& g, NodeId a, NodeId b, HostList label = {}) {
    return g.add_edge(a, b, std::move(label), Mark::none);
}

const RuleStats& stats_of(const Program& p, const RunStats& s, const std::string& rule) {
    int i = p.rule_index(rule);
    REQUIRE(i >= 0);
    return s.rules[std::size_t(i)];
}

HostGraph random_traversal_graph(std::mt19937& rng, int max_n, int max_m) {
    int nodes = 1 + int(rng() % unsigned(max_n));
    int edges = int(rng() % unsigned(max_m + 1));
    HostGraph g;
    std::vector<NodeId> vs;
    for (int i = 0; i < nodes; ++i) vs.push_back(n(g, "n" + std::to_string(i)));
    for (int i = 0; i < edges; ++i)
        e(g, vs[rng() % vs.size()], vs[rng() % vs.size()]);
    return g;
}

HostGraph random_weighted_graph(std::mt19937& rng, int max_n, int max_m, int lo, int hi) {
    int nodes = 1 + int(rng() % unsigned(max_n));
    int edges = nodes > 1 ? int(rng() % unsigned(max_m + 1)) : 0;
    HostGraph g;
    std::vector<NodeId> vs;
    for (int i = 0; i < nodes; ++i) vs.push_back(n(g, "n" + std::to_string(i), Mark::grey, i == 0));
    std::uniform_int_distribution<long long> w(lo, hi);
    for (int i = 0; i < edges; ++i) {
        std::size_t s = rng() % vs.size(), t = rng() % vs.size();
        if (s == t) continue;
        e(g, vs[s], vs[t], HostList{w(rng)});
    }
    return g;
}

std::unique_ptr<Command> cmd(Command::Kind k) {
    auto c = std::make_unique<Command>();
    c->kind = k;
    return c;
}

std::unique_ptr<Command> call_rule(const char* name) {
    auto c = cmd(Command::Kind::rule_set);
    c->rule_names = {name};
    return c;
}

// The counting prefix of the shortest-paths program, in isolation.
Program counting_prefix() {
    Program p = load_specimen("bellman-ford");
    auto body = cmd(Command::Kind::seq);
    body->kids.push_back(call_rule("set_counter"));
    auto lp = cmd(Command::Kind::loop);
    lp->kids.push_back(call_rule("count"));
    body->kids.push_back(std::move(lp));
    p.procs[std::size_t(p.main_index)].body = std::move(body);
    link_program(p);
    return p;
}

}  // namespace

TEST_CASE("catalog lists every shipped program and each one loads") {
    const auto& cat = specimen_catalog();
    REQUIRE(cat.size() == 6);
    const char* names[] = {"is-discrete", "is-connected-old", "is-connected",
                           "is-dag",      "bellman-ford",     "transitive-closure"};
    for (std::size_t i = 0; i < 6; ++i) {
        CHECK(cat[i].name == names[i]);
        CHECK(cat[i].source != nullptr);
        Program p = load_specimen(names[i]);
        CHECK(p.main_index >= 0);
        CHECK(!p.rules.empty());
    }
    CHECK(specimen_source("nope") == nullptr);
    CHECK_THROWS_AS(load_specimen("nope"), NotFoundError);
}

TEST_CASE("connectivity oracle") {
    HostGraph empty;
    CHECK(oracle_connected(empty));

    HostGraph one;
    n(one, "a");
    CHECK(oracle_connected(one));

    HostGraph two;
    n(two, "a");
    n(two, "b");
    CHECK(!oracle_connected(two));

    HostGraph vee;  // direction must not matter
    NodeId a = n(vee, "a"), b = n(vee, "b"), c = n(vee, "c");
    e(vee, a, b);
    e(vee, c, b);
    CHECK(oracle_connected(vee));

    HostGraph split;
    NodeId x = n(split, "x"), y = n(split, "y");
    e(split, x, y);
    n(split, "z");
    CHECK(!oracle_connected(split));
}

TEST_CASE("acyclicity oracle") {
    HostGraph empty;
    CHECK(oracle_acyclic(empty));

    HostGraph looped;
    NodeId a = n(looped, "a");
    e(looped, a, a);
    CHECK(!oracle_acyclic(looped));

    HostGraph tree;
    std::vector<NodeId> v;
    for (int i = 0; i < 7; ++i) v.push_back(n(tree, "t" + std::to_string(i)));
    for (int i = 1; i < 7; ++i) e(tree, v[std::size_t((i - 1) / 2)], v[std::size_t(i)]);
    CHECK(oracle_acyclic(tree));

    HostGraph tri;
    NodeId p = n(tri, "p"), q = n(tri, "q"), r = n(tri, "r"), t = n(tri, "t");
    e(tri, p, q);
    e(tri, q, r);
    e(tri, r, p);
    e(tri, t, p);
    CHECK(!oracle_acyclic(tri));

    HostGraph diamond;
    NodeId d0 = n(diamond, "0"), d1 = n(diamond, "1"), d2 = n(diamond, "2"), d3 = n(diamond, "3");
    e(diamond, d0, d1);
    e(diamond, d0, d2);
    e(diamond, d1, d3);
    e(diamond, d2, d3);
    CHECK(oracle_acyclic(diamond));
}

TEST_CASE("shortest-paths oracle") {
    HostGraph g;
    NodeId a = n(g, "a", Mark::grey, true), b = n(g, "b"), c = n(g, "c"), far = n(g, "far");
    e(g, a, b, HostList{-3LL});
    e(g, b, c, HostList{2LL});
    e(g, a, c, HostList{10LL});
    ShortestPaths sp = oracle_shortest_paths(g, a);
    CHECK(!sp.negative_cycle_reachable);
    CHECK(sp.dist_of(a) == 0);
    CHECK(sp.dist_of(b) == -3);
    CHECK(sp.dist_of(c) == -1);
    CHECK(!sp.dist_of(far).has_value());

    HostGraph cyc;
    NodeId r = n(cyc, "r", Mark::grey, true), x = n(cyc, "x"), y = n(cyc, "y");
    e(cyc, r, x, HostList{1LL});
    e(cyc, x, y, HostList{-2LL});
    e(cyc, y, x, HostList{1LL});
    CHECK(oracle_shortest_paths(cyc, r).negative_cycle_reachable);

    HostGraph apart;  // the same cycle, now out of reach
    NodeId r2 = n(apart, "r", Mark::grey, true);
    NodeId x2 = n(apart, "x"), y2 = n(apart, "y");
    e(apart, x2, y2, HostList{-2LL});
    e(apart, y2, x2, HostList{1LL});
    ShortestPaths far_sp = oracle_shortest_paths(apart, r2);
    CHECK(!far_sp.negative_cycle_reachable);
    CHECK(far_sp.dist_of(r2) == 0);
    CHECK(!far_sp.dist_of(x2).has_value());
}

TEST_CASE("reachability oracle ignores loops and finds multi-step paths") {
    HostGraph g;
    NodeId a = n(g, "a"), b = n(g, "b"), c = n(g, "c"), d = n(g, "d");
    e(g, a, b);
    e(g, b, c);
    e(g, b, b);
    Reachability rc = oracle_reachability(g);
    auto at = [&](NodeId v) {
        for (std::size_t i = 0; i < rc.nodes.size(); ++i)
            if (rc.nodes[i] == v) return i;
        return std::size_t(-1);
    };
    CHECK(rc.reach[at(a)][at(c)]);
    CHECK(rc.reach[at(a)][at(b)]);
    CHECK(rc.reach[at(b)][at(b)]);  // via its loop
    CHECK(!rc.reach[at(a)][at(a)]);
    CHECK(!rc.reach[at(c)][at(a)]);
    CHECK(!rc.reach[at(a)][at(d)]);
}

TEST_CASE("input validators reject each contract violation") {
    HostGraph ok;
    NodeId a = n(ok, "a");
    NodeId b = n(ok, "b");
    e(ok, a, b);
    CHECK_NOTHROW(validate_traversal_input(ok));

    HostGraph red;
    n(red, "a", Mark::red);
    CHECK_THROWS_AS(validate_traversal_input(red), std::invalid_argument);

    HostGraph rooted;
    n(rooted, "a", Mark::grey, true);
    CHECK_THROWS_AS(validate_traversal_input(rooted), std::invalid_argument);

    HostGraph marked_edge;
    NodeId ma = n(marked_edge, "a"), mb = n(marked_edge, "b");
    marked_edge.add_edge(ma, mb, {}, Mark::blue);
    CHECK_THROWS_AS(validate_traversal_input(marked_edge), std::invalid_argument);

    HostGraph plain;
    n(plain, "a", Mark::none);
    CHECK_NOTHROW(validate_unmarked_input(plain));
    HostGraph grey1;
    n(grey1, "a");
    CHECK_THROWS_AS(validate_unmarked_input(grey1), std::invalid_argument);

    HostGraph w;
    NodeId wa = n(w, "a", Mark::grey, true), wb = n(w, "b");
    e(w, wa, wb, HostList{4LL});
    CHECK(validate_shortest_paths_input(w) == wa);

    HostGraph two_roots;
    n(two_roots, "a", Mark::grey, true);
    n(two_roots, "b", Mark::grey, true);
    CHECK_THROWS_AS(validate_shortest_paths_input(two_roots), std::invalid_argument);

    HostGraph no_root;
    n(no_root, "a");
    CHECK_THROWS_AS(validate_shortest_paths_input(no_root), std::invalid_argument);

    HostGraph loopy;
    NodeId la = n(loopy, "a", Mark::grey, true);
    e(loopy, la, la, HostList{1LL});
    CHECK_THROWS_AS(validate_shortest_paths_input(loopy), std::invalid_argument);

    HostGraph unweighted;
    NodeId ua = n(unweighted, "a", Mark::grey, true), ub = n(unweighted, "b");
    e(unweighted, ua, ub);
    CHECK_THROWS_AS(validate_shortest_paths_input(unweighted), std::invalid_argument);

    HostGraph stringy;
    NodeId sa = n(stringy, "a", Mark::grey, true), sb = n(stringy, "b");
    e(stringy, sa, sb, HostList{std::string("w")});
    CHECK_THROWS_AS(validate_shortest_paths_input(stringy), std::invalid_argument);
}

TEST_CASE("isomorphism ignores marks and rootedness but respects structure") {
    HostGraph g1;
    NodeId a = n(g1, "a", Mark::grey, false, HostList{1LL});
    NodeId b = n(g1, "b");
    NodeId c = n(g1, "c");
    e(g1, a, b, HostList{std::string("x")});
    e(g1, b, c);
    e(g1, c, a);

    HostGraph g2;  // same shape, different names, scrambled marks and roots
    NodeId q = n(g2, "q", Mark::blue);
    NodeId r = n(g2, "r", Mark::red, true);
    NodeId p = n(g2, "p", Mark::green, false, HostList{1LL});
    g2.add_edge(p, q, HostList{std::string("x")}, Mark::dashed);
    g2.add_edge(q, r, {}, Mark::blue);
    g2.add_edge(r, p, {}, Mark::red);
    CHECK(isomorphic_ignoring_marks(g1, g2));

    HostGraph reversed;  // one edge flipped: degree profile differs
    NodeId xa = n(reversed, "a", Mark::grey, false, HostList{1LL});
    NodeId xb = n(reversed, "b");
    NodeId xc = n(reversed, "c");
    e(reversed, xa, xb, HostList{std::string("x")});
    e(reversed, xb, xc);
    e(reversed, xa, xc);
    CHECK(!isomorphic_ignoring_marks(g1, reversed));

    HostGraph relabelled;
    NodeId ya = n(relabelled, "a", Mark::grey, false, HostList{2LL});
    NodeId yb = n(relabelled, "b");
    NodeId yc = n(relabelled, "c");
    e(relabelled, ya, yb, HostList{std::string("x")});
    e(relabelled, yb, yc);
    e(relabelled, yc, ya);
    CHECK(!isomorphic_ignoring_marks(g1, relabelled));

    HostGraph doubled;
    NodeId da = n(doubled, "a"), db = n(doubled, "b");
    e(doubled, da, db);
    e(doubled, da, db);
    HostGraph both_ways;
    NodeId ba = n(both_ways, "a"), bb = n(both_ways, "b");
    e(both_ways, ba, bb);
    e(both_ways, bb, ba);
    CHECK(!isomorphic_ignoring_marks(doubled, both_ways));

    HostGraph empty1, empty2;
    CHECK(isomorphic_ignoring_marks(empty1, empty2));
    CHECK(!isomorphic_ignoring_marks(empty1, g1));
}

TEST_CASE("cloning through the canonical text preserves everything") {
    HostGraph g;
    NodeId a = n(g, "a", Mark::grey, true, HostList{1LL, std::string("s")});
    NodeId b = n(g, "b", Mark::blue);
    e(g, a, b, HostList{-7LL});
    HostGraph copy = clone_graph(g);
    CHECK(print_host_graph(copy) == print_host_graph(g));
    CHECK(copy.node_by_name("a").slot >= 0);
    HostGraph legacy = clone_graph(g, true);
    CHECK(legacy.legacy_mode());
    CHECK(print_host_graph(legacy) == print_host_graph(g));
}

TEST_CASE("worked conformance inputs all pass their oracles") {
    for (const Specimen& s : specimen_catalog()) {
        for (auto& [what, input] : conformance_inputs(s.name)) {
            OracleVerdict v = check_program_against_oracle(s.name, input, true);
            INFO(s.name << " on " << what << ": " << v.detail);
            CHECK(v.pass);
        }
    }
}

TEST_CASE("recognisers fail exactly where the oracle says") {
    Program con = load_specimen("is-connected");
    for (auto& [what, input] : conformance_inputs("is-connected")) {
        HostGraph g = clone_graph(input);
        Outcome oc = run_program(con, g);
        INFO(what);
        REQUIRE(oc.kind != Outcome::Kind::runtime_error);
        CHECK((oc.kind == Outcome::Kind::fail) == !oracle_connected(input));
    }
    Program dag = load_specimen("is-dag");
    for (auto& [what, input] : conformance_inputs("is-dag")) {
        HostGraph g = clone_graph(input);
        Outcome oc = run_program(dag, g);
        INFO(what);
        REQUIRE(oc.kind != Outcome::Kind::runtime_error);
        CHECK((oc.kind == Outcome::Kind::fail) == !oracle_acyclic(input));
    }
}

TEST_CASE("shortest-paths output carries the distances in its labels") {
    HostGraph g;
    NodeId a = n(g, "a", Mark::grey, true, HostList{std::string("src")});
    NodeId b = n(g, "b", Mark::grey, false, HostList{4LL});
    e(g, a, b, HostList{5LL});
    Program p = load_specimen("bellman-ford");
    HostGraph out = clone_graph(g);
    Outcome oc = run_program(p, out);
    REQUIRE(oc.kind == Outcome::Kind::graph);
    CHECK(print_host_graph(out) ==
          "[ (a(R), \"src\":0 # grey) (b, 4:5 # grey) | (_0, a, b, 5 # blue) ]");
}

TEST_CASE("oracle checks surface precondition violations as invalid_argument") {
    HostGraph red;
    n(red, "a", Mark::red);
    CHECK_THROWS_AS(check_program_against_oracle("is-connected", red), std::invalid_argument);

    HostGraph two_roots;
    n(two_roots, "a", Mark::grey, true);
    n(two_roots, "b", Mark::grey, true);
    CHECK_THROWS_AS(check_program_against_oracle("bellman-ford", two_roots),
                    std::invalid_argument);

    HostGraph fine;
    n(fine, "a");
    CHECK_THROWS_AS(check_program_against_oracle("mystery", fine), std::invalid_argument);
}

TEST_CASE("randomized agreement between the traversal programs and their oracles") {
    std::mt19937 rng(20260816);
    Program con = load_specimen("is-connected");
    Program old = load_specimen("is-connected-old");
    Program dag = load_specimen("is-dag");
    int disconnected = 0, cyclic = 0;
    for (int it = 0; it < 120; ++it) {
        HostGraph input = random_traversal_graph(rng, 12, 20);
        bool conn = oracle_connected(input);
        bool acyc = oracle_acyclic(input);
        disconnected += !conn;
        cyclic += !acyc;

        HostGraph g1 = clone_graph(input);
        REQUIRE(run_program(con, g1).kind ==
                (conn ? Outcome::Kind::graph : Outcome::Kind::fail));
        if (conn) CHECK(isomorphic_ignoring_marks(input, g1));

        HostGraph g2 = clone_graph(input);
        REQUIRE(run_program(old, g2).kind ==
                (conn ? Outcome::Kind::graph : Outcome::Kind::fail));

        HostGraph g3 = clone_graph(input);
        REQUIRE(run_program(dag, g3).kind ==
                (acyc ? Outcome::Kind::graph : Outcome::Kind::fail));
        if (acyc) CHECK(isomorphic_ignoring_marks(input, g3));
    }
    CHECK(disconnected > 10);  // the corpus exercises both answers
    CHECK(cyclic > 10);
}

TEST_CASE("depth-first search call counts stay within their bounds") {
    std::mt19937 rng(77);
    Program con = load_specimen("is-connected");
    for (int it = 0; it < 80; ++it) {
        HostGraph input = random_traversal_graph(rng, 12, 20);
        int nn = input.node_count(), mm = input.edge_count();
        HostGraph g = clone_graph(input);
        RunStats st;
        Outcome oc = run_program(con, g, {}, &st);
        REQUIRE(oc.kind != Outcome::Kind::runtime_error);

        const RuleStats& init = stats_of(con, st, "init");
        const RuleStats& match = stats_of(con, st, "match");
        const RuleStats& next = stats_of(con, st, "next_edge");
        const RuleStats& back = stats_of(con, st, "back");
        const RuleStats& move = stats_of(con, st, "move");
        CHECK(init.calls == 1);
        CHECK(match.calls == 1);
        CHECK(back.calls <= std::uint64_t(mm + 1));
        CHECK(back.calls == back.successes + 1);
        CHECK(back.successes == move.successes);
        CHECK(move.successes <= std::uint64_t(nn - 1));
        CHECK(next.successes <= std::uint64_t(mm));
        CHECK(next.failures == back.successes + 1);
    }
}

TEST_CASE("shortest-paths round structure is driven by the counter") {
    std::mt19937 rng(99);
    Program bf = load_specimen("bellman-ford");
    Program prefix = counting_prefix();
    for (int it = 0; it < 60; ++it) {
        HostGraph input = random_weighted_graph(rng, 10, 22, -5, 5);
        NodeId root = validate_shortest_paths_input(input);
        ShortestPaths sp = oracle_shortest_paths(input, root);
        std::uint64_t nn = std::uint64_t(input.node_count());

        HostGraph g = clone_graph(input);
        RunStats st;
        Outcome oc = run_program(bf, g, {}, &st);
        REQUIRE(oc.kind != Outcome::Kind::runtime_error);
        CHECK((oc.kind == Outcome::Kind::fail) == sp.negative_cycle_reachable);

        const RuleStats& dec = stats_of(bf, st, "decrement");
        const RuleStats& count = stats_of(bf, st, "count");
        CHECK(dec.calls == nn);
        CHECK(dec.successes == nn - 1);
        CHECK(count.calls == nn);
        CHECK(count.successes == nn - 1);

        // After counting alone, the green counter reads n-1.
        HostGraph h = clone_graph(input);
        REQUIRE(run_program(prefix, h).kind == Outcome::Kind::graph);
        NodeId counter = h.first_node(Mark::green);
        REQUIRE(h.alive(counter));
        CHECK(h.label(counter) == HostList{static_cast<long long>(nn - 1)});

        OracleVerdict v = check_program_against_oracle("bellman-ford", input);
        INFO(v.detail);
        CHECK(v.pass);
    }
}

TEST_CASE("specimen monitors hold across random runs") {
    std::mt19937 rng(5150);
    for (int it = 0; it < 40; ++it) {
        HostGraph input = random_traversal_graph(rng, 10, 14);
        for (const char* name : {"is-connected", "is-connected-old", "is-dag"}) {
            OracleVerdict v = check_program_against_oracle(name, input, true);
            INFO(name << ": " << v.detail);
            CHECK(v.pass);
        }
    }
}

TEST_CASE("closure program reaches the oracle fixpoint") {
    std::mt19937 rng(31337);
    for (int it = 0; it < 40; ++it) {
        HostGraph input = random_traversal_graph(rng, 7, 10);
        OracleVerdict v = check_program_against_oracle("transitive-closure", input, true);
        INFO(v.detail);
        CHECK(v.pass);
    }

    HostGraph path;
    NodeId a = n(path, "a"), b = n(path, "b"), c = n(path, "c");
    e(path, a, b, HostList{1LL});
    e(path, b, c, HostList{2LL});
    Program p = load_specimen("transitive-closure");
    HostGraph out = clone_graph(path);
    REQUIRE(run_program(p, out).kind == Outcome::Kind::graph);
    REQUIRE(out.edge_count() == 3);
    for (EdgeId oe : out.all_edges()) {
        if (path.edge_by_name(out.name(oe))) continue;
        CHECK(out.name(out.source(oe)) == "a");
        CHECK(out.name(out.target(oe)) == "c");
        CHECK(out.label(oe).empty());
        CHECK(out.mark(oe) == Mark::none);
    }
}

TEST_CASE("discreteness program agrees with the edge count") {
    std::mt19937 rng(4242);
    Program p = load_specimen("is-discrete");
    for (int it = 0; it < 40; ++it) {
        int nodes = int(rng() % 8);
        int edges = int(rng() % 3) == 0 ? 0 : int(rng() % 4);
        if (nodes == 0) edges = 0;
        HostGraph input;
        std::vector<NodeId> vs;
        for (int i = 0; i < nodes; ++i) vs.push_back(n(input, "n" + std::to_string(i), Mark::none));
        for (int i = 0; i < edges; ++i)
            e(input, vs[rng() % vs.size()], vs[rng() % vs.size()]);

        OracleVerdict v = check_program_against_oracle("is-discrete", input, true);
        INFO(v.detail);
        CHECK(v.pass);
        HostGraph g = clone_graph(input);
        CHECK((run_program(p, g).kind == Outcome::Kind::fail) == (edges > 0));
    }
}
