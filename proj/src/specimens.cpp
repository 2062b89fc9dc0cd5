#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rewrite/parser.hpp"
#include "rewrite/specimen_text.hpp"
#include "rewrite/specimens.hpp"

namespace rewrite {

const std::vector<Specimen>& specimen_catalog() {
    static const std::vector<Specimen> catalog = {
        {"is-discrete", specimen_text::is_discrete()},
        {"is-connected-old", specimen_text::is_connected_old()},
        {"is-connected", specimen_text::is_connected()},
        {"is-dag", specimen_text::is_dag()},
        {"bellman-ford", specimen_text::bellman_ford()},
        {"transitive-closure", specimen_text::transitive_closure()},
    };
    return catalog;
}

const char* specimen_source(const std::string& name) {
    for (const Specimen& s : specimen_catalog())
        if (s.name == name) return s.source;
    return nullptr;
}

Program load_specimen(const std::string& name) {
    const char* src = specimen_source(name);
    if (!src) throw NotFoundError("unknown specimen '" + name + "'");
    return parse_program(src);
}

HostGraph clone_graph(const HostGraph& g, bool legacy) {
    return parse_host_graph(print_host_graph(g), legacy);
}

// --- validators ---------------------------------------------------------

namespace {

[[noreturn]] void precondition(const std::string& what) {
    throw std::invalid_argument("input violates the program's contract: " + what);
}

}  // namespace

void validate_traversal_input(const HostGraph& g) {
    for (NodeId v : g.all_nodes()) {
        if (g.mark(v) != Mark::grey) precondition("node " + g.name(v) + " is not grey");
        if (g.rooted(v)) precondition("node " + g.name(v) + " is rooted");
    }
    for (EdgeId e : g.all_edges())
        if (g.mark(e) != Mark::none) precondition("edge " + g.name(e) + " is marked");
}

void validate_unmarked_input(const HostGraph& g) {
    for (NodeId v : g.all_nodes()) {
        if (g.mark(v) != Mark::none) precondition("node " + g.name(v) + " is marked");
        if (g.rooted(v)) precondition("node " + g.name(v) + " is rooted");
    }
    for (EdgeId e : g.all_edges())
        if (g.mark(e) != Mark::none) precondition("edge " + g.name(e) + " is marked");
}

NodeId validate_shortest_paths_input(const HostGraph& g) {
    NodeId root;
    for (NodeId v : g.all_nodes()) {
        if (g.mark(v) != Mark::grey) precondition("node " + g.name(v) + " is not grey");
        if (g.rooted(v)) {
            if (root) precondition("more than one root");
            root = v;
        }
    }
    if (!root) precondition("no root node");
    for (EdgeId e : g.all_edges()) {
        if (g.mark(e) != Mark::none) precondition("edge " + g.name(e) + " is marked");
        if (g.is_loop(e)) precondition("edge " + g.name(e) + " is a loop");
        const HostList& l = g.label(e);
        if (l.size() != 1 || !is_int(l[0]))
            precondition("edge " + g.name(e) + " is not labelled with a single integer");
    }
    return root;
}

// --- oracle comparison ----------------------------------------------------

namespace {

struct Run {
    Outcome outcome;
    HostGraph graph;
    bool monitor_violation = false;
    std::string monitor_detail;
};

Run run_specimen(const std::string& name, const HostGraph& input, bool monitors,
                 RunStats* stats) {
    Program p = load_specimen(name);
    Run r{Outcome{}, clone_graph(input), false, {}};
    std::vector<Monitor> mons;
    if (monitors) mons = specimen_monitors(name);
    try {
        r.outcome = run_program(p, r.graph, ExecLimits{}, stats, monitors ? &mons : nullptr);
    } catch (const ConstraintError& e) {
        r.monitor_violation = true;
        r.monitor_detail = e.what();
    }
    return r;
}

OracleVerdict abnormal(const Run& r) {
    if (r.monitor_violation) return {false, "invariant violated: " + r.monitor_detail};
    if (r.outcome.kind == Outcome::Kind::runtime_error)
        return {false, "runtime error: " + r.outcome.error};
    return {false, "timeout: " + r.outcome.error};
}

bool normal(const Run& r) {
    return !r.monitor_violation && (r.outcome.kind == Outcome::Kind::graph ||
                                    r.outcome.kind == Outcome::Kind::fail);
}

// Shared shape for the recognisers: fail exactly when the property is
// absent, otherwise keep the graph intact up to marks and rootedness.
OracleVerdict check_recogniser(const std::string& name, const HostGraph& input,
                               bool property_holds, const char* property, bool monitors,
                               RunStats* stats) {
    Run r = run_specimen(name, input, monitors, stats);
    if (!normal(r)) return abnormal(r);
    if (r.outcome.kind == Outcome::Kind::fail) {
        if (property_holds)
            return {false, std::string("program failed but the input is ") + property};
        return {true, std::string("fail, agreeing with the oracle (not ") + property + ")"};
    }
    if (!property_holds)
        return {false, std::string("program succeeded but the input is not ") + property};
    if (!isomorphic_ignoring_marks(input, r.graph))
        return {false, "output is not isomorphic to the input up to marks"};
    return {true, std::string("success, output intact, input is ") + property};
}

OracleVerdict check_shortest_paths(const HostGraph& input, bool monitors, RunStats* stats) {
    NodeId root = validate_shortest_paths_input(input);
    ShortestPaths sp = oracle_shortest_paths(input, root);
    Run r = run_specimen("bellman-ford", input, monitors, stats);
    if (!normal(r)) return abnormal(r);

    if (r.outcome.kind == Outcome::Kind::fail) {
        if (!sp.negative_cycle_reachable)
            return {false, "program failed but no reachable negative cycle exists"};
        return {true, "fail, agreeing with the oracle (reachable negative cycle)"};
    }
    if (sp.negative_cycle_reachable)
        return {false, "program succeeded despite a reachable negative cycle"};

    const HostGraph& out = r.graph;
    if (out.node_count() != input.node_count() || out.edge_count() != input.edge_count())
        return {false, "output size differs from the input"};

    for (EdgeId e : input.all_edges()) {
        const std::string& en = input.name(e);
        EdgeId oe = out.edge_by_name(en);
        if (!out.alive(oe)) return {false, "edge " + en + " missing from the output"};
        if (out.mark(oe) != Mark::blue) return {false, "edge " + en + " is not blue"};
        if (out.label(oe) != input.label(e)) return {false, "edge " + en + " was relabelled"};
        if (out.name(out.source(oe)) != input.name(input.source(e)) ||
            out.name(out.target(oe)) != input.name(input.target(e)))
            return {false, "edge " + en + " was moved"};
    }

    // Isolated non-root nodes are deleted and recreated by the program while
    // it probes their degree, so they are matched by label, not by name.
    std::set<std::string> claimed;
    std::vector<std::string> want_isolated, got_isolated;
    for (NodeId v : input.all_nodes()) {
        auto d = sp.dist_of(v);
        HostList want = input.label(v);
        if (d)
            want.push_back(*d);
        else
            want.push_back(std::string("f"));

        bool isolated = input.in_degree(v) + input.out_degree(v) == 0;
        if (isolated && v != root) {
            want_isolated.push_back(print_list(want));
            continue;
        }
        const std::string& vn = input.name(v);
        claimed.insert(vn);
        NodeId ov = out.node_by_name(vn);
        if (!out.alive(ov)) return {false, "node " + vn + " missing from the output"};
        if (out.label(ov) != want)
            return {false, "node " + vn + " ended with " + print_list(out.label(ov)) +
                               ", expected " + print_list(want)};
        if (out.mark(ov) != Mark::grey) return {false, "node " + vn + " is not grey"};
        if (out.rooted(ov) != (v == root))
            return {false, v == root ? "the root was not restored on node " + vn
                                     : "stray root on node " + vn};
    }
    for (NodeId ov : out.all_nodes()) {
        if (claimed.count(out.name(ov))) continue;
        if (out.mark(ov) != Mark::grey) return {false, "an isolated node is not grey"};
        if (out.rooted(ov)) return {false, "an isolated node is rooted"};
        if (out.in_degree(ov) + out.out_degree(ov) != 0)
            return {false, "a fresh node gained edges"};
        got_isolated.push_back(print_list(out.label(ov)));
    }
    std::sort(want_isolated.begin(), want_isolated.end());
    std::sort(got_isolated.begin(), got_isolated.end());
    if (want_isolated != got_isolated)
        return {false, "the labels of the isolated nodes do not match"};
    return {true, "distances match the oracle on every node"};
}

OracleVerdict check_closure(const HostGraph& input, bool monitors, RunStats* stats) {
    validate_traversal_input(input);
    Reachability rc = oracle_reachability(input);
    Run r = run_specimen("transitive-closure", input, monitors, stats);
    if (!normal(r)) return abnormal(r);
    if (r.outcome.kind == Outcome::Kind::fail) return {false, "program unexpectedly failed"};
    const HostGraph& out = r.graph;

    if (out.node_count() != input.node_count()) return {false, "node count changed"};
    std::vector<std::string> names;
    for (std::size_t i = 0; i < rc.nodes.size(); ++i) names.push_back(input.name(rc.nodes[i]));
    auto index_of = [&](const std::string& n) {
        for (std::size_t i = 0; i < names.size(); ++i)
            if (names[i] == n) return int(i);
        return -1;
    };
    for (NodeId v : input.all_nodes()) {
        NodeId ov = out.node_by_name(input.name(v));
        if (!out.alive(ov) || out.label(ov) != input.label(v) || out.mark(ov) != Mark::grey ||
            out.rooted(ov))
            return {false, "node " + input.name(v) + " was altered"};
    }

    std::set<std::pair<int, int>> had;
    for (EdgeId e : input.all_edges()) {
        had.insert({index_of(input.name(input.source(e))), index_of(input.name(input.target(e)))});
        EdgeId oe = out.edge_by_name(input.name(e));
        if (!out.alive(oe) || out.label(oe) != input.label(e) || out.mark(oe) != Mark::none)
            return {false, "edge " + input.name(e) + " was altered"};
    }
    std::set<std::pair<int, int>> added;
    for (EdgeId oe : out.all_edges()) {
        if (input.edge_by_name(out.name(oe))) continue;
        if (!out.label(oe).empty() || out.mark(oe) != Mark::none)
            return {false, "a created edge is labelled or marked"};
        int s = index_of(out.name(out.source(oe))), t = index_of(out.name(out.target(oe)));
        if (!added.insert({s, t}).second) return {false, "a pair was linked twice"};
        if (had.count({s, t})) return {false, "a created edge duplicates an input pair"};
        if (s == t || !rc.reach[s][t]) return {false, "a created edge links an unreachable pair"};
    }
    for (std::size_t s = 0; s < names.size(); ++s)
        for (std::size_t t = 0; t < names.size(); ++t) {
            if (s == t || !rc.reach[s][t]) continue;
            if (!had.count({int(s), int(t)}) && !added.count({int(s), int(t)}))
                return {false, "reachable pair " + names[s] + " -> " + names[t] + " not linked"};
        }
    return {true, "edge relation equals the transitive closure"};
}

}  // namespace

OracleVerdict check_program_against_oracle(const std::string& name, const HostGraph& input,
                                           bool monitors, RunStats* stats) {
    if (name == "is-connected" || name == "is-connected-old") {
        validate_traversal_input(input);
        return check_recogniser(name, input, oracle_connected(input), "connected", monitors,
                                stats);
    }
    if (name == "is-dag") {
        validate_traversal_input(input);
        return check_recogniser(name, input, oracle_acyclic(input), "acyclic", monitors, stats);
    }
    if (name == "is-discrete") {
        validate_unmarked_input(input);
        return check_recogniser(name, input, input.edge_count() == 0, "discrete", monitors,
                                stats);
    }
    if (name == "bellman-ford") return check_shortest_paths(input, monitors, stats);
    if (name == "transitive-closure") return check_closure(input, monitors, stats);
    throw std::invalid_argument("no oracle covers '" + name + "'");
}

std::vector<Monitor> specimen_monitors(const std::string& name) {
    std::vector<Monitor> mons{monitor_root_bound(1), monitor_red_edge_bound(1)};
    if (name == "is-connected" || name == "is-connected-old") mons.push_back(monitor_dashed_path());
    return mons;
}

// --- worked inputs ----------------------------------------------------------

namespace {

struct Builder {
    HostGraph g;
    NodeId n(const std::string& name, Mark m = Mark::grey, bool rooted = false,
             HostList label = {}) {
        return g.add_node(std::move(label), m, rooted, name);
    }
    void e(NodeId a, NodeId b, HostList label = {}) {
        g.add_edge(a, b, std::move(label), Mark::none);
    }
    void w(NodeId a, NodeId b, long long weight) { e(a, b, HostList{weight}); }
};

HostGraph star(int edges, Mark m) {
    Builder b;
    NodeId c = b.n("c", m);
    for (int i = 0; i < edges; ++i) {
        NodeId l = b.n("l" + std::to_string(i), m);
        if (i % 2 == 0)
            b.e(c, l);
        else
            b.e(l, c);
    }
    return std::move(b.g);
}

HostGraph grid3x3() {
    Builder b;
    NodeId v[3][3];
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            v[i][j] = b.n("g" + std::to_string(i) + std::to_string(j));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            if (j + 1 < 3) b.e(v[i][j], v[i][j + 1]);
            if (i + 1 < 3) b.e(v[i][j], v[i + 1][j]);
        }
    return std::move(b.g);
}

HostGraph discrete(int n, Mark m) {
    Builder b;
    for (int i = 0; i < n; ++i) b.n("d" + std::to_string(i), m);
    return std::move(b.g);
}

std::vector<std::pair<std::string, HostGraph>> connectivity_inputs() {
    std::vector<std::pair<std::string, HostGraph>> out;
    out.emplace_back("empty graph", HostGraph{});
    out.emplace_back("single node", discrete(1, Mark::grey));
    out.emplace_back("two isolated nodes", discrete(2, Mark::grey));
    out.emplace_back("star with 8 edges", star(8, Mark::grey));
    out.emplace_back("3x3 grid", grid3x3());
    {
        Builder b;
        NodeId a = b.n("a"), c = b.n("b");
        b.e(a, c);
        b.n("stranded");
        out.emplace_back("edge plus stranded node", std::move(b.g));
    }
    return out;
}

}  // namespace

std::vector<std::pair<std::string, HostGraph>> conformance_inputs(const std::string& name) {
    std::vector<std::pair<std::string, HostGraph>> out;
    if (name == "is-connected" || name == "is-connected-old") return connectivity_inputs();

    if (name == "is-dag") {
        {
            Builder b;
            NodeId a = b.n("a");
            b.e(a, a);
            out.emplace_back("single node with a loop", std::move(b.g));
        }
        {
            Builder b;
            NodeId v[7];
            for (int i = 0; i < 7; ++i) v[i] = b.n("t" + std::to_string(i));
            for (int i = 1; i < 7; ++i) b.e(v[(i - 1) / 2], v[i]);
            out.emplace_back("binary tree", std::move(b.g));
        }
        {
            Builder b;
            NodeId a = b.n("a"), c = b.n("b"), d = b.n("c"), t = b.n("tail");
            b.e(a, c);
            b.e(c, d);
            b.e(d, a);
            b.e(t, a);
            out.emplace_back("triangle with an incoming tail", std::move(b.g));
        }
        {
            Builder b;
            NodeId a = b.n("a"), c = b.n("b"), d = b.n("c"), e = b.n("d");
            b.e(a, c);
            b.e(a, d);
            b.e(c, e);
            b.e(d, e);
            out.emplace_back("diamond", std::move(b.g));
        }
        out.emplace_back("discrete 5 nodes", discrete(5, Mark::grey));
        return out;
    }

    if (name == "bellman-ford") {
        {
            Builder b;
            NodeId a = b.n("a", Mark::grey, true), c = b.n("b");
            b.w(a, c, 5);
            out.emplace_back("one edge of weight 5", std::move(b.g));
        }
        {
            Builder b;
            NodeId v[4];
            for (int i = 0; i < 4; ++i) v[i] = b.n("v" + std::to_string(i), Mark::grey, i == 0);
            for (int i = 0; i < 4; ++i) b.w(v[i], v[(i + 1) % 4], i % 2 == 0 ? -2 : 1);
            out.emplace_back("alternating negative cycle", std::move(b.g));
        }
        {
            Builder b;
            NodeId r = b.n("r", Mark::grey, true), a = b.n("a");
            b.w(r, a, 3);
            b.n("far", Mark::grey, false, HostList{7LL});
            out.emplace_back("unreachable node", std::move(b.g));
        }
        {
            Builder b;
            NodeId a = b.n("a", Mark::grey, true), c = b.n("b"), d = b.n("c");
            b.w(a, c, -3);
            b.w(c, d, 2);
            b.w(a, d, 10);
            out.emplace_back("negative edge, no cycle", std::move(b.g));
        }
        {
            Builder b;
            NodeId r = b.n("r", Mark::grey, true), x = b.n("x");
            b.w(r, x, 1);
            NodeId c1 = b.n("c1"), c2 = b.n("c2");
            b.w(c1, c2, -2);
            b.w(c2, c1, 1);
            out.emplace_back("negative cycle out of reach", std::move(b.g));
        }
        return out;
    }

    if (name == "is-discrete") {
        out.emplace_back("empty graph", HostGraph{});
        out.emplace_back("five isolated nodes", discrete(5, Mark::none));
        {
            Builder b;
            NodeId a = b.n("a", Mark::none), c = b.n("b", Mark::none);
            b.e(a, c);
            out.emplace_back("one edge", std::move(b.g));
        }
        return out;
    }

    if (name == "transitive-closure") {
        {
            Builder b;
            NodeId a = b.n("a"), c = b.n("b"), d = b.n("c");
            b.e(a, c);
            b.e(c, d);
            out.emplace_back("path of three nodes", std::move(b.g));
        }
        {
            Builder b;
            NodeId a = b.n("a"), c = b.n("b"), d = b.n("c");
            b.e(a, c);
            b.e(c, d);
            b.e(d, a);
            out.emplace_back("directed triangle", std::move(b.g));
        }
        {
            Builder b;
            NodeId a = b.n("a"), c = b.n("b"), d = b.n("c"), e = b.n("d");
            b.e(a, c);
            b.e(d, e);
            out.emplace_back("two disjoint edges", std::move(b.g));
        }
        return out;
    }
    throw std::invalid_argument("no worked inputs for '" + name + "'");
}

}  // namespace rewrite
