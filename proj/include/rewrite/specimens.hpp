#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rewrite/host_graph.hpp"
#include "rewrite/interpreter.hpp"
#include "rewrite/program.hpp"

namespace rewrite {

// --- shipped programs -------------------------------------------------------

struct Specimen {
    std::string name;
    const char* source;
};

// Every program shipped with the engine, in catalogue order.
const std::vector<Specimen>& specimen_catalog();

// nullptr when the name is unknown.
const char* specimen_source(const std::string& name);

// Parses and links the named program. Throws NotFoundError on unknown names.
Program load_specimen(const std::string& name);

// --- reference oracles ------------------------------------------------------
// Deliberately naive: raw item enumeration and textbook algorithms, sharing
// no code with the matcher or the interpreter.

// Undirected connectivity via union-find; the empty graph counts as connected.
bool oracle_connected(const HostGraph& g);

// Directed acyclicity via Kahn peeling; a self-loop is a cycle.
bool oracle_acyclic(const HostGraph& g);

struct ShortestPaths {
    std::vector<NodeId> nodes;
    std::vector<std::optional<long long>> dist;  // parallel to nodes; empty = unreachable
    bool negative_cycle_reachable = false;

    std::optional<long long> dist_of(NodeId v) const;
};

// Textbook Bellman-Ford: n-1 relaxation rounds over the full edge list plus a
// detection round flagging any further relaxation whose source is reachable.
// Edge weights are the single-integer edge labels.
ShortestPaths oracle_shortest_paths(const HostGraph& g, NodeId source);

// Directed reachability by paths of one or more edges, via repeated BFS.
// reach[i][j] is indexed by the positions of nodes() in the returned order.
struct Reachability {
    std::vector<NodeId> nodes;
    std::vector<std::vector<bool>> reach;
};
Reachability oracle_reachability(const HostGraph& g);

// --- input validators -------------------------------------------------------
// Throw std::invalid_argument describing the first violated condition.

// Traversal programs expect every node grey and unrooted, every edge unmarked.
void validate_traversal_input(const HostGraph& g);

// Discreteness inputs: every node and edge unmarked, no roots.
void validate_unmarked_input(const HostGraph& g);

// Shortest-path inputs: grey nodes, exactly one of them rooted, unmarked
// edges each labelled with a single integer, no loops. Returns the root.
NodeId validate_shortest_paths_input(const HostGraph& g);

// --- conformance ------------------------------------------------------------

// Label-respecting graph isomorphism ignoring marks and rootedness.
// Exponential in the worst case; meant for small conformance graphs.
bool isomorphic_ignoring_marks(const HostGraph& a, const HostGraph& b);

// Deep copy through the canonical text form; names survive.
HostGraph clone_graph(const HostGraph& g, bool legacy = false);

struct OracleVerdict {
    bool pass = false;
    std::string detail;  // diagnostic on failure, summary on success
};

// Runs the named specimen on a copy of `input` and compares the outcome with
// the matching oracle: the traversal programs must fail exactly when the
// oracle property is absent and otherwise preserve the graph up to marks;
// bellman-ford must fail exactly on a reachable negative cycle and otherwise
// append the oracle distances ("f" when unreachable), mark every edge blue,
// and leave the graph grey with the original root restored. Throws
// std::invalid_argument for inputs violating the program's contract or for
// names without an oracle.
OracleVerdict check_program_against_oracle(const std::string& name, const HostGraph& input,
                                           bool monitors = false, RunStats* stats = nullptr);

// The worked inputs each program's documentation discusses, paired with a
// short description; used by `check` alongside random corpora.
std::vector<std::pair<std::string, HostGraph>> conformance_inputs(const std::string& name);

// The invariant monitors a specimen is expected to maintain: at most one
// root and at most one red edge for all of them, plus the dashed-path shape
// for the connectivity programs, whose dashed edges spell the search spine.
std::vector<Monitor> specimen_monitors(const std::string& name);

}  // namespace rewrite
