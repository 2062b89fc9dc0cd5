#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rewrite/host_graph.hpp"
#include "rewrite/label_expr.hpp"
#include "rewrite/value.hpp"

namespace rewrite {

struct RuleVar {
    std::string name;
    VarType type = VarType::list;
};

struct RuleNode {
    std::string id;
    bool rooted = false;
    RuleLabel label;
};

struct RuleEdge {
    std::string id;
    int src = -1, tgt = -1;  // indices into the owning side's node vector
    bool bidirectional = false;
    RuleLabel label;
};

struct RuleGraph {
    std::vector<RuleNode> nodes;
    std::vector<RuleEdge> edges;
    int node_index(const std::string& id) const;
    int edge_index(const std::string& id) const;
};

// Search plan: roots are bound first, then the pattern is grown outward along
// edges; nodes unreachable from any bound part are seeded by mark-bucket
// scans; the condition runs once everything is bound.
struct PlanOp {
    enum class Kind : std::uint8_t { bind_root, bind_node, extend, bind_loop, condition };
    Kind kind = Kind::bind_node;
    int item = -1;             // node index (bind_root/bind_node) or edge index
    bool from_src = false;     // extend: enumeration starts at the edge's source node
    bool other_bound = false;  // extend: far endpoint already bound, existence check only
};

struct Rule {
    std::string name;
    std::vector<RuleVar> vars;
    RuleGraph lhs, rhs;
    Cond condition;  // ignored unless has_condition
    bool has_condition = false;

    // Filled in by compile_rule.
    std::vector<int> rhs_node_of_lhs;  // -1 where the node is deleted
    std::vector<int> lhs_node_of_rhs;  // -1 where the node is created
    std::vector<int> rhs_edge_of_lhs;  // same-id edges are updated in place
    std::vector<int> lhs_edge_of_rhs;
    std::vector<int> lhs_incidence;  // per lhs node: incident pattern edge ends (loops count 2)
    std::vector<PlanOp> plan;
    bool fast = false;
    bool compiled = false;
};

// Validates the rule, resolves variable and node references, derives the
// interface maps and the search plan, and classifies the rule as fast.
// Throws ConstraintError on any malformed rule.
void compile_rule(Rule& r);

struct Match {
    bool found = false;
    std::vector<NodeId> nodes;  // lhs node index -> host node
    std::vector<EdgeId> edges;  // lhs edge index -> host edge
    Assignment alpha;
    std::uint64_t attempts = 0;  // host items tried as candidates
};

// Searches for a match with rule-local backtracking. Matched flags are used
// as scratch during the search and are always clear on return.
Match find_match(HostGraph& g, const Rule& r);

// Applies the rule at a match. All right-hand labels are evaluated against
// the pre-application graph before any mutation, so an evaluation error
// (division by zero, overflow) propagates with the graph untouched.
void apply_rule(HostGraph& g, const Rule& r, const Match& m);

struct RuleStats {
    std::uint64_t calls = 0, successes = 0, failures = 0, attempts = 0;
};

// One attempted application; updates stats when given.
bool apply_once(HostGraph& g, const Rule& r, RuleStats* st = nullptr);

}  // namespace rewrite
