#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rewrite/host_graph.hpp"
#include "rewrite/value.hpp"

namespace rewrite {

// Subtype chain: char <= string <= atom <= list, int <= atom.
enum class VarType : std::uint8_t { list, atom, int_, string, char_ };

const char* var_type_name(VarType t);
bool value_fits_type(const HostList& v, VarType t);

// Expression tree for rule labels and conditions. Variables are resolved to
// dense indices when a rule is compiled; `empty` is a list_cat with no
// children. A label is a sequence of positions, each an atom-valued
// expression or a list variable.
struct Expr {
    enum class Kind : std::uint8_t {
        int_lit,
        str_lit,
        var,
        str_cat,  // '.' over string positions
        add,
        sub,
        mul,
        div_,
        neg,
        indeg,   // node identified by sval, resolved to node_idx
        outdeg,
        length,  // of the variable in kids[0]
    };
    Kind kind = Kind::int_lit;
    long long ival = 0;
    std::string sval;  // literal text, variable name, or node reference
    int var_idx = -1;
    VarType vtype = VarType::list;
    int node_idx = -1;  // indeg/outdeg target, index into lhs nodes
    std::vector<Expr> kids;
};

// A label pattern: ordered positions plus a mark (possibly `any` in rules).
struct RuleLabel {
    std::vector<Expr> items;
    Mark mark = Mark::none;
};

struct Cond {
    enum class Kind : std::uint8_t {
        not_,
        and_,
        or_,
        eq,
        ne,
        lt,
        le,
        gt,
        ge,
        is_int,
        is_char,
        is_string,
        is_atom,
        edge,
    };
    Kind kind = Kind::and_;
    std::vector<Cond> kids;
    std::vector<Expr> a, b;  // eq/ne: list expressions; comparisons: a[0], b[0]
    int var_idx = -1;        // type tests
    std::string var_name;
    std::string n1, n2;  // edge predicate node references
    int n1_idx = -1, n2_idx = -1;
    std::optional<std::vector<Expr>> edge_label;
};

// One binding per declared variable, indexed by var_idx. Values are stored
// uniformly as host lists; the variable's type constrains their shape.
struct Binding {
    bool bound = false;
    HostList value;
};
using Assignment = std::vector<Binding>;

struct EvalContext {
    const Assignment* alpha = nullptr;
    const HostGraph* graph = nullptr;
    const std::vector<NodeId>* node_map = nullptr;  // lhs node index -> host node
};

// Fully evaluate; throws ExecError on division by zero or overflow.
HostList eval_label(const std::vector<Expr>& items, const EvalContext& cx);
long long eval_int(const Expr& e, const EvalContext& cx);
bool eval_cond(const Cond& c, const EvalContext& cx);

// True iff a rule item's mark admits a host item's mark: equal, or `any`
// against any concrete mark. `any` never matches an unmarked item.
inline bool mark_matches(Mark rule_mark, Mark host_mark) {
    if (rule_mark == Mark::any) return host_mark != Mark::none;
    return rule_mark == host_mark;
}

// Unification of a simple label against a host value: consumes atoms left to
// right, a single list variable absorbing the remainder. Newly bound variable
// indices are pushed onto the trail so the matcher can retract them; existing
// bindings must agree. Returns false on mismatch (alpha may hold trail-listed
// extra bindings which the caller retracts).
bool unify_label(const std::vector<Expr>& items, const HostList& host, Assignment& alpha,
                 std::vector<int>& trail);

// Validation used by rule compilation: simple expressions have no
// arithmetic/degree/length operators, at most one list variable, and at most
// one string variable per string position.
bool label_is_simple(const std::vector<Expr>& items);

}  // namespace rewrite
