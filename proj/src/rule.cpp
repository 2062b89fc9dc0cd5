#include "rewrite/rule.hpp"

#include <cassert>
#include <queue>

namespace rewrite {

int RuleGraph::node_index(const std::string& id) const {
    for (size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i].id == id) return (int)i;
    return -1;
}

int RuleGraph::edge_index(const std::string& id) const {
    for (size_t i = 0; i < edges.size(); ++i)
        if (edges[i].id == id) return (int)i;
    return -1;
}

namespace {

[[noreturn]] void bad(const Rule& r, const std::string& msg) {
    throw ConstraintError("rule " + r.name + ": " + msg);
}

int var_index(const Rule& r, const std::string& name) {
    for (size_t i = 0; i < r.vars.size(); ++i)
        if (r.vars[i].name == name) return (int)i;
    return -1;
}

enum class Ctx { position, integer, string_ };

void resolve_expr(Rule& r, Expr& e, Ctx ctx) {
    switch (e.kind) {
        case Expr::Kind::int_lit:
            if (ctx == Ctx::string_) bad(r, "integer literal in string context");
            return;
        case Expr::Kind::str_lit:
            if (ctx == Ctx::integer) bad(r, "string literal in integer context");
            return;
        case Expr::Kind::var: {
            int idx = var_index(r, e.sval);
            if (idx < 0) bad(r, "undeclared variable " + e.sval);
            e.var_idx = idx;
            e.vtype = r.vars[idx].type;
            if (ctx == Ctx::integer && e.vtype != VarType::int_)
                bad(r, "variable " + e.sval + " used in integer context");
            if (ctx == Ctx::string_ && e.vtype != VarType::string && e.vtype != VarType::char_)
                bad(r, "variable " + e.sval + " used in string context");
            return;
        }
        case Expr::Kind::str_cat:
            if (ctx == Ctx::integer) bad(r, "string concatenation in integer context");
            for (Expr& k : e.kids) resolve_expr(r, k, Ctx::string_);
            return;
        case Expr::Kind::add:
        case Expr::Kind::sub:
        case Expr::Kind::mul:
        case Expr::Kind::div_:
        case Expr::Kind::neg:
            if (ctx == Ctx::string_) bad(r, "arithmetic in string context");
            for (Expr& k : e.kids) resolve_expr(r, k, Ctx::integer);
            return;
        case Expr::Kind::indeg:
        case Expr::Kind::outdeg: {
            if (ctx == Ctx::string_) bad(r, "degree operator in string context");
            int ni = r.lhs.node_index(e.sval);
            if (ni < 0) bad(r, "degree of node " + e.sval + " not in the left graph");
            e.node_idx = ni;
            return;
        }
        case Expr::Kind::length:
            if (ctx == Ctx::string_) bad(r, "length operator in string context");
            if (e.kids.size() != 1 || e.kids[0].kind != Expr::Kind::var)
                bad(r, "length takes a variable");
            resolve_expr(r, e.kids[0], Ctx::position);
            return;
    }
}

void resolve_label(Rule& r, RuleLabel& l) {
    for (Expr& e : l.items) resolve_expr(r, e, Ctx::position);
}

void resolve_cond(Rule& r, Cond& c) {
    switch (c.kind) {
        case Cond::Kind::not_:
        case Cond::Kind::and_:
        case Cond::Kind::or_:
            for (Cond& k : c.kids) resolve_cond(r, k);
            return;
        case Cond::Kind::eq:
        case Cond::Kind::ne:
            for (Expr& e : c.a) resolve_expr(r, e, Ctx::position);
            for (Expr& e : c.b) resolve_expr(r, e, Ctx::position);
            return;
        case Cond::Kind::lt:
        case Cond::Kind::le:
        case Cond::Kind::gt:
        case Cond::Kind::ge:
            resolve_expr(r, c.a.at(0), Ctx::integer);
            resolve_expr(r, c.b.at(0), Ctx::integer);
            return;
        case Cond::Kind::is_int:
        case Cond::Kind::is_char:
        case Cond::Kind::is_string:
        case Cond::Kind::is_atom: {
            int idx = var_index(r, c.var_name);
            if (idx < 0) bad(r, "type test on undeclared variable " + c.var_name);
            c.var_idx = idx;
            return;
        }
        case Cond::Kind::edge: {
            c.n1_idx = r.lhs.node_index(c.n1);
            c.n2_idx = r.lhs.node_index(c.n2);
            if (c.n1_idx < 0 || c.n2_idx < 0)
                bad(r, "edge predicate references a node not in the left graph");
            if (c.edge_label)
                for (Expr& e : *c.edge_label) resolve_expr(r, e, Ctx::position);
            return;
        }
    }
}

void collect_vars(const Expr& e, std::vector<char>& seen) {
    if (e.kind == Expr::Kind::var && e.var_idx >= 0) seen[e.var_idx] = 1;
    for (const Expr& k : e.kids) collect_vars(k, seen);
}

void collect_cond_vars(const Cond& c, std::vector<char>& seen) {
    for (const Cond& k : c.kids) collect_cond_vars(k, seen);
    for (const Expr& e : c.a) collect_vars(e, seen);
    for (const Expr& e : c.b) collect_vars(e, seen);
    if (c.var_idx >= 0) seen[c.var_idx] = 1;
    if (c.edge_label)
        for (const Expr& e : *c.edge_label) collect_vars(e, seen);
}

int seed_priority(Mark m) {
    switch (m) {
        case Mark::green: return 0;  // rare by convention, cheapest bucket to scan
        case Mark::red: return 1;
        case Mark::blue: return 2;
        case Mark::grey: return 3;
        case Mark::none: return 4;
        default: return 5;  // any: scans four buckets
    }
}

void build_plan(Rule& r) {
    const RuleGraph& L = r.lhs;
    std::vector<char> bound(L.nodes.size(), 0);
    std::vector<char> edge_done(L.edges.size(), 0);
    std::queue<int> q;
    r.plan.clear();

    auto attach_edges = [&](int ni) {
        for (size_t ei = 0; ei < L.edges.size(); ++ei) {
            if (edge_done[ei]) continue;
            const RuleEdge& e = L.edges[ei];
            if (e.src != ni && e.tgt != ni) continue;
            edge_done[ei] = 1;
            if (e.src == e.tgt) {
                r.plan.push_back({PlanOp::Kind::bind_loop, (int)ei, true, false});
                continue;
            }
            int other = e.src == ni ? e.tgt : e.src;
            bool from_src = e.src == ni;
            if (bound[other]) {
                r.plan.push_back({PlanOp::Kind::extend, (int)ei, from_src, true});
            } else {
                r.plan.push_back({PlanOp::Kind::extend, (int)ei, from_src, false});
                bound[other] = 1;
                q.push(other);
            }
        }
    };

    for (size_t i = 0; i < L.nodes.size(); ++i) {
        if (!L.nodes[i].rooted) continue;
        r.plan.push_back({PlanOp::Kind::bind_root, (int)i, false, false});
        bound[i] = 1;
        q.push((int)i);
    }
    while (true) {
        while (!q.empty()) {
            int ni = q.front();
            q.pop();
            attach_edges(ni);
        }
        int seed = -1;
        for (size_t i = 0; i < L.nodes.size(); ++i) {
            if (bound[i]) continue;
            if (seed < 0 ||
                seed_priority(L.nodes[i].label.mark) < seed_priority(L.nodes[seed].label.mark))
                seed = (int)i;
        }
        if (seed < 0) break;
        r.plan.push_back({PlanOp::Kind::bind_node, seed, false, false});
        bound[seed] = 1;
        q.push(seed);
    }
    if (r.has_condition) r.plan.push_back({PlanOp::Kind::condition, -1, false, false});
}

bool broad_var(const Expr& e) {
    return e.kind == Expr::Kind::var && (e.vtype == VarType::list || e.vtype == VarType::string ||
                                         e.vtype == VarType::atom);
}

void count_broad(const Expr& e, std::vector<int>& cnt) {
    if (broad_var(e)) ++cnt[e.var_idx];
    for (const Expr& k : e.kids) count_broad(k, cnt);
}

bool has_broad(const Rule& r, const std::vector<Expr>& es) {
    std::vector<int> cnt(r.vars.size(), 0);
    for (const Expr& e : es) count_broad(e, cnt);
    for (int c : cnt)
        if (c > 0) return true;
    return false;
}

bool cond_blocks_fast(const Rule& r, const Cond& c) {
    switch (c.kind) {
        case Cond::Kind::edge: return true;
        case Cond::Kind::eq:
        case Cond::Kind::ne: return has_broad(r, c.a) && has_broad(r, c.b);
        default:
            for (const Cond& k : c.kids)
                if (cond_blocks_fast(r, k)) return true;
            return false;
    }
}

// A fast rule binds every pattern node in constant candidate sets: all left
// nodes hang off roots, no list/string/atom variable occurs twice on either
// side, and the condition avoids the edge predicate and comparisons between
// two such variables.
void classify_fast(Rule& r) {
    const RuleGraph& L = r.lhs;
    std::vector<char> seen(L.nodes.size(), 0);
    std::queue<int> q;
    for (size_t i = 0; i < L.nodes.size(); ++i)
        if (L.nodes[i].rooted) {
            seen[i] = 1;
            q.push((int)i);
        }
    while (!q.empty()) {
        int ni = q.front();
        q.pop();
        for (const RuleEdge& e : L.edges) {
            int other = e.src == ni ? e.tgt : e.tgt == ni ? e.src : -1;
            if (other >= 0 && !seen[other]) {
                seen[other] = 1;
                q.push(other);
            }
        }
    }
    for (char s : seen)
        if (!s) {
            r.fast = false;
            return;
        }

    for (const RuleGraph* side : {&r.lhs, &r.rhs}) {
        std::vector<int> cnt(r.vars.size(), 0);
        for (const RuleNode& n : side->nodes)
            for (const Expr& e : n.label.items) count_broad(e, cnt);
        for (const RuleEdge& e : side->edges)
            for (const Expr& x : e.label.items) count_broad(x, cnt);
        for (int c : cnt)
            if (c > 1) {
                r.fast = false;
                return;
            }
    }

    r.fast = !(r.has_condition && cond_blocks_fast(r, r.condition));
}

}  // namespace

void compile_rule(Rule& r) {
    for (size_t i = 0; i < r.vars.size(); ++i)
        for (size_t j = i + 1; j < r.vars.size(); ++j)
            if (r.vars[i].name == r.vars[j].name)
                bad(r, "duplicate variable " + r.vars[i].name);

    for (const RuleGraph* side : {&r.lhs, &r.rhs}) {
        for (size_t i = 0; i < side->nodes.size(); ++i)
            for (size_t j = i + 1; j < side->nodes.size(); ++j)
                if (side->nodes[i].id == side->nodes[j].id)
                    bad(r, "duplicate node " + side->nodes[i].id);
        for (size_t i = 0; i < side->edges.size(); ++i)
            for (size_t j = i + 1; j < side->edges.size(); ++j)
                if (side->edges[i].id == side->edges[j].id)
                    bad(r, "duplicate edge " + side->edges[i].id);
        for (const RuleNode& n : side->nodes)
            if (!node_legal(n.label.mark) && n.label.mark != Mark::any)
                bad(r, "illegal node mark on " + n.id);
        for (const RuleEdge& e : side->edges) {
            if (e.src < 0 || e.src >= (int)side->nodes.size() || e.tgt < 0 ||
                e.tgt >= (int)side->nodes.size())
                bad(r, "edge " + e.id + " references a missing node");
            if (!edge_legal(e.label.mark) && e.label.mark != Mark::any)
                bad(r, "illegal edge mark on " + e.id);
        }
    }

    for (RuleNode& n : r.lhs.nodes) {
        resolve_label(r, n.label);
        if (!label_is_simple(n.label.items)) bad(r, "left label of node " + n.id + " not simple");
    }
    for (RuleEdge& e : r.lhs.edges) {
        resolve_label(r, e.label);
        if (!label_is_simple(e.label.items)) bad(r, "left label of edge " + e.id + " not simple");
    }
    for (RuleNode& n : r.rhs.nodes) resolve_label(r, n.label);
    for (RuleEdge& e : r.rhs.edges) resolve_label(r, e.label);
    if (r.has_condition) resolve_cond(r, r.condition);

    // every variable used on the right or in the condition is bound on the left
    std::vector<char> lhs_vars(r.vars.size(), 0);
    for (const RuleNode& n : r.lhs.nodes)
        for (const Expr& e : n.label.items) collect_vars(e, lhs_vars);
    for (const RuleEdge& e : r.lhs.edges)
        for (const Expr& x : e.label.items) collect_vars(x, lhs_vars);
    std::vector<char> used(r.vars.size(), 0);
    for (const RuleNode& n : r.rhs.nodes)
        for (const Expr& e : n.label.items) collect_vars(e, used);
    for (const RuleEdge& e : r.rhs.edges)
        for (const Expr& x : e.label.items) collect_vars(x, used);
    if (r.has_condition) collect_cond_vars(r.condition, used);
    for (size_t i = 0; i < r.vars.size(); ++i)
        if (used[i] && !lhs_vars[i])
            bad(r, "variable " + r.vars[i].name + " is not bound by the left graph");

    r.rhs_node_of_lhs.assign(r.lhs.nodes.size(), -1);
    r.lhs_node_of_rhs.assign(r.rhs.nodes.size(), -1);
    for (size_t i = 0; i < r.lhs.nodes.size(); ++i) {
        int j = r.rhs.node_index(r.lhs.nodes[i].id);
        r.rhs_node_of_lhs[i] = j;
        if (j >= 0) r.lhs_node_of_rhs[j] = (int)i;
    }
    r.rhs_edge_of_lhs.assign(r.lhs.edges.size(), -1);
    r.lhs_edge_of_rhs.assign(r.rhs.edges.size(), -1);
    for (size_t i = 0; i < r.lhs.edges.size(); ++i) {
        int j = r.rhs.edge_index(r.lhs.edges[i].id);
        r.rhs_edge_of_lhs[i] = j;
        if (j >= 0) r.lhs_edge_of_rhs[j] = (int)i;
    }

    // an edge present on both sides keeps its host identity, so its endpoints
    // and orientation freedom must coincide
    for (size_t i = 0; i < r.lhs.edges.size(); ++i) {
        int j = r.rhs_edge_of_lhs[i];
        if (j < 0) continue;
        const RuleEdge& le = r.lhs.edges[i];
        const RuleEdge& re = r.rhs.edges[j];
        if (le.bidirectional != re.bidirectional)
            bad(r, "edge " + le.id + " changes orientation freedom between sides");
        if (r.rhs_node_of_lhs[le.src] != re.src || r.rhs_node_of_lhs[le.tgt] != re.tgt)
            bad(r, "edge " + le.id + " connects different nodes on the two sides");
    }
    for (size_t j = 0; j < r.rhs.edges.size(); ++j) {
        if (r.lhs_edge_of_rhs[j] >= 0) continue;
        if (r.rhs.edges[j].bidirectional)
            bad(r, "created edge " + r.rhs.edges[j].id + " cannot be bidirectional");
    }
    for (size_t j = 0; j < r.rhs.nodes.size(); ++j)
        if (r.rhs.nodes[j].label.mark == Mark::any && r.lhs_node_of_rhs[j] < 0)
            bad(r, "created node " + r.rhs.nodes[j].id + " cannot carry the wildcard mark");
    for (size_t j = 0; j < r.rhs.edges.size(); ++j)
        if (r.rhs.edges[j].label.mark == Mark::any && r.lhs_edge_of_rhs[j] < 0)
            bad(r, "created edge " + r.rhs.edges[j].id + " cannot carry the wildcard mark");

    r.lhs_incidence.assign(r.lhs.nodes.size(), 0);
    for (const RuleEdge& e : r.lhs.edges) {
        ++r.lhs_incidence[e.src];
        ++r.lhs_incidence[e.tgt];
    }

    build_plan(r);
    classify_fast(r);
    r.compiled = true;
}

namespace {

struct Matcher {
    HostGraph& g;
    const Rule& r;
    Match& m;
    std::vector<int> trail;

    void pop_trail(size_t tl) {
        while (trail.size() > tl) {
            m.alpha[trail.back()].bound = false;
            trail.pop_back();
        }
    }

    bool try_node(int li, NodeId h) {
        if (g.matched(h)) return false;
        const RuleNode& rn = r.lhs.nodes[li];
        if (g.rooted(h) != rn.rooted) return false;
        if (!mark_matches(rn.label.mark, g.mark(h))) return false;
        size_t tl = trail.size();
        if (!unify_label(rn.label.items, g.label(h), m.alpha, trail)) {
            pop_trail(tl);
            return false;
        }
        g.set_matched(h);
        m.nodes[li] = h;
        return true;
    }

    void unbind_node(int li, size_t tl) {
        g.clear_matched(m.nodes[li]);
        m.nodes[li] = NodeId{};
        pop_trail(tl);
    }

    bool try_edge(int ei, EdgeId h) {
        if (g.matched(h)) return false;
        const RuleEdge& re = r.lhs.edges[ei];
        if (!mark_matches(re.label.mark, g.mark(h))) return false;
        size_t tl = trail.size();
        if (!unify_label(re.label.items, g.label(h), m.alpha, trail)) {
            pop_trail(tl);
            return false;
        }
        g.set_matched(h);
        m.edges[ei] = h;
        return true;
    }

    void unbind_edge(int ei, size_t tl) {
        g.clear_matched(m.edges[ei]);
        m.edges[ei] = EdgeId{};
        pop_trail(tl);
    }

    // Deleted pattern nodes must have no host edges beyond the matched ones;
    // comparing degrees suffices because edges are matched injectively.
    bool dangling_ok() const {
        for (size_t i = 0; i < r.lhs.nodes.size(); ++i) {
            if (r.rhs_node_of_lhs[i] >= 0) continue;
            NodeId h = m.nodes[i];
            if (g.in_degree(h) + g.out_degree(h) != r.lhs_incidence[i]) return false;
        }
        return true;
    }

    bool node_candidates(const PlanOp& op, size_t oi, NodeId first,
                         NodeId (HostGraph::*next)(NodeId, Mark) const, Mark mark) {
        for (NodeId h = first; h; h = (g.*next)(h, mark)) {
            ++m.attempts;
            size_t tl = trail.size();
            if (!try_node(op.item, h)) continue;
            if (run(oi + 1)) return true;
            unbind_node(op.item, tl);
        }
        return false;
    }

    bool edge_candidate(const PlanOp& op, size_t oi, EdgeId e, int far, NodeId hf) {
        ++m.attempts;
        size_t tl = trail.size();
        if (!try_edge(op.item, e)) return false;
        if (op.other_bound || far < 0) {
            if (far >= 0 && m.nodes[far] != hf) {
                unbind_edge(op.item, tl);
                return false;
            }
            if (run(oi + 1)) return true;
            unbind_edge(op.item, tl);
            return false;
        }
        size_t tl2 = trail.size();
        if (!try_node(far, hf)) {
            unbind_edge(op.item, tl);
            return false;
        }
        if (run(oi + 1)) return true;
        unbind_node(far, tl2);
        unbind_edge(op.item, tl);
        return false;
    }

    bool run(size_t oi) {
        if (oi == r.plan.size()) return dangling_ok();
        const PlanOp& op = r.plan[oi];
        switch (op.kind) {
            case PlanOp::Kind::condition: {
                EvalContext cx{&m.alpha, &g, &m.nodes};
                return eval_cond(r.condition, cx) && run(oi + 1);
            }
            case PlanOp::Kind::bind_root: {
                for (NodeId h = g.first_root(); h; h = g.next_root(h)) {
                    ++m.attempts;
                    size_t tl = trail.size();
                    if (!try_node(op.item, h)) continue;
                    if (run(oi + 1)) return true;
                    unbind_node(op.item, tl);
                }
                return false;
            }
            case PlanOp::Kind::bind_node: {
                Mark rm = r.lhs.nodes[op.item].label.mark;
                if (rm == Mark::any) {
                    for (Mark b : {Mark::red, Mark::green, Mark::blue, Mark::grey})
                        if (node_candidates(op, oi, g.first_node(b), &HostGraph::next_node, b))
                            return true;
                    return false;
                }
                return node_candidates(op, oi, g.first_node(rm), &HostGraph::next_node, rm);
            }
            case PlanOp::Kind::bind_loop: {
                const RuleEdge& re = r.lhs.edges[op.item];
                NodeId hb = m.nodes[re.src];
                Mark rm = re.label.mark;
                if (rm == Mark::any) {
                    for (EdgeId e = g.first_edge_any(hb, Dir::loop); e;
                         e = g.next_edge_any(e, Dir::loop))
                        if (edge_candidate(op, oi, e, -1, NodeId{})) return true;
                } else {
                    for (EdgeId e = g.first_edge(hb, rm, Dir::loop); e;
                         e = g.next_edge(e, Dir::loop))
                        if (edge_candidate(op, oi, e, -1, NodeId{})) return true;
                }
                return false;
            }
            case PlanOp::Kind::extend: {
                const RuleEdge& re = r.lhs.edges[op.item];
                int bnd = op.from_src ? re.src : re.tgt;
                int far = op.from_src ? re.tgt : re.src;
                NodeId hb = m.nodes[bnd];
                Mark rm = re.label.mark;
                for (Dir dir : {Dir::out, Dir::in}) {
                    bool wanted = re.bidirectional ||
                                  (dir == Dir::out ? bnd == re.src : bnd == re.tgt);
                    if (!wanted) continue;
                    if (rm == Mark::any) {
                        for (EdgeId e = g.first_edge_any(hb, dir); e;
                             e = g.next_edge_any(e, dir)) {
                            NodeId hf = dir == Dir::out ? g.target(e) : g.source(e);
                            if (edge_candidate(op, oi, e, far, hf)) return true;
                        }
                    } else {
                        for (EdgeId e = g.first_edge(hb, rm, dir); e; e = g.next_edge(e, dir)) {
                            NodeId hf = dir == Dir::out ? g.target(e) : g.source(e);
                            if (edge_candidate(op, oi, e, far, hf)) return true;
                        }
                    }
                }
                return false;
            }
        }
        return false;
    }
};

}  // namespace

Match find_match(HostGraph& g, const Rule& r) {
    assert(r.compiled);
    Match m;
    m.nodes.assign(r.lhs.nodes.size(), NodeId{});
    m.edges.assign(r.lhs.edges.size(), EdgeId{});
    m.alpha.assign(r.vars.size(), Binding{});
    Matcher mt{g, r, m, {}};
    if (mt.run(0)) {
        m.found = true;
        for (NodeId h : m.nodes) g.clear_matched(h);
        for (EdgeId h : m.edges) g.clear_matched(h);
    }
    return m;
}

void apply_rule(HostGraph& g, const Rule& r, const Match& m) {
    assert(r.compiled && m.found);
    EvalContext cx{&m.alpha, &g, &m.nodes};
    const size_t rn = r.rhs.nodes.size(), re = r.rhs.edges.size();

    // evaluate every right-hand label and mark against the graph as matched;
    // an evaluation error must leave the graph untouched
    std::vector<HostList> nlab(rn);
    std::vector<Mark> nmark(rn);
    for (size_t i = 0; i < rn; ++i) {
        nlab[i] = eval_label(r.rhs.nodes[i].label.items, cx);
        Mark mk = r.rhs.nodes[i].label.mark;
        if (mk == Mark::any) mk = g.mark(m.nodes[r.lhs_node_of_rhs[i]]);
        nmark[i] = mk;
    }
    std::vector<HostList> elab(re);
    std::vector<Mark> emark(re);
    for (size_t i = 0; i < re; ++i) {
        elab[i] = eval_label(r.rhs.edges[i].label.items, cx);
        Mark mk = r.rhs.edges[i].label.mark;
        if (mk == Mark::any) mk = g.mark(m.edges[r.lhs_edge_of_rhs[i]]);
        emark[i] = mk;
    }

    for (size_t i = 0; i < r.lhs.edges.size(); ++i)
        if (r.rhs_edge_of_lhs[i] < 0) g.delete_edge(m.edges[i]);
    for (size_t i = 0; i < r.lhs.nodes.size(); ++i)
        if (r.rhs_node_of_lhs[i] < 0) g.delete_node(m.nodes[i]);

    std::vector<NodeId> rnode(rn);
    for (size_t i = 0; i < rn; ++i) {
        int li = r.lhs_node_of_rhs[i];
        if (li < 0) {
            rnode[i] = g.add_node(nlab[i], nmark[i], r.rhs.nodes[i].rooted);
            continue;
        }
        NodeId h = m.nodes[li];
        if (g.label(h) != nlab[i]) g.relabel_node(h, nlab[i]);
        if (g.mark(h) != nmark[i]) g.remark_node(h, nmark[i]);
        if (g.rooted(h) != r.rhs.nodes[i].rooted) g.set_rooted(h, r.rhs.nodes[i].rooted);
        rnode[i] = h;
    }

    for (size_t i = 0; i < re; ++i) {
        int li = r.lhs_edge_of_rhs[i];
        if (li < 0) {
            g.add_edge(rnode[r.rhs.edges[i].src], rnode[r.rhs.edges[i].tgt], elab[i], emark[i]);
            continue;
        }
        EdgeId h = m.edges[li];
        if (g.label(h) != elab[i]) g.relabel_edge(h, elab[i]);
        if (g.mark(h) != emark[i]) g.remark_edge(h, emark[i]);
    }
}

bool apply_once(HostGraph& g, const Rule& r, RuleStats* st) {
    Match m = find_match(g, r);
    if (st) {
        ++st->calls;
        st->attempts += m.attempts;
    }
    if (!m.found) {
        if (st) ++st->failures;
        return false;
    }
    apply_rule(g, r, m);
    if (st) ++st->successes;
    return true;
}

}  // namespace rewrite
