#include "rewrite/label_expr.hpp"

#include <cassert>
#include <climits>

namespace rewrite {

const char* var_type_name(VarType t) {
    switch (t) {
        case VarType::list: return "list";
        case VarType::atom: return "atom";
        case VarType::int_: return "int";
        case VarType::string: return "string";
        case VarType::char_: return "char";
    }
    return "?";
}

bool value_fits_type(const HostList& v, VarType t) {
    switch (t) {
        case VarType::list: return true;
        case VarType::atom: return v.size() == 1;
        case VarType::int_: return v.size() == 1 && is_int(v[0]);
        case VarType::string: return v.size() == 1 && !is_int(v[0]);
        case VarType::char_:
            return v.size() == 1 && !is_int(v[0]) && as_string(v[0]).size() == 1;
    }
    return false;
}

namespace {

long long checked_add(long long a, long long b) {
    long long r;
    if (__builtin_add_overflow(a, b, &r)) throw ExecError("integer overflow in +");
    return r;
}

long long checked_sub(long long a, long long b) {
    long long r;
    if (__builtin_sub_overflow(a, b, &r)) throw ExecError("integer overflow in -");
    return r;
}

long long checked_mul(long long a, long long b) {
    long long r;
    if (__builtin_mul_overflow(a, b, &r)) throw ExecError("integer overflow in *");
    return r;
}

long long checked_div(long long a, long long b) {
    if (b == 0) throw ExecError("division by zero");
    if (a == LLONG_MIN && b == -1) throw ExecError("integer overflow in /");
    return a / b;  // truncates toward zero
}

const HostList& var_value(const Expr& e, const EvalContext& cx) {
    assert(cx.alpha && e.var_idx >= 0 && e.var_idx < (int)cx.alpha->size());
    const Binding& b = (*cx.alpha)[e.var_idx];
    if (!b.bound) throw ExecError("unbound variable " + e.sval);
    return b.value;
}

HostAtom eval_atom(const Expr& e, const EvalContext& cx);

std::string eval_string(const Expr& e, const EvalContext& cx) {
    switch (e.kind) {
        case Expr::Kind::str_lit: return e.sval;
        case Expr::Kind::var: {
            const HostList& v = var_value(e, cx);
            if (v.size() != 1 || is_int(v[0]))
                throw ExecError("variable " + e.sval + " is not a string");
            return as_string(v[0]);
        }
        case Expr::Kind::str_cat: {
            std::string out;
            for (const Expr& k : e.kids) out += eval_string(k, cx);
            return out;
        }
        default: {
            HostAtom a = eval_atom(e, cx);
            if (is_int(a)) throw ExecError("integer used as string");
            return as_string(a);
        }
    }
}

HostAtom eval_atom(const Expr& e, const EvalContext& cx) {
    switch (e.kind) {
        case Expr::Kind::int_lit: return HostAtom(e.ival);
        case Expr::Kind::str_lit: return HostAtom(e.sval);
        case Expr::Kind::var: {
            const HostList& v = var_value(e, cx);
            if (v.size() != 1) throw ExecError("variable " + e.sval + " is not an atom");
            return v[0];
        }
        case Expr::Kind::str_cat: return HostAtom(eval_string(e, cx));
        default: return HostAtom(eval_int(e, cx));
    }
}

}  // namespace

long long eval_int(const Expr& e, const EvalContext& cx) {
    switch (e.kind) {
        case Expr::Kind::int_lit: return e.ival;
        case Expr::Kind::var: {
            const HostList& v = var_value(e, cx);
            if (v.size() != 1 || !is_int(v[0]))
                throw ExecError("variable " + e.sval + " is not an integer");
            return as_int(v[0]);
        }
        case Expr::Kind::add: return checked_add(eval_int(e.kids[0], cx), eval_int(e.kids[1], cx));
        case Expr::Kind::sub: return checked_sub(eval_int(e.kids[0], cx), eval_int(e.kids[1], cx));
        case Expr::Kind::mul: return checked_mul(eval_int(e.kids[0], cx), eval_int(e.kids[1], cx));
        case Expr::Kind::div_: return checked_div(eval_int(e.kids[0], cx), eval_int(e.kids[1], cx));
        case Expr::Kind::neg: {
            long long v = eval_int(e.kids[0], cx);
            if (v == LLONG_MIN) throw ExecError("integer overflow in unary -");
            return -v;
        }
        case Expr::Kind::indeg: {
            assert(cx.graph && cx.node_map && e.node_idx >= 0);
            return (long long)cx.graph->in_degree((*cx.node_map)[e.node_idx]);
        }
        case Expr::Kind::outdeg: {
            assert(cx.graph && cx.node_map && e.node_idx >= 0);
            return (long long)cx.graph->out_degree((*cx.node_map)[e.node_idx]);
        }
        case Expr::Kind::length: {
            const Expr& v = e.kids[0];
            const HostList& val = var_value(v, cx);
            switch (v.vtype) {
                case VarType::list: return (long long)val.size();
                case VarType::string:
                case VarType::char_: return (long long)as_string(val[0]).size();
                default:
                    // atom: one list position if an integer, else character count
                    if (val.size() == 1 && !is_int(val[0]))
                        return (long long)as_string(val[0]).size();
                    return 1;
            }
        }
        default: throw ExecError("expression is not an integer");
    }
}

HostList eval_label(const std::vector<Expr>& items, const EvalContext& cx) {
    HostList out;
    for (const Expr& e : items) {
        if (e.kind == Expr::Kind::var && e.vtype == VarType::list) {
            const HostList& v = var_value(e, cx);
            out.insert(out.end(), v.begin(), v.end());
        } else {
            out.push_back(eval_atom(e, cx));
        }
    }
    return out;
}

namespace {

bool bind_var(const Expr& e, HostList value, Assignment& alpha, std::vector<int>& trail) {
    Binding& b = alpha[e.var_idx];
    if (b.bound) return b.value == value;
    if (!value_fits_type(value, e.vtype)) return false;
    b.bound = true;
    b.value = std::move(value);
    trail.push_back(e.var_idx);
    return true;
}

// String positions: fixed-width parts (literals, char variables) around at
// most one string variable, which absorbs the middle.
bool unify_string(const std::vector<Expr>& parts, const std::string& s, Assignment& alpha,
                  std::vector<int>& trail) {
    int sv = -1;
    size_t fixed = 0;
    for (size_t i = 0; i < parts.size(); ++i) {
        const Expr& p = parts[i];
        if (p.kind == Expr::Kind::var && p.vtype == VarType::string) {
            assert(sv < 0);
            sv = (int)i;
        } else if (p.kind == Expr::Kind::var) {
            fixed += 1;  // char variable
        } else {
            assert(p.kind == Expr::Kind::str_lit);
            fixed += p.sval.size();
        }
    }
    if (sv < 0 && s.size() != fixed) return false;
    if (sv >= 0 && s.size() < fixed) return false;

    auto match_part = [&](const Expr& p, size_t at) -> bool {
        if (p.kind == Expr::Kind::var)
            return bind_var(p, HostList{HostAtom(s.substr(at, 1))}, alpha, trail);
        return s.compare(at, p.sval.size(), p.sval) == 0;
    };
    auto width = [](const Expr& p) {
        return p.kind == Expr::Kind::var ? (size_t)1 : p.sval.size();
    };

    size_t pos = 0;
    for (int i = 0; i < (sv < 0 ? (int)parts.size() : sv); ++i) {
        if (!match_part(parts[i], pos)) return false;
        pos += width(parts[i]);
    }
    if (sv < 0) return true;

    size_t back = s.size();
    for (int i = (int)parts.size() - 1; i > sv; --i) {
        back -= width(parts[i]);
        if (!match_part(parts[i], back)) return false;
    }
    return bind_var(parts[sv], HostList{HostAtom(s.substr(pos, back - pos))}, alpha, trail);
}

bool unify_position(const Expr& e, const HostAtom& a, Assignment& alpha, std::vector<int>& trail) {
    switch (e.kind) {
        case Expr::Kind::int_lit: return is_int(a) && as_int(a) == e.ival;
        case Expr::Kind::str_lit: return !is_int(a) && as_string(a) == e.sval;
        case Expr::Kind::var: return bind_var(e, HostList{a}, alpha, trail);
        case Expr::Kind::str_cat:
            return !is_int(a) && unify_string(e.kids, as_string(a), alpha, trail);
        default: return false;  // non-simple positions never reach unification
    }
}

}  // namespace

bool unify_label(const std::vector<Expr>& items, const HostList& host, Assignment& alpha,
                 std::vector<int>& trail) {
    int lv = -1;
    for (size_t i = 0; i < items.size(); ++i) {
        if (items[i].kind == Expr::Kind::var && items[i].vtype == VarType::list) {
            lv = (int)i;
            break;
        }
    }
    if (lv < 0) {
        if (host.size() != items.size()) return false;
        for (size_t i = 0; i < items.size(); ++i)
            if (!unify_position(items[i], host[i], alpha, trail)) return false;
        return true;
    }
    size_t before = (size_t)lv, after = items.size() - before - 1;
    if (host.size() < before + after) return false;
    for (size_t i = 0; i < before; ++i)
        if (!unify_position(items[i], host[i], alpha, trail)) return false;
    for (size_t j = 0; j < after; ++j)
        if (!unify_position(items[lv + 1 + j], host[host.size() - after + j], alpha, trail))
            return false;
    HostList mid(host.begin() + before, host.end() - after);
    return bind_var(items[lv], std::move(mid), alpha, trail);
}

namespace {

bool expr_is_simple(const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::int_lit:
        case Expr::Kind::str_lit:
        case Expr::Kind::var: return true;
        case Expr::Kind::str_cat: {
            int svars = 0;
            for (const Expr& k : e.kids) {
                if (!expr_is_simple(k)) return false;
                if (k.kind == Expr::Kind::var && k.vtype == VarType::string) ++svars;
            }
            return svars <= 1;
        }
        default: return false;  // arithmetic, degree and length operators
    }
}

}  // namespace

bool label_is_simple(const std::vector<Expr>& items) {
    int list_vars = 0;
    for (const Expr& e : items) {
        if (!expr_is_simple(e)) return false;
        if (e.kind == Expr::Kind::var && e.vtype == VarType::list) ++list_vars;
    }
    return list_vars <= 1;
}

bool eval_cond(const Cond& c, const EvalContext& cx) {
    switch (c.kind) {
        case Cond::Kind::not_: return !eval_cond(c.kids[0], cx);
        case Cond::Kind::and_:
            for (const Cond& k : c.kids)
                if (!eval_cond(k, cx)) return false;
            return true;
        case Cond::Kind::or_:
            for (const Cond& k : c.kids)
                if (eval_cond(k, cx)) return true;
            return false;
        case Cond::Kind::eq: return eval_label(c.a, cx) == eval_label(c.b, cx);
        case Cond::Kind::ne: return eval_label(c.a, cx) != eval_label(c.b, cx);
        case Cond::Kind::lt: return eval_int(c.a[0], cx) < eval_int(c.b[0], cx);
        case Cond::Kind::le: return eval_int(c.a[0], cx) <= eval_int(c.b[0], cx);
        case Cond::Kind::gt: return eval_int(c.a[0], cx) > eval_int(c.b[0], cx);
        case Cond::Kind::ge: return eval_int(c.a[0], cx) >= eval_int(c.b[0], cx);
        case Cond::Kind::is_int:
        case Cond::Kind::is_char:
        case Cond::Kind::is_string:
        case Cond::Kind::is_atom: {
            const Binding& b = (*cx.alpha)[c.var_idx];
            if (!b.bound) throw ExecError("unbound variable " + c.var_name + " in condition");
            VarType t = c.kind == Cond::Kind::is_int      ? VarType::int_
                        : c.kind == Cond::Kind::is_char   ? VarType::char_
                        : c.kind == Cond::Kind::is_string ? VarType::string
                                                          : VarType::atom;
            return value_fits_type(b.value, t);
        }
        case Cond::Kind::edge: {
            assert(cx.graph && cx.node_map);
            NodeId src = (*cx.node_map)[c.n1_idx];
            NodeId tgt = (*cx.node_map)[c.n2_idx];
            std::optional<HostList> want;
            if (c.edge_label) want = eval_label(*c.edge_label, cx);
            // Pattern nodes are matched injectively, so a loop row is only
            // relevant when both references name the same node.
            Dir dir = c.n1_idx == c.n2_idx ? Dir::loop : Dir::out;
            const HostGraph& g = *cx.graph;
            for (Mark row : {Mark::none, Mark::dashed, Mark::red, Mark::green, Mark::blue}) {
                for (EdgeId e = g.first_edge(src, row, dir); e; e = g.next_edge(e, dir)) {
                    if (dir == Dir::out && g.target(e) != tgt) continue;
                    if (want && g.label(e) != *want) continue;
                    return true;
                }
            }
            return false;
        }
    }
    return false;
}

}  // namespace rewrite
