#include "rewrite/parser.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <unordered_map>
#include <unordered_set>

namespace rewrite {

namespace {

struct Token {
    enum class Kind : std::uint8_t { ident, int_lit, str_lit, sym, eof };
    Kind kind;
    std::string text;
    long long ival = 0;
    int line = 1, col = 1;
};

const std::unordered_set<std::string> kKeywords{
    "if",   "then",  "else", "try",  "or",   "skip",   "fail",   "break",
    "where", "not",  "and",  "edge", "empty", "int",   "char",   "string",
    "atom", "list",  "indeg", "outdeg", "length"};

std::vector<Token> lex(const std::string& s) {
    std::vector<Token> out;
    int line = 1, col = 1;
    size_t i = 0, n = s.size();
    while (i < n) {
        char c = s[i];
        if (c == '\n') {
            ++line;
            col = 1;
            ++i;
            continue;
        }
        if (c == ' ' || c == '\t' || c == '\r') {
            ++col;
            ++i;
            continue;
        }
        if (c == '/' && i + 1 < n && s[i + 1] == '/') {
            while (i < n && s[i] != '\n') ++i;
            continue;
        }
        int tl = line, tc = col;
        if (std::isalpha((unsigned char)c) || c == '_') {
            size_t j = i;
            while (j < n && (std::isalnum((unsigned char)s[j]) || s[j] == '_')) ++j;
            out.push_back({Token::Kind::ident, s.substr(i, j - i), 0, tl, tc});
            col += (int)(j - i);
            i = j;
            continue;
        }
        if (std::isdigit((unsigned char)c)) {
            size_t j = i;
            while (j < n && std::isdigit((unsigned char)s[j])) ++j;
            std::string digits = s.substr(i, j - i);
            long long v = 0;
            try {
                v = std::stoll(digits);
            } catch (const std::out_of_range&) {
                throw ParseError(tl, tc, "integer literal out of range");
            }
            out.push_back({Token::Kind::int_lit, digits, v, tl, tc});
            col += (int)(j - i);
            i = j;
            continue;
        }
        if (c == '"') {
            size_t j = i + 1;
            std::string val;
            while (j < n && s[j] != '"') {
                unsigned char ch = (unsigned char)s[j];
                if (ch == '\n') throw ParseError(tl, tc, "unterminated string literal");
                if (!std::isprint(ch))
                    throw ParseError(tl, tc, "string literals hold printable characters only");
                val += (char)ch;
                ++j;
            }
            if (j >= n) throw ParseError(tl, tc, "unterminated string literal");
            out.push_back({Token::Kind::str_lit, val, 0, tl, tc});
            col += (int)(j + 1 - i);
            i = j + 1;
            continue;
        }
        auto two = [&](const char* t) {
            return i + 1 < n && s[i] == t[0] && s[i + 1] == t[1];
        };
        if (two("=>") || two("<=") || two(">=") || two("!=")) {
            out.push_back({Token::Kind::sym, s.substr(i, 2), 0, tl, tc});
            i += 2;
            col += 2;
            continue;
        }
        static const std::string singles = "()[]{},;:#|!=<>+-*/.";
        if (singles.find(c) != std::string::npos) {
            out.push_back({Token::Kind::sym, std::string(1, c), 0, tl, tc});
            ++i;
            ++col;
            continue;
        }
        std::string shown = std::isprint((unsigned char)c)
                                ? "'" + std::string(1, c) + "'"
                                : "code " + std::to_string((unsigned char)c);
        throw ParseError(tl, tc, "unexpected character " + shown);
    }
    out.push_back({Token::Kind::eof, "", 0, line, col});
    return out;
}

struct Tokens {
    std::vector<Token> v;
    size_t pos = 0;

    const Token& peek(size_t k = 0) const {
        size_t i = pos + k;
        return i < v.size() ? v[i] : v.back();
    }
    const Token& next() {
        const Token& t = peek();
        if (t.kind != Token::Kind::eof) ++pos;
        return t;
    }
    bool at_sym(const char* s) const {
        return peek().kind == Token::Kind::sym && peek().text == s;
    }
    bool at_ident(const char* s) const {
        return peek().kind == Token::Kind::ident && peek().text == s;
    }
    [[noreturn]] void err(const std::string& msg) const {
        const Token& t = peek();
        throw ParseError(t.line, t.col, msg);
    }
    void expect_sym(const char* s, const std::string& what) {
        if (!at_sym(s)) err("expected '" + std::string(s) + "' " + what);
        ++pos;
    }
    std::string expect_ident(const std::string& what) {
        if (peek().kind != Token::Kind::ident) err("expected " + what);
        return next().text;
    }
    // node and edge ids may be plain numbers or identifiers
    std::string expect_id(const std::string& what) {
        if (peek().kind != Token::Kind::ident && peek().kind != Token::Kind::int_lit)
            err("expected " + what);
        return next().text;
    }
};

Mark mark_from_token(Tokens& ts, bool for_node, bool in_rule) {
    if (ts.peek().kind != Token::Kind::ident) ts.err("expected a mark after '#'");
    const Token& t = ts.peek();
    Mark m;
    if (t.text == "red")
        m = Mark::red;
    else if (t.text == "green")
        m = Mark::green;
    else if (t.text == "blue")
        m = Mark::blue;
    else if (t.text == "grey")
        m = Mark::grey;
    else if (t.text == "dashed")
        m = Mark::dashed;
    else if (t.text == "any" && in_rule)
        m = Mark::any;
    else
        ts.err("unknown mark '" + t.text + "'");
    bool legal = m == Mark::any ? true : (for_node ? node_legal(m) : edge_legal(m));
    if (!legal)
        ts.err("mark '" + t.text + "' is not allowed on " + (for_node ? "nodes" : "edges"));
    ts.next();
    return m;
}

// ---- host graphs ------------------------------------------------------------

HostList parse_host_list(Tokens& ts) {
    if (ts.at_ident("empty")) {
        ts.next();
        return {};
    }
    HostList out;
    for (;;) {
        bool neg = false;
        if (ts.at_sym("-")) {
            neg = true;
            ts.next();
        }
        if (ts.peek().kind == Token::Kind::int_lit) {
            long long v = ts.next().ival;
            out.emplace_back(neg ? -v : v);
        } else if (!neg && ts.peek().kind == Token::Kind::str_lit) {
            out.emplace_back(ts.next().text);
        } else {
            ts.err("expected an integer or string atom");
        }
        if (!ts.at_sym(":")) break;
        ts.next();
    }
    return out;
}

}  // namespace

HostGraph parse_host_graph(const std::string& text, bool legacy) {
    Tokens ts{lex(text)};
    HostGraph g(legacy);
    ts.expect_sym("[", "to open the graph");
    while (!ts.at_sym("|")) {
        ts.expect_sym("(", "to open a node");
        std::string id = ts.expect_id("a node id");
        bool rooted = false;
        if (ts.at_sym("(") && ts.peek(1).kind == Token::Kind::ident && ts.peek(1).text == "R" &&
            ts.peek(2).kind == Token::Kind::sym && ts.peek(2).text == ")") {
            rooted = true;
            ts.pos += 3;
        }
        ts.expect_sym(",", "after the node id");
        HostList label = parse_host_list(ts);
        Mark m = Mark::none;
        if (ts.at_sym("#")) {
            ts.next();
            m = mark_from_token(ts, true, false);
        }
        if (g.node_by_name(id)) ts.err("duplicate node id '" + id + "'");
        ts.expect_sym(")", "to close the node");
        g.add_node(std::move(label), m, rooted, id);
    }
    ts.next();  // '|'
    while (!ts.at_sym("]")) {
        ts.expect_sym("(", "to open an edge");
        std::string id = ts.expect_id("an edge id");
        ts.expect_sym(",", "after the edge id");
        std::string sid = ts.expect_id("a source node id");
        ts.expect_sym(",", "after the source id");
        std::string tid = ts.expect_id("a target node id");
        ts.expect_sym(",", "after the target id");
        HostList label = parse_host_list(ts);
        Mark m = Mark::none;
        if (ts.at_sym("#")) {
            ts.next();
            m = mark_from_token(ts, false, false);
        }
        NodeId src = g.node_by_name(sid);
        if (!src) ts.err("edge '" + id + "' endpoint '" + sid + "' is not a node");
        NodeId tgt = g.node_by_name(tid);
        if (!tgt) ts.err("edge '" + id + "' endpoint '" + tid + "' is not a node");
        if (g.edge_by_name(id)) ts.err("duplicate edge id '" + id + "'");
        ts.expect_sym(")", "to close the edge");
        g.add_edge(src, tgt, std::move(label), m, id);
    }
    ts.next();  // ']'
    if (ts.peek().kind != Token::Kind::eof) ts.err("text continues after the closing ']'");
    return g;
}

namespace {

// numeric ids sort in value order ahead of symbolic ids
bool natural_less(const std::string& a, const std::string& b) {
    auto digits = [](const std::string& s) {
        return !s.empty() &&
               std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
    };
    bool da = digits(a), db = digits(b);
    if (da != db) return da;
    if (da && a.size() != b.size()) return a.size() < b.size();
    return a < b;
}

}  // namespace

std::string print_host_graph(const HostGraph& g) {
    std::vector<NodeId> nodes = g.all_nodes();
    std::sort(nodes.begin(), nodes.end(),
              [&](NodeId a, NodeId b) { return natural_less(g.name(a), g.name(b)); });
    std::vector<EdgeId> edges = g.all_edges();
    std::sort(edges.begin(), edges.end(),
              [&](EdgeId a, EdgeId b) { return natural_less(g.name(a), g.name(b)); });

    std::string out = "[";
    for (NodeId id : nodes) {
        out += " (" + g.name(id);
        if (g.rooted(id)) out += "(R)";
        out += ", " + print_list(g.label(id));
        if (g.mark(id) != Mark::none) out += std::string(" # ") + mark_name(g.mark(id));
        out += ")";
    }
    out += " |";
    for (EdgeId id : edges) {
        out += " (" + g.name(id) + ", " + g.name(g.source(id)) + ", " + g.name(g.target(id)) +
               ", " + print_list(g.label(id));
        if (g.mark(id) != Mark::none) out += std::string(" # ") + mark_name(g.mark(id));
        out += ")";
    }
    out += " ]";
    return out;
}

// ---- rule expressions and conditions ----------------------------------------

namespace {

Expr make_expr(Expr::Kind k) {
    Expr e;
    e.kind = k;
    return e;
}

Expr parse_rexp(Tokens& ts);

Expr parse_prim(Tokens& ts) {
    const Token& t = ts.peek();
    if (t.kind == Token::Kind::int_lit) {
        Expr e = make_expr(Expr::Kind::int_lit);
        e.ival = ts.next().ival;
        return e;
    }
    if (t.kind == Token::Kind::str_lit) {
        Expr e = make_expr(Expr::Kind::str_lit);
        e.sval = ts.next().text;
        return e;
    }
    if (ts.at_sym("(")) {
        ts.next();
        Expr e = parse_rexp(ts);
        ts.expect_sym(")", "to close the expression");
        return e;
    }
    if (t.kind == Token::Kind::ident) {
        if (t.text == "indeg" || t.text == "outdeg") {
            Expr e = make_expr(t.text == "indeg" ? Expr::Kind::indeg : Expr::Kind::outdeg);
            ts.next();
            ts.expect_sym("(", "after the degree operator");
            e.sval = ts.expect_id("a node id");
            ts.expect_sym(")", "to close the degree operator");
            return e;
        }
        if (t.text == "length") {
            Expr e = make_expr(Expr::Kind::length);
            ts.next();
            ts.expect_sym("(", "after length");
            Expr v = make_expr(Expr::Kind::var);
            v.sval = ts.expect_ident("a variable name");
            e.kids.push_back(std::move(v));
            ts.expect_sym(")", "to close length");
            return e;
        }
        if (kKeywords.count(t.text)) ts.err("'" + t.text + "' cannot appear in an expression");
        Expr e = make_expr(Expr::Kind::var);
        e.sval = ts.next().text;
        return e;
    }
    ts.err("expected an expression");
}

Expr parse_cat(Tokens& ts) {
    Expr e = parse_prim(ts);
    while (ts.at_sym(".")) {
        ts.next();
        Expr r = make_expr(Expr::Kind::str_cat);
        r.kids.push_back(std::move(e));
        r.kids.push_back(parse_prim(ts));
        e = std::move(r);
    }
    return e;
}

Expr parse_unary(Tokens& ts) {
    if (ts.at_sym("-")) {
        ts.next();
        Expr inner = parse_unary(ts);
        if (inner.kind == Expr::Kind::int_lit) {  // negative literals stay literals
            inner.ival = -inner.ival;
            return inner;
        }
        Expr e = make_expr(Expr::Kind::neg);
        e.kids.push_back(std::move(inner));
        return e;
    }
    return parse_cat(ts);
}

Expr parse_mul(Tokens& ts) {
    Expr e = parse_unary(ts);
    while (ts.at_sym("*") || ts.at_sym("/")) {
        Expr r = make_expr(ts.next().text == "*" ? Expr::Kind::mul : Expr::Kind::div_);
        r.kids.push_back(std::move(e));
        r.kids.push_back(parse_unary(ts));
        e = std::move(r);
    }
    return e;
}

Expr parse_rexp(Tokens& ts) {
    Expr e = parse_mul(ts);
    while (ts.at_sym("+") || ts.at_sym("-")) {
        Expr r = make_expr(ts.next().text == "+" ? Expr::Kind::add : Expr::Kind::sub);
        r.kids.push_back(std::move(e));
        r.kids.push_back(parse_mul(ts));
        e = std::move(r);
    }
    return e;
}

std::vector<Expr> parse_rlist(Tokens& ts) {
    if (ts.at_ident("empty")) {
        ts.next();
        return {};
    }
    std::vector<Expr> out;
    out.push_back(parse_rexp(ts));
    while (ts.at_sym(":")) {
        ts.next();
        out.push_back(parse_rexp(ts));
    }
    return out;
}

Cond parse_cond(Tokens& ts);

Cond make_cond(Cond::Kind k) {
    Cond c;
    c.kind = k;
    return c;
}

Cond parse_relation(Tokens& ts) {
    std::vector<Expr> a = parse_rlist(ts);
    Cond c;
    if (ts.at_sym("=")) {
        c = make_cond(Cond::Kind::eq);
    } else if (ts.at_sym("!=")) {
        c = make_cond(Cond::Kind::ne);
    } else if (ts.at_sym("<")) {
        c = make_cond(Cond::Kind::lt);
    } else if (ts.at_sym("<=")) {
        c = make_cond(Cond::Kind::le);
    } else if (ts.at_sym(">")) {
        c = make_cond(Cond::Kind::gt);
    } else if (ts.at_sym(">=")) {
        c = make_cond(Cond::Kind::ge);
    } else {
        ts.err("expected a comparison operator");
    }
    ts.next();
    c.a = std::move(a);
    c.b = parse_rlist(ts);
    if (c.kind != Cond::Kind::eq && c.kind != Cond::Kind::ne &&
        (c.a.size() != 1 || c.b.size() != 1))
        ts.err("ordered comparisons take integers, not lists");
    return c;
}

Cond parse_cnot(Tokens& ts) {
    if (ts.at_ident("not")) {
        ts.next();
        Cond c = make_cond(Cond::Kind::not_);
        c.kids.push_back(parse_cnot(ts));
        return c;
    }
    const Token& t = ts.peek();
    if (t.kind == Token::Kind::ident &&
        (t.text == "int" || t.text == "char" || t.text == "string" || t.text == "atom")) {
        Cond c = make_cond(t.text == "int"      ? Cond::Kind::is_int
                           : t.text == "char"   ? Cond::Kind::is_char
                           : t.text == "string" ? Cond::Kind::is_string
                                                : Cond::Kind::is_atom);
        ts.next();
        ts.expect_sym("(", "after the type test");
        c.var_name = ts.expect_ident("a variable name");
        ts.expect_sym(")", "to close the type test");
        return c;
    }
    if (ts.at_ident("edge")) {
        Cond c = make_cond(Cond::Kind::edge);
        ts.next();
        ts.expect_sym("(", "after edge");
        c.n1 = ts.expect_id("a node id");
        ts.expect_sym(",", "between edge endpoints");
        c.n2 = ts.expect_id("a node id");
        if (ts.at_sym(",")) {
            ts.next();
            c.edge_label = parse_rlist(ts);
        }
        ts.expect_sym(")", "to close edge");
        return c;
    }
    if (ts.at_sym("(")) {
        // '(' opens either a nested condition or a parenthesized expression;
        // try the condition reading and fall back on the relation
        size_t save = ts.pos;
        try {
            ts.next();
            Cond c = parse_cond(ts);
            ts.expect_sym(")", "to close the condition");
            return c;
        } catch (const ParseError&) {
            ts.pos = save;
        }
        return parse_relation(ts);
    }
    return parse_relation(ts);
}

Cond parse_cand(Tokens& ts) {
    Cond c = parse_cnot(ts);
    while (ts.at_ident("and")) {
        ts.next();
        Cond r = make_cond(Cond::Kind::and_);
        r.kids.push_back(std::move(c));
        r.kids.push_back(parse_cnot(ts));
        c = std::move(r);
    }
    return c;
}

Cond parse_cond(Tokens& ts) {
    Cond c = parse_cand(ts);
    while (ts.at_ident("or")) {
        ts.next();
        Cond r = make_cond(Cond::Kind::or_);
        r.kids.push_back(std::move(c));
        r.kids.push_back(parse_cand(ts));
        c = std::move(r);
    }
    return c;
}

// ---- rule declarations -------------------------------------------------------

VarType var_type_from(Tokens& ts) {
    std::string t = ts.expect_ident("a type name");
    if (t == "list") return VarType::list;
    if (t == "atom") return VarType::atom;
    if (t == "int") return VarType::int_;
    if (t == "string") return VarType::string;
    if (t == "char") return VarType::char_;
    ts.err("unknown type '" + t + "'");
}

RuleGraph parse_rule_graph(Tokens& ts) {
    RuleGraph g;
    std::unordered_map<std::string, int> node_of;
    ts.expect_sym("[", "to open the graph");
    while (!ts.at_sym("|")) {
        ts.expect_sym("(", "to open a node");
        RuleNode n;
        n.id = ts.expect_id("a node id");
        if (ts.at_sym("(") && ts.peek(1).kind == Token::Kind::ident && ts.peek(1).text == "R" &&
            ts.peek(2).kind == Token::Kind::sym && ts.peek(2).text == ")") {
            n.rooted = true;
            ts.pos += 3;
        }
        ts.expect_sym(",", "after the node id");
        n.label.items = parse_rlist(ts);
        if (ts.at_sym("#")) {
            ts.next();
            n.label.mark = mark_from_token(ts, true, true);
        }
        ts.expect_sym(")", "to close the node");
        if (node_of.count(n.id)) ts.err("duplicate node id '" + n.id + "'");
        node_of[n.id] = (int)g.nodes.size();
        g.nodes.push_back(std::move(n));
    }
    ts.next();  // '|'
    std::unordered_map<std::string, bool> edge_seen;
    while (!ts.at_sym("]")) {
        ts.expect_sym("(", "to open an edge");
        RuleEdge e;
        e.id = ts.expect_id("an edge id");
        if (ts.at_sym("(") && ts.peek(1).kind == Token::Kind::ident && ts.peek(1).text == "B" &&
            ts.peek(2).kind == Token::Kind::sym && ts.peek(2).text == ")") {
            e.bidirectional = true;
            ts.pos += 3;
        }
        ts.expect_sym(",", "after the edge id");
        std::string sid = ts.expect_id("a source node id");
        ts.expect_sym(",", "after the source id");
        std::string tid = ts.expect_id("a target node id");
        ts.expect_sym(",", "after the target id");
        e.label.items = parse_rlist(ts);
        if (ts.at_sym("#")) {
            ts.next();
            e.label.mark = mark_from_token(ts, false, true);
        }
        ts.expect_sym(")", "to close the edge");
        auto si = node_of.find(sid);
        if (si == node_of.end()) ts.err("edge endpoint '" + sid + "' is not a node");
        auto ti = node_of.find(tid);
        if (ti == node_of.end()) ts.err("edge endpoint '" + tid + "' is not a node");
        if (edge_seen.count(e.id)) ts.err("duplicate edge id '" + e.id + "'");
        edge_seen[e.id] = true;
        e.src = si->second;
        e.tgt = ti->second;
        g.edges.push_back(std::move(e));
    }
    ts.next();  // ']'
    return g;
}

Rule parse_rule_decl(Tokens& ts, std::string full_name) {
    Rule r;
    r.name = std::move(full_name);
    ts.expect_sym("(", "after the rule name");
    if (!ts.at_sym(")")) {
        for (;;) {
            std::vector<std::string> group;
            group.push_back(ts.expect_ident("a variable name"));
            while (ts.at_sym(",")) {
                ts.next();
                group.push_back(ts.expect_ident("a variable name"));
            }
            ts.expect_sym(":", "before the variable type");
            VarType vt = var_type_from(ts);
            for (auto& name : group) {
                if (kKeywords.count(name)) ts.err("'" + name + "' cannot name a variable");
                r.vars.push_back({std::move(name), vt});
            }
            if (!ts.at_sym(";")) break;
            ts.next();
        }
    }
    ts.expect_sym(")", "to close the variable list");
    r.lhs = parse_rule_graph(ts);
    ts.expect_sym("=>", "between the rule sides");
    r.rhs = parse_rule_graph(ts);
    if (ts.at_ident("where")) {
        ts.next();
        r.condition = parse_cond(ts);
        r.has_condition = true;
    }
    return r;
}

// ---- program declarations ----------------------------------------------------

struct Scope {
    std::unordered_map<std::string, std::string> names;  // source name -> full name
    const Scope* parent = nullptr;

    const std::string* lookup(const std::string& n) const {
        for (const Scope* s = this; s; s = s->parent) {
            auto it = s->names.find(n);
            if (it != s->names.end()) return &it->second;
        }
        return nullptr;
    }
};

struct DeclPos {
    std::string name;
    int line, col;
};

struct ProgParser {
    Tokens& ts;
    std::deque<Scope> scopes;
    std::vector<Rule> rules;
    std::vector<Procedure> procs;
    std::vector<const Scope*> proc_scope;  // parallel to procs
    std::vector<DeclPos> rule_pos, proc_pos;

    explicit ProgParser(Tokens& ts) : ts(ts) { scopes.emplace_back(); }

    std::unique_ptr<Command> parse_comseq();

    std::unique_ptr<Command> parse_primary() {
        auto c = std::make_unique<Command>();
        c->line = ts.peek().line;
        c->col = ts.peek().col;
        if (ts.at_sym("(")) {
            ts.next();
            auto inner = parse_comseq();
            ts.expect_sym(")", "to close the group");
            inner->line = c->line;
            inner->col = c->col;
            return inner;
        }
        if (ts.at_sym("{")) {
            ts.next();
            c->kind = Command::Kind::rule_set;
            if (!ts.at_sym("}")) {
                c->rule_names.push_back(ts.expect_ident("a rule name"));
                while (ts.at_sym(",")) {
                    ts.next();
                    c->rule_names.push_back(ts.expect_ident("a rule name"));
                }
            }
            ts.expect_sym("}", "to close the rule set");
            return c;
        }
        if (ts.at_ident("if") || ts.at_ident("try")) {
            bool is_if = ts.peek().text == "if";
            ts.next();
            c->kind = is_if ? Command::Kind::if_ : Command::Kind::try_;
            c->kids.push_back(parse_postfix());
            c->kids.push_back(nullptr);
            c->kids.push_back(nullptr);
            if (ts.at_ident("then")) {
                ts.next();
                c->kids[1] = parse_postfix();
            } else if (is_if) {
                ts.err("expected 'then' after the if condition");
            }
            if (ts.at_ident("else")) {
                ts.next();
                c->kids[2] = parse_postfix();
            }
            return c;
        }
        if (ts.at_ident("skip")) {
            ts.next();
            c->kind = Command::Kind::skip;
            return c;
        }
        if (ts.at_ident("fail")) {
            ts.next();
            c->kind = Command::Kind::fail;
            return c;
        }
        if (ts.at_ident("break")) {
            ts.next();
            c->kind = Command::Kind::break_;
            return c;
        }
        if (ts.peek().kind == Token::Kind::ident && !kKeywords.count(ts.peek().text)) {
            c->kind = Command::Kind::call;  // rule or procedure; resolved later
            c->callee = ts.next().text;
            return c;
        }
        ts.err("expected a command");
    }

    std::unique_ptr<Command> parse_postfix() {
        auto c = parse_primary();
        if (ts.at_sym("!")) {
            ts.next();
            auto l = std::make_unique<Command>();
            l->kind = Command::Kind::loop;
            l->line = c->line;
            l->col = c->col;
            l->kids.push_back(std::move(c));
            c = std::move(l);
        }
        return c;
    }

    std::unique_ptr<Command> parse_or() {
        auto c = parse_postfix();
        while (ts.at_ident("or")) {
            ts.next();
            auto o = std::make_unique<Command>();
            o->kind = Command::Kind::or_;
            o->line = c->line;
            o->col = c->col;
            o->kids.push_back(std::move(c));
            o->kids.push_back(parse_postfix());
            c = std::move(o);
        }
        return c;
    }

    void declare(Scope& sc, const std::string& name, const std::string& full) {
        if (kKeywords.count(name)) ts.err("'" + name + "' cannot name a declaration");
        if (sc.names.count(name)) ts.err("'" + name + "' is declared twice in this scope");
        sc.names[name] = full;
    }

    void parse_decl(Scope& sc, const std::string& prefix) {
        const Token& nt = ts.peek();
        if (nt.kind != Token::Kind::ident) ts.err("expected a declaration");
        std::string name = nt.text;
        int dl = nt.line, dc = nt.col;
        std::string full = prefix + name;
        if (ts.peek(1).kind == Token::Kind::sym && ts.peek(1).text == "(") {
            ts.next();
            declare(sc, name, full);
            rule_pos.push_back({full, dl, dc});
            rules.push_back(parse_rule_decl(ts, full));
            return;
        }
        if (ts.peek(1).kind == Token::Kind::sym && ts.peek(1).text == "=") {
            ts.next();
            ts.next();  // '='
            declare(sc, name, full);
            proc_pos.push_back({full, dl, dc});
            const Scope* body_scope = &sc;
            if (ts.at_sym("[")) {  // local declarations scoped to this body
                ts.next();
                scopes.emplace_back();
                Scope& local = scopes.back();
                local.parent = &sc;
                while (!ts.at_sym("]")) parse_decl(local, full + ".");
                ts.next();
                body_scope = &local;
            }
            Procedure pr;
            pr.name = full;
            pr.body = parse_comseq();
            procs.push_back(std::move(pr));
            proc_scope.push_back(body_scope);
            return;
        }
        ts.err("expected '(' or '=' after '" + name + "'");
    }

    void resolve(Command& c, const Scope& sc) {
        if (c.kind == Command::Kind::rule_set) {
            for (auto& n : c.rule_names) {
                const std::string* full = sc.lookup(n);
                if (!full) throw ParseError(c.line, c.col, "nothing named '" + n + "' is declared");
                n = *full;
            }
            return;
        }
        if (c.kind == Command::Kind::call) {
            const std::string* full = sc.lookup(c.callee);
            if (!full)
                throw ParseError(c.line, c.col, "nothing named '" + c.callee + "' is declared");
            c.callee = *full;
            return;
        }
        for (auto& k : c.kids)
            if (k) resolve(*k, sc);
    }

    Program finish() {
        for (size_t i = 0; i < procs.size(); ++i) resolve(*procs[i].body, *proc_scope[i]);
        Program p;
        p.rules = std::move(rules);
        p.procs = std::move(procs);
        for (size_t i = 0; i < p.rules.size(); ++i) {
            try {
                compile_rule(p.rules[i]);
            } catch (const ParseError&) {
                throw;
            } catch (const ConstraintError& e) {
                throw ParseError(rule_pos[i].line, rule_pos[i].col, e.what());
            }
        }
        try {
            link_program(p);
        } catch (const ParseError&) {
            throw;
        } catch (const ConstraintError& e) {
            relocate(e.what());
        }
        return p;
    }

    // attach the position of the longest declared name the message mentions
    [[noreturn]] void relocate(const std::string& msg) {
        const DeclPos* best = nullptr;
        auto consider = [&](const DeclPos& d) {
            if (msg.find(d.name) == std::string::npos) return;
            if (!best || d.name.size() > best->name.size()) best = &d;
        };
        for (const auto& d : rule_pos) consider(d);
        for (const auto& d : proc_pos) consider(d);
        if (!best)
            for (const auto& d : proc_pos)
                if (d.name == "Main") best = &d;
        if (best) throw ParseError(best->line, best->col, msg);
        throw ParseError(1, 1, msg);
    }
};

std::unique_ptr<Command> ProgParser::parse_comseq() {
    auto first = parse_or();
    if (!ts.at_sym(";")) return first;
    auto s = std::make_unique<Command>();
    s->kind = Command::Kind::seq;
    s->line = first->line;
    s->col = first->col;
    s->kids.push_back(std::move(first));
    while (ts.at_sym(";")) {
        ts.next();
        s->kids.push_back(parse_or());
    }
    return s;
}

}  // namespace

Program parse_program(const std::string& text) {
    Tokens ts{lex(text)};
    ProgParser pp(ts);
    while (ts.peek().kind != Token::Kind::eof) pp.parse_decl(pp.scopes.front(), "");
    if (pp.procs.empty() && pp.rules.empty()) ts.err("the program declares nothing");
    return pp.finish();
}

// ---- printers ----------------------------------------------------------------

namespace {

// precedence floors: 0 list item, 1 additive, 2 multiplicative, 3 unary, 4 concat
void print_expr(std::string& out, const Expr& e, int floor);

void print_child(std::string& out, const Expr& e, int level, int floor) {
    bool parens = level < floor;
    if (parens) out += "(";
    print_expr(out, e, parens ? 0 : floor);
    if (parens) out += ")";
}

void print_expr(std::string& out, const Expr& e, int floor) {
    switch (e.kind) {
        case Expr::Kind::int_lit:
            if (e.ival < 0 && floor > 1) {
                out += "(" + std::to_string(e.ival) + ")";
            } else {
                out += std::to_string(e.ival);
            }
            return;
        case Expr::Kind::str_lit:
            out += "\"" + e.sval + "\"";
            return;
        case Expr::Kind::var:
            out += e.sval;
            return;
        case Expr::Kind::indeg:
        case Expr::Kind::outdeg:
            out += e.kind == Expr::Kind::indeg ? "indeg(" : "outdeg(";
            out += e.sval + ")";
            return;
        case Expr::Kind::length:
            out += "length(" + e.kids[0].sval + ")";
            return;
        case Expr::Kind::add:
        case Expr::Kind::sub: {
            bool parens = floor > 1;
            if (parens) out += "(";
            print_expr(out, e.kids[0], 1);
            out += e.kind == Expr::Kind::add ? " + " : " - ";
            print_child(out, e.kids[1], 2, 2);  // keep a - (b - c) unambiguous
            if (parens) out += ")";
            return;
        }
        case Expr::Kind::mul:
        case Expr::Kind::div_: {
            bool parens = floor > 2;
            if (parens) out += "(";
            print_expr(out, e.kids[0], 2);
            out += e.kind == Expr::Kind::mul ? " * " : " / ";
            print_child(out, e.kids[1], 3, 3);
            if (parens) out += ")";
            return;
        }
        case Expr::Kind::neg:
            out += "-";
            print_child(out, e.kids[0], e.kids[0].kind == Expr::Kind::neg ? 0 : 3, 3);
            return;
        case Expr::Kind::str_cat:
            print_expr(out, e.kids[0], 4);
            out += ".";
            print_child(out, e.kids[1], 4, 5);
            return;
    }
}

std::string print_rlist(const std::vector<Expr>& items) {
    if (items.empty()) return "empty";
    std::string out;
    for (size_t i = 0; i < items.size(); ++i) {
        if (i) out += ":";
        print_expr(out, items[i], 1);
    }
    return out;
}

// precedence floors: 0 or, 1 and, 2 not/prim
void print_cond(std::string& out, const Cond& c, int floor) {
    switch (c.kind) {
        case Cond::Kind::or_:
        case Cond::Kind::and_: {
            int level = c.kind == Cond::Kind::or_ ? 0 : 1;
            bool parens = floor > level;
            if (parens) out += "(";
            print_cond(out, c.kids[0], level);
            out += c.kind == Cond::Kind::or_ ? " or " : " and ";
            print_cond(out, c.kids[1], level + 1);
            if (parens) out += ")";
            return;
        }
        case Cond::Kind::not_:
            out += "not ";
            print_cond(out, c.kids[0], 2);
            return;
        case Cond::Kind::is_int:
        case Cond::Kind::is_char:
        case Cond::Kind::is_string:
        case Cond::Kind::is_atom: {
            const char* n = c.kind == Cond::Kind::is_int      ? "int"
                            : c.kind == Cond::Kind::is_char   ? "char"
                            : c.kind == Cond::Kind::is_string ? "string"
                                                              : "atom";
            out += std::string(n) + "(" + c.var_name + ")";
            return;
        }
        case Cond::Kind::edge:
            out += "edge(" + c.n1 + ", " + c.n2;
            if (c.edge_label) out += ", " + print_rlist(*c.edge_label);
            out += ")";
            return;
        default: {
            const char* op = c.kind == Cond::Kind::eq   ? " = "
                             : c.kind == Cond::Kind::ne ? " != "
                             : c.kind == Cond::Kind::lt ? " < "
                             : c.kind == Cond::Kind::le ? " <= "
                             : c.kind == Cond::Kind::gt ? " > "
                                                        : " >= ";
            out += print_rlist(c.a) + op + print_rlist(c.b);
            return;
        }
    }
}

std::string print_rule_graph(const RuleGraph& g) {
    std::string out = "[";
    for (const RuleNode& n : g.nodes) {
        out += " (" + n.id;
        if (n.rooted) out += "(R)";
        out += ", " + print_rlist(n.label.items);
        if (n.label.mark != Mark::none) out += std::string(" # ") + mark_name(n.label.mark);
        out += ")";
    }
    out += " |";
    for (const RuleEdge& e : g.edges) {
        out += " (" + e.id;
        if (e.bidirectional) out += "(B)";
        out += ", " + g.nodes[e.src].id + ", " + g.nodes[e.tgt].id + ", " +
               print_rlist(e.label.items);
        if (e.label.mark != Mark::none) out += std::string(" # ") + mark_name(e.label.mark);
        out += ")";
    }
    out += " ]";
    return out;
}

bool atomic_cmd(const Command& c) {
    switch (c.kind) {
        case Command::Kind::rule_set:
        case Command::Kind::call:
        case Command::Kind::skip:
        case Command::Kind::fail:
        case Command::Kind::break_: return true;
        default: return false;
    }
}

std::string print_cmd(const Command& c, bool parenthesize_composite);

std::string print_operand(const Command& c) { return print_cmd(c, true); }

std::string print_cmd(const Command& c, bool parenthesize_composite) {
    switch (c.kind) {
        case Command::Kind::rule_set:
            if (c.rule_names.size() == 1) return c.rule_names[0];
            else {
                std::string out = "{";
                for (size_t i = 0; i < c.rule_names.size(); ++i) {
                    if (i) out += ", ";
                    out += c.rule_names[i];
                }
                return out + "}";
            }
        case Command::Kind::call: return c.callee;
        case Command::Kind::skip: return "skip";
        case Command::Kind::fail: return "fail";
        case Command::Kind::break_: return "break";
        case Command::Kind::loop: {
            const Command& body = *c.kids[0];
            std::string b = print_cmd(body, false);
            if (!atomic_cmd(body)) b = "(" + b + ")";
            return b + "!";
        }
        case Command::Kind::seq: {
            std::string out;
            for (size_t i = 0; i < c.kids.size(); ++i) {
                if (i) out += "; ";
                out += print_cmd(*c.kids[i], true);
            }
            if (parenthesize_composite) out = "(" + out + ")";
            return out;
        }
        case Command::Kind::or_: {
            std::string out = print_operand(*c.kids[0]) + " or " + print_operand(*c.kids[1]);
            if (parenthesize_composite) out = "(" + out + ")";
            return out;
        }
        case Command::Kind::if_:
        case Command::Kind::try_: {
            std::string out = c.kind == Command::Kind::if_ ? "if " : "try ";
            out += print_operand(*c.kids[0]);
            if (c.kids[1]) out += " then " + print_operand(*c.kids[1]);
            if (c.kids[2]) out += " else " + print_operand(*c.kids[2]);
            if (parenthesize_composite) out = "(" + out + ")";
            return out;
        }
    }
    return "";
}

std::string print_rule(const Rule& r) {
    std::string out = r.name + "(";
    for (size_t i = 0; i < r.vars.size();) {
        size_t j = i;
        while (j < r.vars.size() && r.vars[j].type == r.vars[i].type) ++j;
        if (i) out += "; ";
        for (size_t k = i; k < j; ++k) {
            if (k > i) out += ", ";
            out += r.vars[k].name;
        }
        out += std::string(": ") + var_type_name(r.vars[i].type);
        i = j;
    }
    out += ")\n  " + print_rule_graph(r.lhs) + " => " + print_rule_graph(r.rhs);
    if (r.has_condition) {
        std::string cond;
        print_cond(cond, r.condition, 0);
        out += "\n  where " + cond;
    }
    return out + "\n";
}

}  // namespace

std::string print_program(const Program& p) {
    std::string out;
    for (const Procedure& pr : p.procs)
        out += pr.name + " = " + print_cmd(*pr.body, false) + "\n";
    for (const Rule& r : p.rules) out += "\n" + print_rule(r);
    return out;
}

}  // namespace rewrite
