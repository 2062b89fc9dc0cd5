#include "rewrite/program.hpp"

namespace rewrite {

int Program::rule_index(const std::string& name) const {
    for (size_t i = 0; i < rules.size(); ++i)
        if (rules[i].name == name) return (int)i;
    return -1;
}

int Program::proc_index(const std::string& name) const {
    for (size_t i = 0; i < procs.size(); ++i)
        if (procs[i].name == name) return (int)i;
    return -1;
}

namespace {

void resolve_cmd(Program& p, Command& c) {
    switch (c.kind) {
        case Command::Kind::rule_set:
            c.rule_ids.clear();
            for (const std::string& n : c.rule_names) {
                int ri = p.rule_index(n);
                if (ri < 0) throw ConstraintError(n + " is not a declared rule");
                c.rule_ids.push_back(ri);
            }
            return;
        case Command::Kind::call: {
            int ri = p.rule_index(c.callee);
            if (ri >= 0) {  // a bare identifier names a rule before a procedure
                c.kind = Command::Kind::rule_set;
                c.rule_names = {c.callee};
                c.rule_ids = {ri};
                return;
            }
            c.callee_id = p.proc_index(c.callee);
            if (c.callee_id < 0) throw ConstraintError(c.callee + " is not declared");
            return;
        }
        default:
            for (auto& k : c.kids)
                if (k) resolve_cmd(p, *k);
            return;
    }
}

void collect_calls(const Command& c, std::vector<int>& out) {
    if (c.kind == Command::Kind::call) out.push_back(c.callee_id);
    for (const auto& k : c.kids)
        if (k) collect_calls(*k, out);
}

void check_acyclic(const Program& p, int pi, std::vector<int>& state) {
    if (state[pi] == 2) return;
    if (state[pi] == 1)
        throw ConstraintError("procedure " + p.procs[pi].name + " is recursive");
    state[pi] = 1;
    std::vector<int> callees;
    collect_calls(*p.procs[pi].body, callees);
    for (int q : callees) check_acyclic(p, q, state);
    state[pi] = 2;
}

// Whether executing c can hand a break to its enclosing context. Recurses
// into every child even when the answer is already known, so that break
// inside an if/try condition is rejected wherever it hides.
bool escaping_break(const Program& p, const Command& c, std::vector<int>& proc_memo) {
    switch (c.kind) {
        case Command::Kind::break_: return true;
        case Command::Kind::loop:
            (void)escaping_break(p, *c.kids[0], proc_memo);
            return false;
        case Command::Kind::seq:
        case Command::Kind::or_: {
            bool esc = false;
            for (const auto& k : c.kids)
                if (k && escaping_break(p, *k, proc_memo)) esc = true;
            return esc;
        }
        case Command::Kind::if_:
        case Command::Kind::try_: {
            if (escaping_break(p, *c.kids[0], proc_memo))
                throw ConstraintError("break may not occur in an if/try condition");
            bool esc = false;
            for (size_t i = 1; i < c.kids.size(); ++i)
                if (c.kids[i] && escaping_break(p, *c.kids[i], proc_memo)) esc = true;
            return esc;
        }
        case Command::Kind::call: {
            int pi = c.callee_id;
            if (proc_memo[pi] < 0)
                proc_memo[pi] = escaping_break(p, *p.procs[pi].body, proc_memo) ? 1 : 0;
            return proc_memo[pi] == 1;
        }
        default: return false;
    }
}

}  // namespace

void link_program(Program& p) {
    for (size_t i = 0; i < p.rules.size(); ++i)
        for (size_t j = i + 1; j < p.rules.size(); ++j)
            if (p.rules[i].name == p.rules[j].name)
                throw ConstraintError("duplicate rule " + p.rules[i].name);
    for (size_t i = 0; i < p.procs.size(); ++i)
        for (size_t j = i + 1; j < p.procs.size(); ++j)
            if (p.procs[i].name == p.procs[j].name)
                throw ConstraintError("duplicate procedure " + p.procs[i].name);
    for (const Rule& r : p.rules)
        if (p.proc_index(r.name) >= 0)
            throw ConstraintError(r.name + " is declared as both a rule and a procedure");

    p.main_index = p.proc_index("Main");
    if (p.main_index < 0) throw ConstraintError("program has no Main");

    for (Rule& r : p.rules)
        if (!r.compiled) compile_rule(r);
    for (Procedure& pr : p.procs) resolve_cmd(p, *pr.body);

    std::vector<int> state(p.procs.size(), 0);
    for (size_t i = 0; i < p.procs.size(); ++i) check_acyclic(p, (int)i, state);

    std::vector<int> memo(p.procs.size(), -1);
    for (size_t i = 0; i < p.procs.size(); ++i) {
        if (memo[i] >= 0) continue;
        try {
            memo[i] = escaping_break(p, *p.procs[i].body, memo) ? 1 : 0;
        } catch (const ConstraintError& e) {
            throw ConstraintError("procedure " + p.procs[i].name + ": " + e.what());
        }
    }
    if (memo[p.main_index] == 1)
        throw ConstraintError("procedure Main: break outside any loop");
}

}  // namespace rewrite
