#include "rewrite/interpreter.hpp"

#include <cassert>
#include <chrono>
#include <map>
#include <sstream>

namespace rewrite {

namespace {

using Clock = std::chrono::steady_clock;

struct Timeout {
    std::string reason;
};

enum class Flow { ok, fail, brk };

struct Exec {
    const Program& p;
    HostGraph& g;
    const ExecLimits& lim;
    RunStats* stats;
    const std::vector<Monitor>* monitors;
    Clock::time_point t0 = Clock::now();
    std::uint64_t steps = 0;

    void tick() {
        if (++steps > lim.step_limit)
            throw Timeout{"step limit of " + std::to_string(lim.step_limit) + " exceeded"};
        if ((steps & 0xFFF) == 0) {
            double el = std::chrono::duration<double>(Clock::now() - t0).count();
            if (el > lim.wall_limit)
                throw Timeout{"wall limit of " + std::to_string(lim.wall_limit) + "s exceeded"};
        }
    }

    void note_rollback(std::uint64_t RunStats::* reason) {
        if (!stats) return;
        ++stats->rollbacks;
        ++(stats->*reason);
    }

    bool try_rule(int ri) {
        tick();
        const Rule& r = p.rules[ri];
        bool ok = apply_once(g, r, stats ? &stats->rules[ri] : nullptr);
        if (!ok) return false;
        if (stats) ++stats->total_applications;
        if (monitors)
            for (const Monitor& m : *monitors) m(g, r);
        return true;
    }

    Flow exec(const Command& c) {
        switch (c.kind) {
            case Command::Kind::rule_set:
                for (int ri : c.rule_ids)
                    if (try_rule(ri)) return Flow::ok;
                return Flow::fail;
            case Command::Kind::call: return exec(*p.procs[c.callee_id].body);
            case Command::Kind::seq:
                for (const auto& k : c.kids) {
                    Flow f = exec(*k);
                    if (f != Flow::ok) return f;
                }
                return Flow::ok;
            case Command::Kind::if_: {
                size_t fr = g.begin_scope();
                Flow cf;
                try {
                    cf = exec(*c.kids[0]);
                } catch (...) {
                    g.rollback_scope(fr);  // leave a consistent graph behind the abort
                    if (stats) ++stats->rollbacks;
                    throw;
                }
                g.rollback_scope(fr);
                note_rollback(&RunStats::if_condition_runs);
                const auto& branch = cf == Flow::ok ? c.kids[1] : c.kids[2];
                return branch ? exec(*branch) : Flow::ok;
            }
            case Command::Kind::try_: {
                size_t fr = g.begin_scope();
                Flow cf;
                try {
                    cf = exec(*c.kids[0]);
                } catch (...) {
                    g.rollback_scope(fr);
                    if (stats) ++stats->rollbacks;
                    throw;
                }
                if (cf == Flow::ok) {
                    g.commit_scope(fr);
                    return c.kids[1] ? exec(*c.kids[1]) : Flow::ok;
                }
                g.rollback_scope(fr);
                note_rollback(&RunStats::failed_try_conditions);
                return c.kids[2] ? exec(*c.kids[2]) : Flow::ok;
            }
            case Command::Kind::loop:
                while (true) {
                    tick();  // guards rule-free bodies like skip!
                    size_t fr = g.begin_scope();
                    Flow bf;
                    try {
                        bf = exec(*c.kids[0]);
                    } catch (...) {
                        g.rollback_scope(fr);
                        if (stats) ++stats->rollbacks;
                        throw;
                    }
                    if (bf == Flow::fail) {
                        // the loop keeps the graph the body was last entered on
                        g.rollback_scope(fr);
                        note_rollback(&RunStats::failed_loop_iterations);
                        return Flow::ok;
                    }
                    g.commit_scope(fr);
                    if (bf == Flow::brk) return Flow::ok;
                }
            case Command::Kind::or_: return exec(*c.kids[0]);  // left-biased, right never runs
            case Command::Kind::break_: return Flow::brk;
            case Command::Kind::skip: return Flow::ok;
            case Command::Kind::fail: return Flow::fail;
        }
        return Flow::fail;
    }
};

}  // namespace

Outcome run_program(const Program& p, HostGraph& g, const ExecLimits& limits, RunStats* stats,
                    const std::vector<Monitor>* monitors) {
    assert(p.main_index >= 0);
    if (stats) {
        stats->rules.assign(p.rules.size(), RuleStats{});
        stats->total_applications = 0;
        stats->steps = 0;
        stats->rollbacks = 0;
        stats->if_condition_runs = 0;
        stats->failed_try_conditions = 0;
        stats->failed_loop_iterations = 0;
    }
    Exec ex{p, g, limits, stats, monitors};
    Outcome out;
    try {
        Flow f = ex.exec(*p.procs[p.main_index].body);
        assert(f != Flow::brk);
        out.kind = f == Flow::ok ? Outcome::Kind::graph : Outcome::Kind::fail;
    } catch (const Timeout& t) {
        out.kind = Outcome::Kind::timeout;
        out.error = t.reason;
    } catch (const ExecError& e) {
        out.kind = Outcome::Kind::runtime_error;
        out.error = e.what();
    }
    if (stats) {
        stats->steps = ex.steps;
        stats->wall_seconds = std::chrono::duration<double>(Clock::now() - ex.t0).count();
    }
    return out;
}

Monitor monitor_root_bound(int max_roots) {
    return [max_roots](const HostGraph& g, const Rule& r) {
        int n = 0;
        for (NodeId id : g.all_nodes())
            if (g.rooted(id)) ++n;
        if (n > max_roots)
            throw ConstraintError("after " + r.name + ": " + std::to_string(n) +
                                  " roots, expected at most " + std::to_string(max_roots));
    };
}

Monitor monitor_red_edge_bound(int max_edges) {
    return [max_edges](const HostGraph& g, const Rule& r) {
        int n = 0;
        for (EdgeId id : g.all_edges())
            if (g.mark(id) == Mark::red) ++n;
        if (n > max_edges)
            throw ConstraintError("after " + r.name + ": " + std::to_string(n) +
                                  " red edges, expected at most " + std::to_string(max_edges));
    };
}

Monitor monitor_dashed_path() {
    return [](const HostGraph& g, const Rule& r) {
        auto fail = [&](const std::string& why) {
            throw ConstraintError("after " + r.name + ": dashed edges " + why);
        };
        std::vector<EdgeId> dashed;
        for (EdgeId id : g.all_edges())
            if (g.mark(id) == Mark::dashed) dashed.push_back(id);
        if (dashed.empty()) return;

        std::map<int, int> degree;  // node slot -> dashed degree
        std::map<int, int> comp;    // node slot -> component representative
        for (EdgeId e : dashed) {
            NodeId s = g.source(e), t = g.target(e);
            if (s == t) fail("contain a loop");
            if (g.mark(s) != Mark::blue || g.mark(t) != Mark::blue)
                fail("touch a non-blue node");
            ++degree[s.slot];
            ++degree[t.slot];
            comp.emplace(s.slot, s.slot);
            comp.emplace(t.slot, t.slot);
        }
        if (degree.size() != dashed.size() + 1) fail("do not form a tree");
        std::function<int(int)> find = [&](int x) {
            while (comp[x] != x) x = comp[x] = comp[comp[x]];
            return x;
        };
        for (EdgeId e : dashed) comp[find(g.source(e).slot)] = find(g.target(e).slot);
        int rep = find(comp.begin()->first);
        for (auto& [slot, _] : comp)
            if (find(slot) != rep) fail("are not connected");

        int ends = 0;
        for (auto& [slot, d] : degree) {
            (void)slot;
            if (d > 2) fail("branch");
            if (d == 1) ++ends;
        }
        if (ends != 2) fail("do not form a single chain");
        bool root_at_end = false;
        for (NodeId id : g.all_nodes()) {
            auto it = degree.find(id.slot);
            if (it != degree.end() && it->second == 1 && g.rooted(id)) root_at_end = true;
        }
        if (!root_at_end) fail("have no root at an endpoint");
    };
}

std::string stats_text(const Program& p, const RunStats& s) {
    std::ostringstream os;
    for (size_t i = 0; i < p.rules.size(); ++i) {
        const RuleStats& r = s.rules[i];
        os << p.rules[i].name << ": calls=" << r.calls << " successes=" << r.successes
           << " failures=" << r.failures << " attempts=" << r.attempts << "\n";
    }
    os << "total applications: " << s.total_applications << "\n";
    os << "wall seconds: " << s.wall_seconds << "\n";
    return os.str();
}

std::string stats_csv(const Program& p, const RunStats& s) {
    std::ostringstream os;
    os << "rule,calls,successes,failures,attempts\n";
    for (size_t i = 0; i < p.rules.size(); ++i) {
        const RuleStats& r = s.rules[i];
        os << p.rules[i].name << "," << r.calls << "," << r.successes << "," << r.failures << ","
           << r.attempts << "\n";
    }
    return os.str();
}

}  // namespace rewrite
