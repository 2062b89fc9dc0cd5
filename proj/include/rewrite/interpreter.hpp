#pragma once

#include <functional>
#include <string>
#include <vector>

#include "rewrite/program.hpp"

namespace rewrite {

struct ExecLimits {
    std::uint64_t step_limit = 1'000'000'000;  // rule calls + loop iterations
    double wall_limit = 600.0;                 // seconds
};

struct RunStats {
    std::vector<RuleStats> rules;  // parallel to Program::rules
    std::uint64_t total_applications = 0;
    std::uint64_t steps = 0;
    double wall_seconds = 0.0;  // excludes parsing and printing by construction

    // Journal accounting. On a run without a runtime error,
    // rollbacks == if_condition_runs + failed_try_conditions + failed_loop_iterations.
    std::uint64_t rollbacks = 0;
    std::uint64_t if_condition_runs = 0;
    std::uint64_t failed_try_conditions = 0;
    std::uint64_t failed_loop_iterations = 0;
};

struct Outcome {
    enum class Kind { graph, fail, runtime_error, timeout };
    Kind kind = Kind::graph;
    std::string error;
};

// Fired after every successful rule application; must not mutate the graph.
using Monitor = std::function<void(const HostGraph&, const Rule&)>;

Outcome run_program(const Program& p, HostGraph& g, const ExecLimits& limits = {},
                    RunStats* stats = nullptr, const std::vector<Monitor>* monitors = nullptr);

// Built-in invariant monitors; a violation throws ConstraintError.
Monitor monitor_root_bound(int max_roots);
Monitor monitor_red_edge_bound(int max_edges);
// Dashed edges must form an undirected simple chain of blue nodes with a root
// at one end (vacuous when no dashed edge exists).
Monitor monitor_dashed_path();

std::string stats_text(const Program& p, const RunStats& s);
std::string stats_csv(const Program& p, const RunStats& s);

}  // namespace rewrite
