#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rewrite/host_graph.hpp"
#include "rewrite/interpreter.hpp"
#include "rewrite/program.hpp"

namespace rewrite {

// --- graph-class generators ---------------------------------------------

enum class GraphKind : std::uint8_t { list, cycle, grid, binary_tree, star, complete, discrete };

struct WeightSpec {
    enum class Kind : std::uint8_t { none, uniform, alternating } kind = Kind::none;
    long long lo = 0, hi = 0;  // uniform bounds, both inclusive
};

struct GraphClass {
    GraphKind kind = GraphKind::list;
    bool rooted = false;
    WeightSpec weights;
    std::uint64_t seed = 0;
};

// "list", "rooted-star", ... as accepted by the command line.
std::string class_name(const GraphClass& cls);
std::optional<GraphKind> kind_by_name(const std::string& name);

// The size parameter counts nodes, except for stars where it counts edges
// (leaves). Grids require a perfect-square node count. Nodes are grey except
// in the discrete class, which is unmarked; rooted variants root the list
// head, the tree root, the star centre, the grid corner, or node 0. The
// unrooted complete graph carries a loop per node, the rooted one none.
// Uniform weights on rooted cycles are re-rolled until their total is
// non-negative so the class stays free of negative cycles; alternating
// weights follow the pattern -2, 1, ... whose total is always negative.
// Deterministic: one (class, size) pair always yields the same graph.
// Throws std::invalid_argument on bad parameters.
HostGraph generate(const GraphClass& cls, long long size, bool legacy = false);

// Seeded corpora for the oracle conformance suites. Traversal graphs draw
// 1..max_n grey nodes and 0..max_m unmarked edges with uniform endpoints
// (loops included); weighted graphs are loop-free digraphs with one rooted
// node and single-integer edge labels drawn from [lo, hi].
HostGraph random_traversal_graph(std::uint64_t seed, int max_n, int max_m);
HostGraph random_weighted_graph(std::uint64_t seed, int max_n, int max_m, long long lo,
                                long long hi);

// --- timing harness -------------------------------------------------------

struct BenchRow {
    std::string cls;
    long long size = 0;  // nodes + edges as generated
    int reps = 0;
    double median_ms = 0.0;
    std::uint64_t calls = 0;  // total rule calls of one run
    bool timed_out = false;
};

struct BenchTable {
    std::vector<BenchRow> rows;
};

struct BenchOptions {
    int reps = 5;  // timed repetitions, after one discarded warmup run
    bool legacy = false;
    ExecLimits limits;
};

// One row per size: generates a fresh graph per repetition, times only the
// interpreter (the interpreter's own wall clock excludes parse and print),
// and records the median. A timeout flags the row and moves on.
// Sizes must be ascending; reps must be positive.
BenchTable run_benchmark(const Program& p, const GraphClass& cls,
                         const std::vector<long long>& sizes, const BenchOptions& opt = {});

// --- scaling analysis -------------------------------------------------------

struct ScalingFit {
    std::optional<double> slope;                // least squares on log time vs log size
    std::optional<double> max_doubling_ratio;   // max adjacent time ratio per size doubling
    int used_rows = 0;
    std::vector<std::string> warnings;          // excluded degenerate rows
};

// Ignores timed-out and non-positive-time rows (with a warning each). Rows
// whose x-value would repeat are fine; the doubling ratio normalises the
// time quotient of adjacent rows to one size doubling.
ScalingFit fit_scaling(const BenchTable& t);

// --- emission -----------------------------------------------------------

enum class BenchFormat : std::uint8_t { csv, dat, svg };

std::string render_csv(const BenchTable& t);  // header "size,time_ms,calls"
std::string render_dat(const BenchTable& t);  // two columns: size time_ms
std::string render_svg(const BenchTable& t);  // log-log scatter, a polyline per class

// Renders and writes; throws std::runtime_error on io failure.
void emit(const BenchTable& t, BenchFormat format, const std::string& path);

// Reads the two-column layout back; cls/reps/calls are defaulted.
BenchTable parse_dat(const std::string& text);

}  // namespace rewrite
