#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rewrite/bench.hpp"
#include "rewrite/interpreter.hpp"
#include "rewrite/parser.hpp"
#include "rewrite/specimens.hpp"

namespace fs = std::filesystem;
using namespace rewrite;

namespace {

std::string read_text(const std::string& path) {
    std::ostringstream o;
    if (path == "-") {
        o << std::cin.rdbuf();
    } else {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw std::invalid_argument("cannot read " + path);
        o << in.rdbuf();
    }
    return o.str();
}

void write_text(const std::string& path, const std::string& body) {
    if (path.empty() || path == "-") {
        std::cout << body;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot write " + path);
    out << body;
}

// A program reference is a catalog name first, a file path second.
Program load_program_ref(const std::string& ref) {
    if (specimen_source(ref)) return load_specimen(ref);
    return parse_program(read_text(ref));
}

std::vector<Monitor> monitors_for(const std::string& ref) {
    if (specimen_source(ref)) return specimen_monitors(ref);
    std::vector<Monitor> ms;
    ms.push_back(monitor_root_bound(1));
    ms.push_back(monitor_red_edge_bound(1));
    return ms;
}

// "none" | "alternating" | "uniform:LO:HI[:seedN]"
WeightSpec parse_weights(const std::string& text, std::uint64_t& seed) {
    WeightSpec w;
    if (text.empty() || text == "none") return w;
    if (text == "alternating") {
        w.kind = WeightSpec::Kind::alternating;
        return w;
    }
    std::istringstream in(text);
    std::string head, lo, hi, tail;
    std::getline(in, head, ':');
    if (head != "uniform" || !std::getline(in, lo, ':') || !std::getline(in, hi, ':'))
        throw std::invalid_argument("bad weight spec '" + text +
                                    "' (want none, alternating, or uniform:LO:HI[:seedN])");
    try {
        w.kind = WeightSpec::Kind::uniform;
        w.lo = std::stoll(lo);
        w.hi = std::stoll(hi);
        if (std::getline(in, tail, ':')) {
            if (tail.rfind("seed", 0) != 0) throw std::invalid_argument(tail);
            seed = std::stoull(tail.substr(4));
        }
    } catch (const std::exception&) {
        throw std::invalid_argument("bad weight spec '" + text + "'");
    }
    if (w.lo > w.hi) throw std::invalid_argument("empty weight interval in '" + text + "'");
    return w;
}

GraphClass parse_class(std::string name, const std::string& weights, std::uint64_t seed) {
    GraphClass c;
    if (name.rfind("rooted-", 0) == 0) {
        c.rooted = true;
        name = name.substr(7);
    }
    auto kind = kind_by_name(name);
    if (!kind) throw std::invalid_argument("unknown graph class '" + name + "'");
    c.kind = *kind;
    c.seed = seed;
    c.weights = parse_weights(weights, c.seed);
    return c;
}

int exit_code(Outcome::Kind k) {
    switch (k) {
    case Outcome::Kind::graph: return 0;
    case Outcome::Kind::fail: return 1;
    case Outcome::Kind::runtime_error: return 2;
    case Outcome::Kind::timeout: return 3;
    }
    return 2;
}

struct Options {
    std::string program;
    std::string input;
    std::string mode = "bucketed";
    std::string out;
    std::string weights = "none";
    std::string klass;
    std::vector<std::string> classes{"list", "cycle", "grid", "tree", "star", "complete"};
    std::vector<long long> sizes{20000, 40000, 80000, 160000, 320000};
    std::vector<std::string> extra_inputs;
    long long size = 0;
    std::uint64_t seed = 1;
    int cases = 100;
    int max_n = 40;
    int reps = 5;
    bool stats = false;
    bool monitors = false;
    ExecLimits limits;
};

bool legacy_of(const Options& o) {
    if (o.mode == "legacy") return true;
    if (o.mode == "bucketed") return false;
    throw std::invalid_argument("unknown mode '" + o.mode + "'");
}

int cmd_run(const Options& o) {
    Program p = load_program_ref(o.program);
    HostGraph g = parse_host_graph(read_text(o.input), legacy_of(o));
    RunStats st;
    std::vector<Monitor> mons;
    if (o.monitors) mons = monitors_for(o.program);
    Outcome oc;
    try {
        oc = run_program(p, g, o.limits, &st, o.monitors ? &mons : nullptr);
    } catch (const ConstraintError& e) {
        std::cerr << "monitor violation: " << e.what() << "\n";
        return 2;
    }
    if (o.stats) std::cerr << stats_text(p, st);
    switch (oc.kind) {
    case Outcome::Kind::graph: write_text(o.out, print_host_graph(g) + "\n"); break;
    case Outcome::Kind::fail: std::cerr << "fail\n"; break;
    case Outcome::Kind::runtime_error: std::cerr << "runtime error: " << oc.error << "\n"; break;
    case Outcome::Kind::timeout: std::cerr << "timeout: " << oc.error << "\n"; break;
    }
    return exit_code(oc.kind);
}

// Random check inputs live on the specimen's input domain.
HostGraph make_check_input(const std::string& name, std::uint64_t seed, int max_n) {
    if (name == "bellman-ford") return random_weighted_graph(seed, max_n, 2 * max_n, -10, 10);
    HostGraph g = random_traversal_graph(seed, max_n, 2 * max_n);
    if (name == "is-discrete")
        for (NodeId n : g.all_nodes()) g.remark_node(n, Mark::none);
    return g;
}

int cmd_check(const Options& o) {
    if (!specimen_source(o.program))
        throw std::invalid_argument("check needs a catalog program, got '" + o.program + "'");
    int passes = 0, fails = 0, skips = 0;
    auto one = [&](const std::string& label, const HostGraph& in) {
        try {
            OracleVerdict v = check_program_against_oracle(o.program, in, o.monitors);
            if (v.pass) {
                ++passes;
            } else {
                ++fails;
                std::cout << "FAIL " << label << ": " << v.detail << "\n";
            }
        } catch (const std::invalid_argument& e) {
            ++skips;
            std::cout << "SKIP " << label << ": " << e.what() << "\n";
        }
    };
    for (const auto& [label, g] : conformance_inputs(o.program)) one("fixed " + label, g);
    for (int i = 0; i < o.cases; ++i)
        one("random #" + std::to_string(i), make_check_input(o.program, o.seed + i, o.max_n));
    for (const std::string& path : o.extra_inputs)
        one(path, parse_host_graph(read_text(path)));
    std::cout << o.program << ": " << passes << " pass, " << fails << " fail, " << skips
              << " skipped\n";
    return fails ? 1 : 0;
}

int cmd_gen(const Options& o) {
    GraphClass c = parse_class(o.klass, o.weights, o.seed);
    write_text(o.out, print_host_graph(generate(c, o.size)) + "\n");
    return 0;
}

std::string fmt2(double x) {
    std::ostringstream s;
    s.precision(3);
    s << x;
    return s.str();
}

int cmd_bench(const Options& o) {
    Program p = load_program_ref(o.program);
    BenchOptions opt;
    opt.reps = o.reps;
    opt.legacy = legacy_of(o);
    opt.limits = o.limits;

    fs::path dir = o.out.empty() ? fs::path("bench-results") : fs::path(o.out);
    fs::create_directories(dir);

    BenchTable all;
    std::ostringstream summary;
    for (const std::string& name : o.classes) {
        GraphClass c = parse_class(name, o.weights, o.seed);
        std::vector<long long> sizes;
        for (long long s : o.sizes) {
            if (c.kind == GraphKind::grid) {
                long long k = std::llround(std::sqrt(double(s)));
                s = k * k;
            }
            if (sizes.empty() || sizes.back() < s) sizes.push_back(s);
        }
        BenchTable t = run_benchmark(p, c, sizes, opt);
        emit(t, BenchFormat::csv, (dir / (name + ".csv")).string());
        emit(t, BenchFormat::dat, (dir / (name + ".dat")).string());
        ScalingFit f = fit_scaling(t);
        summary << name << ": slope " << (f.slope ? fmt2(*f.slope) : "n/a")
                << ", max doubling ratio "
                << (f.max_doubling_ratio ? fmt2(*f.max_doubling_ratio) : "n/a") << " ("
                << f.used_rows << " sizes)\n";
        for (const std::string& w : f.warnings) summary << "  warning: " << w << "\n";
        for (BenchRow& r : t.rows) all.rows.push_back(std::move(r));
    }
    try {
        emit(all, BenchFormat::svg, (dir / "plot.svg").string());
    } catch (const std::invalid_argument&) {
        summary << "warning: no plottable rows, plot.svg skipped\n";
    }

    std::ostringstream manifest;
    manifest << "program: " << o.program << "\nmode: " << o.mode << "\nseed: " << o.seed
             << "\nreps: " << o.reps << "\nweights: " << o.weights
             << "\nstep limit: " << o.limits.step_limit
             << "\nwall limit: " << o.limits.wall_limit << "\nclasses:";
    for (const std::string& name : o.classes) manifest << " " << name;
    manifest << "\nsizes:";
    for (long long s : o.sizes) manifest << " " << s;
    manifest << "\n";
    write_text((dir / "manifest.txt").string(), manifest.str());
    write_text((dir / "summary.txt").string(), summary.str());
    std::cout << summary.str();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rule-based graph rewriting toolkit"};
    app.require_subcommand(1);
    Options o;

    auto add_limits = [&](CLI::App* c) {
        c->add_option("--step-limit", o.limits.step_limit, "abort after this many steps");
        c->add_option("--wall-limit", o.limits.wall_limit, "abort after this many seconds");
    };
    auto add_mode = [&](CLI::App* c) {
        c->add_option("--mode", o.mode, "host-graph store: bucketed or legacy")
            ->check(CLI::IsMember({"bucketed", "legacy"}));
    };

    CLI::App* run = app.add_subcommand("run", "execute a program on a host graph");
    run->add_option("program", o.program, "catalog name or program file")->required();
    run->add_option("input", o.input, "host graph file, - for stdin")->required();
    run->add_flag("--stats", o.stats, "print per-rule statistics to stderr");
    run->add_flag("--monitors", o.monitors, "assert structural invariants per application");
    run->add_option("--out", o.out, "write the output graph here instead of stdout");
    add_mode(run);
    add_limits(run);

    CLI::App* check = app.add_subcommand("check", "compare a catalog program with its oracle");
    check->add_option("program", o.program, "catalog name")->required();
    check->add_option("--cases", o.cases, "number of seeded random inputs");
    check->add_option("--max-n", o.max_n, "node bound for random inputs");
    check->add_option("--seed", o.seed, "base seed for random inputs");
    check->add_option("--input", o.extra_inputs, "extra host graph files to include");
    check->add_flag("--monitors", o.monitors, "assert structural invariants per application");
    add_mode(check);
    add_limits(check);

    CLI::App* gen = app.add_subcommand("gen", "emit a generated host graph");
    gen->add_option("class", o.klass, "list, cycle, grid, tree, star, complete, discrete; "
                                      "prefix rooted- to root one node")
        ->required();
    gen->add_option("size", o.size, "node count (edge count for stars)")->required();
    gen->add_option("--weights", o.weights, "edge labels: none, alternating, uniform:LO:HI[:seedN]");
    gen->add_option("--seed", o.seed, "seed for uniform weights");
    gen->add_option("--out", o.out, "write here instead of stdout");

    CLI::App* bench = app.add_subcommand("bench", "time a program over generated graph classes");
    bench->add_option("program", o.program, "catalog name or program file")->required();
    bench->add_option("--classes", o.classes, "graph classes to sweep")->delimiter(',');
    bench->add_option("--sizes", o.sizes, "ascending generator sizes")->delimiter(',');
    bench->add_option("--reps", o.reps, "timed repetitions per size (after one warmup)");
    bench->add_option("--weights", o.weights, "edge labels: none, alternating, uniform:LO:HI[:seedN]");
    bench->add_option("--seed", o.seed, "seed for uniform weights");
    bench->add_option("--out", o.out, "results directory (default bench-results)");
    add_mode(bench);
    add_limits(bench);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 64;
    }

    try {
        if (run->parsed()) return cmd_run(o);
        if (check->parsed()) return cmd_check(o);
        if (gen->parsed()) return cmd_gen(o);
        if (bench->parsed()) return cmd_bench(o);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 64;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 64;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 64;
}
