#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "rewrite/bench.hpp"

namespace rewrite {

// --- generators -----------------------------------------------------------

std::string class_name(const GraphClass& cls) {
    const char* base = nullptr;
    switch (cls.kind) {
    case GraphKind::list: base = "list"; break;
    case GraphKind::cycle: base = "cycle"; break;
    case GraphKind::grid: base = "grid"; break;
    case GraphKind::binary_tree: base = "tree"; break;
    case GraphKind::star: base = "star"; break;
    case GraphKind::complete: base = "complete"; break;
    case GraphKind::discrete: base = "discrete"; break;
    }
    return cls.rooted ? "rooted-" + std::string(base) : base;
}

std::optional<GraphKind> kind_by_name(const std::string& name) {
    if (name == "list") return GraphKind::list;
    if (name == "cycle") return GraphKind::cycle;
    if (name == "grid") return GraphKind::grid;
    if (name == "tree" || name == "binary-tree") return GraphKind::binary_tree;
    if (name == "star") return GraphKind::star;
    if (name == "complete") return GraphKind::complete;
    if (name == "discrete") return GraphKind::discrete;
    return std::nullopt;
}

namespace {

std::uint64_t mix_seed(const GraphClass& cls, long long size) {
    std::uint64_t h = cls.seed * 0x9E3779B97F4A7C15ULL;
    h ^= std::uint64_t(size) * 0xBF58476D1CE4E5B9ULL;
    h ^= std::uint64_t(cls.kind) * 0x94D049BB133111EBULL + (cls.rooted ? 0xFF51AFD7ED558CCDULL : 0);
    return h;
}

}  // namespace

HostGraph generate(const GraphClass& cls, long long size, bool legacy) {
    if (size < 0) throw std::invalid_argument("size must be non-negative");
    const bool weighted = cls.weights.kind != WeightSpec::Kind::none;
    if (weighted && cls.weights.kind == WeightSpec::Kind::uniform &&
        cls.weights.lo > cls.weights.hi)
        throw std::invalid_argument("empty weight interval");
    if (cls.rooted && cls.kind == GraphKind::cycle && size == 1)
        throw std::invalid_argument("a rooted cycle of one node would be a loop");

    long long nodes = cls.kind == GraphKind::star ? size + 1 : size;
    if (cls.kind == GraphKind::grid) {
        long long k = std::llround(std::sqrt(double(size)));
        if (k * k != size) throw std::invalid_argument("grid size must be a perfect square");
    }
    if (cls.rooted && nodes == 0)
        throw std::invalid_argument("a rooted graph needs at least one node");

    std::vector<std::pair<long long, long long>> edges;
    switch (cls.kind) {
    case GraphKind::list:
        for (long long i = 0; i + 1 < nodes; ++i) edges.push_back({i, i + 1});
        break;
    case GraphKind::cycle:
        if (nodes == 1) edges.push_back({0, 0});
        else
            for (long long i = 0; i < nodes; ++i) edges.push_back({i, (i + 1) % nodes});
        break;
    case GraphKind::grid: {
        long long k = std::llround(std::sqrt(double(size)));
        for (long long i = 0; i < k; ++i)
            for (long long j = 0; j < k; ++j) {
                if (j + 1 < k) edges.push_back({i * k + j, i * k + j + 1});
                if (i + 1 < k) edges.push_back({i * k + j, (i + 1) * k + j});
            }
        break;
    }
    case GraphKind::binary_tree:
        for (long long i = 1; i < nodes; ++i) edges.push_back({(i - 1) / 2, i});
        break;
    case GraphKind::star:
        for (long long i = 0; i < size; ++i) {
            if (i % 2 == 0) edges.push_back({0, i + 1});
            else edges.push_back({i + 1, 0});
        }
        break;
    case GraphKind::complete:
        for (long long i = 0; i < nodes; ++i)
            for (long long j = 0; j < nodes; ++j)
                if (i != j) edges.push_back({i, j});
        if (!cls.rooted)
            for (long long i = 0; i < nodes; ++i) edges.push_back({i, i});
        break;
    case GraphKind::discrete:
        break;
    }

    std::vector<long long> weight;
    if (weighted) {
        weight.resize(edges.size());
        if (cls.weights.kind == WeightSpec::Kind::alternating) {
            for (std::size_t i = 0; i < edges.size(); ++i) weight[i] = i % 2 == 0 ? -2 : 1;
        } else {
            std::mt19937_64 rng(mix_seed(cls, size));
            std::uniform_int_distribution<long long> dist(cls.weights.lo, cls.weights.hi);
            if (cls.kind == GraphKind::cycle && cls.weights.hi < 0 && !edges.empty())
                throw std::invalid_argument("cycle weights cannot reach a non-negative total");
            for (;;) {
                long long total = 0;
                for (auto& w : weight) total += (w = dist(rng));
                // A cycle must not be its own negative cycle.
                if (cls.kind != GraphKind::cycle || total >= 0) break;
            }
        }
    }

    HostGraph g(legacy);
    Mark nm = cls.kind == GraphKind::discrete ? Mark::none : Mark::grey;
    std::vector<NodeId> v;
    v.reserve(std::size_t(nodes));
    for (long long i = 0; i < nodes; ++i) v.push_back(g.add_node({}, nm, false));
    if (cls.rooted) g.set_rooted(v[0], true);
    for (std::size_t i = 0; i < edges.size(); ++i) {
        HostList label;
        if (weighted) label.push_back(weight[i]);
        g.add_edge(v[std::size_t(edges[i].first)], v[std::size_t(edges[i].second)],
                   std::move(label), Mark::none);
    }
    return g;
}

HostGraph random_traversal_graph(std::uint64_t seed, int max_n, int max_m) {
    std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ULL + 1);
    int n = 1 + int(rng() % std::uint64_t(max_n));
    int m = int(rng() % std::uint64_t(max_m + 1));
    HostGraph g;
    std::vector<NodeId> v;
    for (int i = 0; i < n; ++i) v.push_back(g.add_node({}, Mark::grey, false));
    for (int i = 0; i < m; ++i) {
        NodeId s = v[rng() % v.size()], t = v[rng() % v.size()];
        g.add_edge(s, t, {}, Mark::none);
    }
    return g;
}

HostGraph random_weighted_graph(std::uint64_t seed, int max_n, int max_m, long long lo,
                                long long hi) {
    std::mt19937_64 rng(seed * 0xBF58476D1CE4E5B9ULL + 1);
    int n = 1 + int(rng() % std::uint64_t(max_n));
    int m = n > 1 ? int(rng() % std::uint64_t(max_m + 1)) : 0;
    HostGraph g;
    std::vector<NodeId> v;
    for (int i = 0; i < n; ++i) v.push_back(g.add_node({}, Mark::grey, i == 0));
    std::uniform_int_distribution<long long> dist(lo, hi);
    for (int i = 0; i < m; ++i) {
        std::size_t s = rng() % v.size(), t = rng() % v.size();
        if (s == t) continue;
        g.add_edge(v[s], v[t], HostList{dist(rng)}, Mark::none);
    }
    return g;
}

// --- harness ----------------------------------------------------------------

namespace {

double median(std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    std::size_t n = xs.size();
    return n % 2 ? xs[n / 2] : (xs[n / 2 - 1] + xs[n / 2]) / 2.0;
}

std::uint64_t total_calls(const RunStats& st) {
    std::uint64_t total = 0;
    for (const RuleStats& r : st.rules) total += r.calls;
    return total;
}

}  // namespace

BenchTable run_benchmark(const Program& p, const GraphClass& cls,
                         const std::vector<long long>& sizes, const BenchOptions& opt) {
    if (opt.reps < 1) throw std::invalid_argument("reps must be positive");
    for (std::size_t i = 1; i < sizes.size(); ++i)
        if (sizes[i - 1] >= sizes[i]) throw std::invalid_argument("sizes must be ascending");

    BenchTable t;
    for (long long size : sizes) {
        BenchRow row;
        row.cls = class_name(cls);
        row.reps = opt.reps;
        {
            HostGraph warm = generate(cls, size, opt.legacy);
            row.size = warm.node_count() + warm.edge_count();
            Outcome oc = run_program(p, warm, opt.limits);
            if (oc.kind == Outcome::Kind::runtime_error)
                throw std::runtime_error("program error while benchmarking: " + oc.error);
            if (oc.kind == Outcome::Kind::timeout) row.timed_out = true;
        }
        std::vector<double> ms;
        for (int rep = 0; rep < opt.reps && !row.timed_out; ++rep) {
            HostGraph g = generate(cls, size, opt.legacy);
            RunStats st;
            Outcome oc = run_program(p, g, opt.limits, &st);
            if (oc.kind == Outcome::Kind::runtime_error)
                throw std::runtime_error("program error while benchmarking: " + oc.error);
            if (oc.kind == Outcome::Kind::timeout) {
                row.timed_out = true;
                break;
            }
            ms.push_back(st.wall_seconds * 1000.0);
            row.calls = total_calls(st);
        }
        row.median_ms = ms.empty() ? opt.limits.wall_limit * 1000.0 : median(std::move(ms));
        t.rows.push_back(std::move(row));
    }
    return t;
}

// --- analysis -----------------------------------------------------------

ScalingFit fit_scaling(const BenchTable& t) {
    ScalingFit f;
    std::vector<std::pair<double, double>> pts;  // (log size, log ms)
    for (const BenchRow& r : t.rows) {
        if (r.timed_out) {
            f.warnings.push_back("size " + std::to_string(r.size) + ": timed out, excluded");
            continue;
        }
        if (r.size <= 0 || !(r.median_ms > 0.0)) {
            f.warnings.push_back("size " + std::to_string(r.size) +
                                 ": degenerate time, excluded");
            continue;
        }
        pts.push_back({std::log(double(r.size)), std::log(r.median_ms)});
    }
    f.used_rows = int(pts.size());
    if (pts.size() < 2) return f;

    double mx = 0, my = 0;
    for (auto& [x, y] : pts) {
        mx += x;
        my += y;
    }
    mx /= double(pts.size());
    my /= double(pts.size());
    double sxx = 0, sxy = 0;
    for (auto& [x, y] : pts) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if (sxx > 0) f.slope = sxy / sxx;

    double worst = 0;
    bool any = false;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        double dx = pts[i].first - pts[i - 1].first;
        if (dx <= 0) continue;
        // Time quotient normalised to one doubling of the size.
        double ratio = std::exp((pts[i].second - pts[i - 1].second) / dx * std::log(2.0));
        worst = any ? std::max(worst, ratio) : ratio;
        any = true;
    }
    if (any) f.max_doubling_ratio = worst;
    return f;
}

// --- emission -----------------------------------------------------------

namespace {

std::string fmt(double x) {
    std::ostringstream o;
    o.precision(6);
    o << x;
    return o.str();
}

}  // namespace

std::string render_csv(const BenchTable& t) {
    std::string out = "size,time_ms,calls\n";
    for (const BenchRow& r : t.rows)
        out += std::to_string(r.size) + "," + fmt(r.median_ms) + "," + std::to_string(r.calls) +
               "\n";
    return out;
}

std::string render_dat(const BenchTable& t) {
    std::string out;
    for (const BenchRow& r : t.rows)
        out += std::to_string(r.size) + " " + fmt(r.median_ms) + "\n";
    return out;
}

BenchTable parse_dat(const std::string& text) {
    BenchTable t;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        BenchRow r;
        if (!(ls >> r.size >> r.median_ms))
            throw std::invalid_argument("malformed data line: " + line);
        t.rows.push_back(std::move(r));
    }
    return t;
}

std::string render_svg(const BenchTable& t) {
    if (t.rows.empty()) throw std::invalid_argument("empty table");
    const double W = 640, H = 440, ml = 70, mr = 20, mt = 20, mb = 50;

    struct Pt {
        double x, y;
    };
    std::vector<std::pair<std::string, std::vector<Pt>>> series;
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const BenchRow& r : t.rows) {
        if (r.timed_out || r.size <= 0 || !(r.median_ms > 0.0)) continue;
        double x = std::log10(double(r.size)), y = std::log10(r.median_ms);
        xmin = std::min(xmin, x), xmax = std::max(xmax, x);
        ymin = std::min(ymin, y), ymax = std::max(ymax, y);
        auto it = std::find_if(series.begin(), series.end(),
                               [&](auto& s) { return s.first == r.cls; });
        if (it == series.end()) {
            series.push_back({r.cls, {}});
            it = series.end() - 1;
        }
        it->second.push_back({x, y});
    }
    if (series.empty()) throw std::invalid_argument("no plottable rows");
    if (xmax - xmin < 1e-9) xmax = xmin + 1;
    if (ymax - ymin < 1e-9) ymax = ymin + 1;

    auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (W - ml - mr); };
    auto py = [&](double y) { return H - mb - (y - ymin) / (ymax - ymin) * (H - mt - mb); };

    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                   "#ff7f0e", "#8c564b", "#17becf"};
    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    o << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
    o << "<line x1=\"" << ml << "\" y1=\"" << H - mb << "\" x2=\"" << W - mr << "\" y2=\""
      << H - mb << "\" stroke=\"black\"/>\n";
    o << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << H - mb
      << "\" stroke=\"black\"/>\n";
    o << "<text x=\"" << (ml + W - mr) / 2 << "\" y=\"" << H - 12
      << "\" text-anchor=\"middle\" font-size=\"13\">size (nodes + edges), log10</text>\n";
    o << "<text x=\"16\" y=\"" << (mt + H - mb) / 2
      << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 "
      << (mt + H - mb) / 2 << ")\">time (ms), log10</text>\n";

    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = colors[s % 7];
        o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (const Pt& p : series[s].second) o << px(p.x) << "," << py(p.y) << " ";
        o << "\"/>\n";
        for (const Pt& p : series[s].second)
            o << "<circle cx=\"" << px(p.x) << "\" cy=\"" << py(p.y) << "\" r=\"3\" fill=\""
              << color << "\"/>\n";
        o << "<text x=\"" << W - mr - 150 << "\" y=\"" << mt + 16 + 16 * double(s)
          << "\" font-size=\"12\" fill=\"" << color << "\">" << series[s].first << "</text>\n";
    }
    o << "</svg>\n";
    return o.str();
}

void emit(const BenchTable& t, BenchFormat format, const std::string& path) {
    std::string body;
    switch (format) {
    case BenchFormat::csv: body = render_csv(t); break;
    case BenchFormat::dat: body = render_dat(t); break;
    case BenchFormat::svg: body = render_svg(t); break;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << body;
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace rewrite
