#include <algorithm>
#include <cstddef>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "rewrite/specimens.hpp"

namespace rewrite {

namespace {

// Slot -> dense index over the live nodes of one graph.
struct NodeIndex {
    std::vector<NodeId> nodes;
    std::vector<int> of_slot;

    explicit NodeIndex(const HostGraph& g) : nodes(g.all_nodes()) {
        std::int32_t max_slot = -1;
        for (NodeId v : nodes) max_slot = std::max(max_slot, v.slot);
        of_slot.assign(std::size_t(max_slot + 1), -1);
        for (std::size_t i = 0; i < nodes.size(); ++i) of_slot[nodes[i].slot] = int(i);
    }
    int operator()(NodeId v) const { return of_slot[v.slot]; }
};

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(std::size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

bool oracle_connected(const HostGraph& g) {
    NodeIndex idx(g);
    if (idx.nodes.size() <= 1) return true;
    UnionFind uf(idx.nodes.size());
    for (EdgeId e : g.all_edges()) uf.unite(idx(g.source(e)), idx(g.target(e)));
    int rep = uf.find(0);
    for (std::size_t i = 1; i < idx.nodes.size(); ++i)
        if (uf.find(int(i)) != rep) return false;
    return true;
}

bool oracle_acyclic(const HostGraph& g) {
    NodeIndex idx(g);
    std::size_t n = idx.nodes.size();
    std::vector<int> indeg(n, 0);
    std::vector<std::vector<int>> out(n);
    for (EdgeId e : g.all_edges()) {
        int s = idx(g.source(e)), t = idx(g.target(e));
        ++indeg[t];
        out[s].push_back(t);
    }
    std::vector<int> queue;
    for (std::size_t i = 0; i < n; ++i)
        if (indeg[i] == 0) queue.push_back(int(i));
    std::size_t peeled = 0;
    while (!queue.empty()) {
        int v = queue.back();
        queue.pop_back();
        ++peeled;
        for (int t : out[v])
            if (--indeg[t] == 0) queue.push_back(t);
    }
    return peeled == n;
}

std::optional<long long> ShortestPaths::dist_of(NodeId v) const {
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i] == v) return dist[i];
    return std::nullopt;
}

ShortestPaths oracle_shortest_paths(const HostGraph& g, NodeId source) {
    NodeIndex idx(g);
    std::size_t n = idx.nodes.size();

    struct E {
        int src, tgt;
        long long w;
    };
    std::vector<E> edges;
    for (EdgeId e : g.all_edges()) {
        const HostList& l = g.label(e);
        if (l.size() != 1 || !is_int(l[0]))
            throw std::invalid_argument("edge label is not a single integer");
        edges.push_back({idx(g.source(e)), idx(g.target(e)), as_int(l[0])});
    }

    ShortestPaths out;
    out.nodes = idx.nodes;
    out.dist.assign(n, std::nullopt);
    out.dist[idx(source)] = 0;

    for (std::size_t round = 1; round + 1 <= n; ++round) {
        bool changed = false;
        for (const E& e : edges) {
            if (!out.dist[e.src]) continue;
            long long cand = *out.dist[e.src] + e.w;
            if (!out.dist[e.tgt] || cand < *out.dist[e.tgt]) {
                out.dist[e.tgt] = cand;
                changed = true;
            }
        }
        if (!changed) break;
    }
    for (const E& e : edges) {
        if (!out.dist[e.src]) continue;
        long long cand = *out.dist[e.src] + e.w;
        if (!out.dist[e.tgt] || cand < *out.dist[e.tgt]) {
            out.negative_cycle_reachable = true;
            break;
        }
    }
    return out;
}

Reachability oracle_reachability(const HostGraph& g) {
    NodeIndex idx(g);
    std::size_t n = idx.nodes.size();
    std::vector<std::vector<int>> out(n);
    for (EdgeId e : g.all_edges()) out[idx(g.source(e))].push_back(idx(g.target(e)));

    Reachability r;
    r.nodes = idx.nodes;
    r.reach.assign(n, std::vector<bool>(n, false));
    std::vector<int> stack;
    for (std::size_t s = 0; s < n; ++s) {
        // Seed with the successors so a node reaches itself only via a cycle.
        stack.assign(out[s].begin(), out[s].end());
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            if (r.reach[s][v]) continue;
            r.reach[s][v] = true;
            for (int t : out[v])
                if (!r.reach[s][t]) stack.push_back(t);
        }
    }
    return r;
}

namespace {

// Node fingerprint for the isomorphism search: label text plus degrees,
// refined by a few rounds of neighbourhood hashing.
std::vector<std::size_t> refine_classes(const HostGraph& g, const NodeIndex& idx) {
    std::size_t n = idx.nodes.size();
    std::vector<std::string> sig(n);
    for (std::size_t i = 0; i < n; ++i) {
        NodeId v = idx.nodes[i];
        sig[i] = print_list(g.label(v)) + "/" + std::to_string(g.in_degree(v)) + "/" +
                 std::to_string(g.out_degree(v));
    }
    std::vector<std::size_t> cls(n);
    for (std::size_t i = 0; i < n; ++i) cls[i] = std::hash<std::string>{}(sig[i]);

    for (int round = 0; round < 3; ++round) {
        std::vector<std::vector<std::pair<std::size_t, std::size_t>>> nb(n);
        for (EdgeId e : g.all_edges()) {
            std::size_t s = std::size_t(idx(g.source(e)));
            std::size_t t = std::size_t(idx(g.target(e)));
            std::size_t el = std::hash<std::string>{}(print_list(g.label(e)));
            nb[s].push_back({el * 2 + 1, cls[t]});
            nb[t].push_back({el * 2, cls[s]});
        }
        std::vector<std::size_t> next(n);
        for (std::size_t i = 0; i < n; ++i) {
            std::sort(nb[i].begin(), nb[i].end());
            std::size_t h = cls[i];
            for (auto& p : nb[i]) {
                h = h * 1000003 + p.first;
                h = h * 1000003 + p.second;
            }
            next[i] = h;
        }
        cls = std::move(next);
    }
    return cls;
}

// Label multiset of the edges from u to v (directed), as sorted text.
std::vector<std::string> edge_labels_between(const HostGraph& g, const NodeIndex& idx,
                                             std::vector<std::vector<EdgeId>> const& out_edges,
                                             int u, int v) {
    std::vector<std::string> labels;
    for (EdgeId e : out_edges[u])
        if (idx(g.target(e)) == v) labels.push_back(print_list(g.label(e)));
    std::sort(labels.begin(), labels.end());
    return labels;
}

}  // namespace

bool isomorphic_ignoring_marks(const HostGraph& a, const HostGraph& b) {
    if (a.node_count() != b.node_count() || a.edge_count() != b.edge_count()) return false;
    NodeIndex ia(a), ib(b);
    std::size_t n = ia.nodes.size();
    if (n == 0) return a.edge_count() == 0 && b.edge_count() == 0;

    std::vector<std::size_t> ca = refine_classes(a, ia), cb = refine_classes(b, ib);
    {
        std::vector<std::size_t> sa = ca, sb = cb;
        std::sort(sa.begin(), sa.end());
        std::sort(sb.begin(), sb.end());
        if (sa != sb) return false;
    }

    std::vector<std::vector<EdgeId>> out_a(n), out_b(n);
    for (EdgeId e : a.all_edges()) out_a[ia(a.source(e))].push_back(e);
    for (EdgeId e : b.all_edges()) out_b[ib(b.source(e))].push_back(e);

    // Candidate lists per a-node: b-nodes in the same refinement class.
    std::vector<std::vector<int>> cand(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (ca[i] == cb[j]) cand[i].push_back(int(j));

    // Most constrained first.
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int x, int y) { return cand[x].size() < cand[y].size(); });

    std::vector<int> map_ab(n, -1), used_b(n, 0);

    // Verifies all edges between the new pair and previously mapped pairs.
    auto consistent = [&](int na, int nb_) {
        for (std::size_t k = 0; k < n; ++k) {
            if (map_ab[k] < 0 && int(k) != na) continue;
            int ka = int(k), kb = (int(k) == na) ? nb_ : map_ab[k];
            if (edge_labels_between(a, ia, out_a, na, ka) !=
                edge_labels_between(b, ib, out_b, nb_, kb))
                return false;
            if (edge_labels_between(a, ia, out_a, ka, na) !=
                edge_labels_between(b, ib, out_b, kb, nb_))
                return false;
        }
        return true;
    };

    std::function<bool(std::size_t)> search = [&](std::size_t pos) {
        if (pos == n) return true;
        int na = order[pos];
        for (int nb_ : cand[na]) {
            if (used_b[nb_]) continue;
            if (!consistent(na, nb_)) continue;
            map_ab[na] = nb_;
            used_b[nb_] = 1;
            if (search(pos + 1)) return true;
            map_ab[na] = -1;
            used_b[nb_] = 0;
        }
        return false;
    };
    return search(0);
}

}  // namespace rewrite
