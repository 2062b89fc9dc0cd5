#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "rewrite/value.hpp"

namespace rewrite {

// Slot index plus generation counter; deleting an item bumps the generation,
// so stale ids are detectable and live ids survive unrelated mutations.
struct NodeId {
    std::int32_t slot = -1;
    std::uint32_t gen = 0;
    explicit operator bool() const { return slot >= 0; }
    friend bool operator==(NodeId a, NodeId b) { return a.slot == b.slot && a.gen == b.gen; }
    friend bool operator!=(NodeId a, NodeId b) { return !(a == b); }
};

struct EdgeId {
    std::int32_t slot = -1;
    std::uint32_t gen = 0;
    explicit operator bool() const { return slot >= 0; }
    friend bool operator==(EdgeId a, EdgeId b) { return a.slot == b.slot && a.gen == b.gen; }
    friend bool operator!=(EdgeId a, EdgeId b) { return !(a == b); }
};

enum class Dir : std::uint8_t { in = 0, out = 1, loop = 2 };

// Mutable labelled directed multigraph. Nodes live in one doubly-linked
// bucket per mark; each node carries a 5x3 array of doubly-linked edge lists
// indexed by edge mark and by in/out/loop orientation; rooted nodes are
// chained in a root list. All elementary operations are O(1); loops count
// once toward the in-degree and once toward the out-degree of their node.
//
// Legacy mode drops the mark buckets and finds nodes by scanning the slot
// array in index order, with freed slots reused LIFO, so a node deleted and
// recreated keeps its scan position. This reproduces the single-node-list
// store this design replaced; edge lists and the root list are unaffected.
//
// Scopes expose an undo journal: while at least one scope is open every
// mutation records its inverse, and rolling a scope back restores the store
// byte-for-byte, including list positions and item names.
class HostGraph {
public:
    explicit HostGraph(bool legacy_node_list = false) : legacy_(legacy_node_list) {
        for (int i = 0; i < 5; ++i) bucket_head_[i] = bucket_tail_[i] = -1;
    }

    // Mode switch kept for harness construction paths; the store must be empty.
    void set_legacy_mode(bool enabled) {
        if (node_count_ != 0 || edge_count_ != 0)
            throw ConstraintError("legacy mode can only be set on an empty graph");
        legacy_ = enabled;
    }
    bool legacy_mode() const { return legacy_; }

    // --- mutation ---------------------------------------------------------

    NodeId add_node(HostList label, Mark mark, bool rooted, std::string name = {});
    void delete_node(NodeId id);
    EdgeId add_edge(NodeId src, NodeId tgt, HostList label, Mark mark, std::string name = {});
    void delete_edge(EdgeId id);

    void relabel_node(NodeId id, HostList label);
    void remark_node(NodeId id, Mark mark);
    void set_rooted(NodeId id, bool rooted);
    void relabel_edge(EdgeId id, HostList label);
    void remark_edge(EdgeId id, Mark mark);

    // --- item views -------------------------------------------------------

    bool alive(NodeId id) const {
        return id.slot >= 0 && id.slot < std::int32_t(nodes_.size()) &&
               nodes_[id.slot].alive_ && nodes_[id.slot].gen_ == id.gen;
    }
    bool alive(EdgeId id) const {
        return id.slot >= 0 && id.slot < std::int32_t(edges_.size()) &&
               edges_[id.slot].alive_ && edges_[id.slot].gen_ == id.gen;
    }

    const HostList& label(NodeId id) const { return node(id).label_; }
    Mark mark(NodeId id) const { return node(id).mark_; }
    bool rooted(NodeId id) const { return node(id).rooted_; }
    int in_degree(NodeId id) const { return node(id).in_deg_; }
    int out_degree(NodeId id) const { return node(id).out_deg_; }
    const std::string& name(NodeId id) const { return node(id).name_; }

    const HostList& label(EdgeId id) const { return edge(id).label_; }
    Mark mark(EdgeId id) const { return edge(id).mark_; }
    NodeId source(EdgeId id) const {
        const EdgeRec& e = edge(id);
        return NodeId{e.src_, nodes_[e.src_].gen_};
    }
    NodeId target(EdgeId id) const {
        const EdgeRec& e = edge(id);
        return NodeId{e.tgt_, nodes_[e.tgt_].gen_};
    }
    bool is_loop(EdgeId id) const {
        const EdgeRec& e = edge(id);
        return e.src_ == e.tgt_;
    }
    const std::string& name(EdgeId id) const { return edge(id).name_; }

    int node_count() const { return node_count_; }
    int edge_count() const { return edge_count_; }

    // --- cursors ----------------------------------------------------------
    // Every record examined during a cursor step adds one to the inspection
    // counter; fetching the first element of a non-empty bucket or cell costs
    // exactly one inspection in bucketed mode.

    NodeId first_node(Mark mark) const;
    NodeId next_node(NodeId id, Mark mark) const;

    NodeId first_root() const {
        if (root_head_ < 0) return {};
        ++inspections_;
        return NodeId{root_head_, nodes_[root_head_].gen_};
    }
    NodeId next_root(NodeId id) const {
        std::int32_t n = node(id).root_next_;
        if (n < 0) return {};
        ++inspections_;
        return NodeId{n, nodes_[n].gen_};
    }

    // Concrete-mark cell cursor. Dir::out and Dir::loop iterate source-side
    // chains, Dir::in the target-side chain.
    EdgeId first_edge(NodeId id, Mark mark, Dir dir) const;
    EdgeId next_edge(EdgeId id, Dir dir) const;

    // `any` iterates the marked rows red, green, blue, dashed in that order.
    EdgeId first_edge_any(NodeId id, Dir dir) const;
    EdgeId next_edge_any(EdgeId id, Dir dir) const;

    // --- matched scratch flags ---------------------------------------------

    bool matched(NodeId id) const { return node(id).matched_; }
    bool matched(EdgeId id) const { return edge(id).matched_; }
    void set_matched(NodeId id) { node(id).matched_ = true; }
    void set_matched(EdgeId id) { edge(id).matched_ = true; }
    void clear_matched(NodeId id) { node(id).matched_ = false; }
    void clear_matched(EdgeId id) { edge(id).matched_ = false; }

    // --- instrumentation ----------------------------------------------------

    std::uint64_t inspections() const { return inspections_; }
    void reset_inspections() { inspections_ = 0; }

    // --- undo journal -------------------------------------------------------

    std::size_t begin_scope() {
        scopes_.push_back(journal_.size());
        return journal_.size();
    }
    void commit_scope(std::size_t mark);
    void rollback_scope(std::size_t mark);
    bool recording() const { return !scopes_.empty(); }

    // --- names --------------------------------------------------------------

    NodeId node_by_name(const std::string& name) const {
        auto it = node_names_.find(name);
        if (it == node_names_.end()) return {};
        return NodeId{it->second, nodes_[it->second].gen_};
    }
    EdgeId edge_by_name(const std::string& name) const {
        auto it = edge_names_.find(name);
        if (it == edge_names_.end()) return {};
        return EdgeId{it->second, edges_[it->second].gen_};
    }

    // Live-item enumeration in slot order; O(capacity), for printing and tests.
    std::vector<NodeId> all_nodes() const;
    std::vector<EdgeId> all_edges() const;

private:
    struct EdgeCell {
        std::int32_t head = -1, tail = -1;
    };

    struct NodeRec {
        HostList label_;
        std::string name_;
        std::uint32_t gen_ = 0;
        Mark mark_ = Mark::none;
        bool rooted_ = false;
        bool matched_ = false;
        bool alive_ = false;
        std::int32_t in_deg_ = 0, out_deg_ = 0;
        std::int32_t prev_ = -1, next_ = -1;  // mark bucket, or the single legacy list
        std::int32_t root_prev_ = -1, root_next_ = -1;
        EdgeCell cells_[5][3];
    };

    struct EdgeRec {
        HostList label_;
        std::string name_;
        std::uint32_t gen_ = 0;
        Mark mark_ = Mark::none;
        bool matched_ = false;
        bool alive_ = false;
        std::int32_t src_ = -1, tgt_ = -1;
        std::int32_t sprev_ = -1, snext_ = -1;  // out cell of src, or loop cell
        std::int32_t tprev_ = -1, tnext_ = -1;  // in cell of tgt; unused for loops
    };

    struct JEntry {
        enum class Kind : std::uint8_t {
            node_added,
            node_deleted,
            edge_added,
            edge_deleted,
            node_relabeled,
            node_remarked,
            node_rerooted,
            edge_relabeled,
            edge_remarked,
        };
        Kind kind;
        Mark old_mark = Mark::none;
        bool old_rooted = false;
        std::int32_t slot = -1;
        std::uint32_t gen = 0;
        std::int32_t src = -1, tgt = -1;
        std::int32_t a = -1, b = -1, c = -1, d = -1;  // saved chain neighbours
        HostList old_label;
        std::string old_name;
    };

    NodeRec& node(NodeId id) {
        if (!alive(id)) throw NotFoundError("unknown node id");
        return nodes_[id.slot];
    }
    const NodeRec& node(NodeId id) const {
        if (!alive(id)) throw NotFoundError("unknown node id");
        return nodes_[id.slot];
    }
    EdgeRec& edge(EdgeId id) {
        if (!alive(id)) throw NotFoundError("unknown edge id");
        return edges_[id.slot];
    }
    const EdgeRec& edge(EdgeId id) const {
        if (!alive(id)) throw NotFoundError("unknown edge id");
        return edges_[id.slot];
    }

    // Raw list plumbing; no journaling, no validity checks.
    void bucket_append(std::int32_t slot);
    void bucket_unlink(std::int32_t slot);
    void bucket_link_between(std::int32_t slot, std::int32_t prev, std::int32_t next);
    void root_append(std::int32_t slot);
    void root_unlink(std::int32_t slot);
    void root_link_between(std::int32_t slot, std::int32_t prev, std::int32_t next);
    void cell_append(std::int32_t eslot);
    void cell_unlink(std::int32_t eslot);
    void cell_link_between(std::int32_t eslot, std::int32_t sprev, std::int32_t snext,
                           std::int32_t tprev, std::int32_t tnext);

    std::int32_t& bucket_head_for(const NodeRec& n) {
        return bucket_head_[node_bucket(n.mark_)];
    }
    std::int32_t& bucket_tail_for(const NodeRec& n) {
        return bucket_tail_[node_bucket(n.mark_)];
    }

    void undo(const JEntry& e);
    std::string mint_name(bool for_node);
    NodeId legacy_scan(std::int32_t from, Mark mark) const;

    std::vector<NodeRec> nodes_;
    std::vector<EdgeRec> edges_;
    std::vector<std::int32_t> free_nodes_, free_edges_;
    std::int32_t bucket_head_[5], bucket_tail_[5];
    std::int32_t root_head_ = -1, root_tail_ = -1;
    int node_count_ = 0, edge_count_ = 0;
    bool legacy_ = false;
    mutable std::uint64_t inspections_ = 0;
    std::uint64_t fresh_counter_ = 0;
    std::unordered_map<std::string, std::int32_t> node_names_, edge_names_;
    std::vector<JEntry> journal_;
    std::vector<std::size_t> scopes_;
};

}  // namespace rewrite
