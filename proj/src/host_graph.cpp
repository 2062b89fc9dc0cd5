#include "rewrite/host_graph.hpp"

#include <cassert>

namespace rewrite {

// --- raw list plumbing ------------------------------------------------------

void HostGraph::bucket_append(std::int32_t slot) {
    if (legacy_) return;
    NodeRec& n = nodes_[slot];
    std::int32_t& head = bucket_head_for(n);
    std::int32_t& tail = bucket_tail_for(n);
    n.prev_ = tail;
    n.next_ = -1;
    if (tail >= 0)
        nodes_[tail].next_ = slot;
    else
        head = slot;
    tail = slot;
}

void HostGraph::bucket_unlink(std::int32_t slot) {
    if (legacy_) return;
    NodeRec& n = nodes_[slot];
    std::int32_t& head = bucket_head_for(n);
    std::int32_t& tail = bucket_tail_for(n);
    if (n.prev_ >= 0)
        nodes_[n.prev_].next_ = n.next_;
    else
        head = n.next_;
    if (n.next_ >= 0)
        nodes_[n.next_].prev_ = n.prev_;
    else
        tail = n.prev_;
    n.prev_ = n.next_ = -1;
}

void HostGraph::bucket_link_between(std::int32_t slot, std::int32_t prev, std::int32_t next) {
    if (legacy_) return;
    NodeRec& n = nodes_[slot];
    std::int32_t& head = bucket_head_for(n);
    std::int32_t& tail = bucket_tail_for(n);
    n.prev_ = prev;
    n.next_ = next;
    if (prev >= 0)
        nodes_[prev].next_ = slot;
    else
        head = slot;
    if (next >= 0)
        nodes_[next].prev_ = slot;
    else
        tail = slot;
}

void HostGraph::root_append(std::int32_t slot) {
    NodeRec& n = nodes_[slot];
    n.root_prev_ = root_tail_;
    n.root_next_ = -1;
    if (root_tail_ >= 0)
        nodes_[root_tail_].root_next_ = slot;
    else
        root_head_ = slot;
    root_tail_ = slot;
}

void HostGraph::root_unlink(std::int32_t slot) {
    NodeRec& n = nodes_[slot];
    if (n.root_prev_ >= 0)
        nodes_[n.root_prev_].root_next_ = n.root_next_;
    else
        root_head_ = n.root_next_;
    if (n.root_next_ >= 0)
        nodes_[n.root_next_].root_prev_ = n.root_prev_;
    else
        root_tail_ = n.root_prev_;
    n.root_prev_ = n.root_next_ = -1;
}

void HostGraph::root_link_between(std::int32_t slot, std::int32_t prev, std::int32_t next) {
    NodeRec& n = nodes_[slot];
    n.root_prev_ = prev;
    n.root_next_ = next;
    if (prev >= 0)
        nodes_[prev].root_next_ = slot;
    else
        root_head_ = slot;
    if (next >= 0)
        nodes_[next].root_prev_ = slot;
    else
        root_tail_ = slot;
}

void HostGraph::cell_append(std::int32_t eslot) {
    EdgeRec& e = edges_[eslot];
    int row = edge_row(e.mark_);
    if (e.src_ == e.tgt_) {
        EdgeCell& cell = nodes_[e.src_].cells_[row][int(Dir::loop)];
        e.sprev_ = cell.tail;
        e.snext_ = -1;
        if (cell.tail >= 0)
            edges_[cell.tail].snext_ = eslot;
        else
            cell.head = eslot;
        cell.tail = eslot;
        e.tprev_ = e.tnext_ = -1;
        return;
    }
    EdgeCell& out = nodes_[e.src_].cells_[row][int(Dir::out)];
    e.sprev_ = out.tail;
    e.snext_ = -1;
    if (out.tail >= 0)
        edges_[out.tail].snext_ = eslot;
    else
        out.head = eslot;
    out.tail = eslot;
    EdgeCell& in = nodes_[e.tgt_].cells_[row][int(Dir::in)];
    e.tprev_ = in.tail;
    e.tnext_ = -1;
    if (in.tail >= 0)
        edges_[in.tail].tnext_ = eslot;
    else
        in.head = eslot;
    in.tail = eslot;
}

void HostGraph::cell_unlink(std::int32_t eslot) {
    EdgeRec& e = edges_[eslot];
    int row = edge_row(e.mark_);
    if (e.src_ == e.tgt_) {
        EdgeCell& cell = nodes_[e.src_].cells_[row][int(Dir::loop)];
        if (e.sprev_ >= 0)
            edges_[e.sprev_].snext_ = e.snext_;
        else
            cell.head = e.snext_;
        if (e.snext_ >= 0)
            edges_[e.snext_].sprev_ = e.sprev_;
        else
            cell.tail = e.sprev_;
        e.sprev_ = e.snext_ = -1;
        return;
    }
    EdgeCell& out = nodes_[e.src_].cells_[row][int(Dir::out)];
    if (e.sprev_ >= 0)
        edges_[e.sprev_].snext_ = e.snext_;
    else
        out.head = e.snext_;
    if (e.snext_ >= 0)
        edges_[e.snext_].sprev_ = e.sprev_;
    else
        out.tail = e.sprev_;
    EdgeCell& in = nodes_[e.tgt_].cells_[row][int(Dir::in)];
    if (e.tprev_ >= 0)
        edges_[e.tprev_].tnext_ = e.tnext_;
    else
        in.head = e.tnext_;
    if (e.tnext_ >= 0)
        edges_[e.tnext_].tprev_ = e.tprev_;
    else
        in.tail = e.tprev_;
    e.sprev_ = e.snext_ = e.tprev_ = e.tnext_ = -1;
}

void HostGraph::cell_link_between(std::int32_t eslot, std::int32_t sprev, std::int32_t snext,
                                  std::int32_t tprev, std::int32_t tnext) {
    EdgeRec& e = edges_[eslot];
    int row = edge_row(e.mark_);
    bool loop = e.src_ == e.tgt_;
    EdgeCell& scell = nodes_[e.src_].cells_[row][int(loop ? Dir::loop : Dir::out)];
    e.sprev_ = sprev;
    e.snext_ = snext;
    if (sprev >= 0)
        edges_[sprev].snext_ = eslot;
    else
        scell.head = eslot;
    if (snext >= 0)
        edges_[snext].sprev_ = eslot;
    else
        scell.tail = eslot;
    if (loop) return;
    EdgeCell& tcell = nodes_[e.tgt_].cells_[row][int(Dir::in)];
    e.tprev_ = tprev;
    e.tnext_ = tnext;
    if (tprev >= 0)
        edges_[tprev].tnext_ = eslot;
    else
        tcell.head = eslot;
    if (tnext >= 0)
        edges_[tnext].tprev_ = eslot;
    else
        tcell.tail = eslot;
}

std::string HostGraph::mint_name(bool for_node) {
    const auto& map = for_node ? node_names_ : edge_names_;
    for (;;) {
        std::string candidate = "_" + std::to_string(fresh_counter_++);
        if (map.find(candidate) == map.end()) return candidate;
    }
}

// --- mutation ---------------------------------------------------------------

NodeId HostGraph::add_node(HostList label, Mark mark, bool rooted, std::string name) {
    if (!node_legal(mark)) throw ConstraintError("mark not legal on a node");
    if (name.empty()) name = mint_name(true);
    if (node_names_.count(name)) throw ConstraintError("duplicate node name: " + name);
    std::int32_t slot;
    if (!free_nodes_.empty()) {
        slot = free_nodes_.back();
        free_nodes_.pop_back();
    } else {
        slot = std::int32_t(nodes_.size());
        nodes_.emplace_back();
    }
    NodeRec& n = nodes_[slot];
    n.label_ = std::move(label);
    n.name_ = name;
    n.mark_ = mark;
    n.rooted_ = rooted;
    n.matched_ = false;
    n.alive_ = true;
    n.in_deg_ = n.out_deg_ = 0;
    bucket_append(slot);
    if (rooted) root_append(slot);
    node_names_.emplace(std::move(name), slot);
    ++node_count_;
    if (recording()) {
        JEntry j;
        j.kind = JEntry::Kind::node_added;
        j.slot = slot;
        j.gen = n.gen_;
        journal_.push_back(std::move(j));
    }
    return NodeId{slot, n.gen_};
}

void HostGraph::delete_node(NodeId id) {
    NodeRec& n = node(id);
    if (n.in_deg_ != 0 || n.out_deg_ != 0)
        throw ConstraintError("node still has incident edges");
    if (recording()) {
        JEntry j;
        j.kind = JEntry::Kind::node_deleted;
        j.slot = id.slot;
        j.gen = n.gen_;
        j.old_mark = n.mark_;
        j.old_rooted = n.rooted_;
        j.old_label = n.label_;
        j.old_name = n.name_;
        j.a = n.prev_;
        j.b = n.next_;
        j.c = n.root_prev_;
        j.d = n.root_next_;
        journal_.push_back(std::move(j));
    }
    bucket_unlink(id.slot);
    if (n.rooted_) root_unlink(id.slot);
    node_names_.erase(n.name_);
    n.label_.clear();
    n.name_.clear();
    n.alive_ = false;
    ++n.gen_;
    free_nodes_.push_back(id.slot);
    --node_count_;
}

EdgeId HostGraph::add_edge(NodeId src, NodeId tgt, HostList label, Mark mark, std::string name) {
    if (!edge_legal(mark)) throw ConstraintError("mark not legal on an edge");
    NodeRec& s = node(src);
    NodeRec& t = node(tgt);
    if (name.empty()) name = mint_name(false);
    if (edge_names_.count(name)) throw ConstraintError("duplicate edge name: " + name);
    std::int32_t slot;
    if (!free_edges_.empty()) {
        slot = free_edges_.back();
        free_edges_.pop_back();
    } else {
        slot = std::int32_t(edges_.size());
        edges_.emplace_back();
    }
    EdgeRec& e = edges_[slot];
    e.label_ = std::move(label);
    e.name_ = name;
    e.mark_ = mark;
    e.matched_ = false;
    e.alive_ = true;
    e.src_ = src.slot;
    e.tgt_ = tgt.slot;
    cell_append(slot);
    s.out_deg_ += 1;
    t.in_deg_ += 1;
    edge_names_.emplace(std::move(name), slot);
    ++edge_count_;
    if (recording()) {
        JEntry j;
        j.kind = JEntry::Kind::edge_added;
        j.slot = slot;
        j.gen = e.gen_;
        journal_.push_back(std::move(j));
    }
    return EdgeId{slot, e.gen_};
}

void HostGraph::delete_edge(EdgeId id) {
    EdgeRec& e = edge(id);
    if (recording()) {
        JEntry j;
        j.kind = JEntry::Kind::edge_deleted;
        j.slot = id.slot;
        j.gen = e.gen_;
        j.old_mark = e.mark_;
        j.old_label = e.label_;
        j.old_name = e.name_;
        j.src = e.src_;
        j.tgt = e.tgt_;
        j.a = e.sprev_;
        j.b = e.snext_;
        j.c = e.tprev_;
        j.d = e.tnext_;
        journal_.push_back(std::move(j));
    }
    cell_unlink(id.slot);
    nodes_[e.src_].out_deg_ -= 1;
    nodes_[e.tgt_].in_deg_ -= 1;
    edge_names_.erase(e.name_);
    e.label_.clear();
    e.name_.clear();
    e.alive_ = false;
    ++e.gen_;
    free_edges_.push_back(id.slot);
    --edge_count_;
}

void HostGraph::relabel_node(NodeId id, HostList label) {
    NodeRec& n = node(id);
    if (n.label_ == label) return;
    if (recording()) {
        JEntry j;
        j.kind = JEntry::Kind::node_relabeled;
        j.slot = id.slot;
        j.gen = n.gen_;
        j.old_label = std::move(n.label_);
        journal_.push_back(std::move(j));
    }
    n.label_ = std::move(label);
}

void HostGraph::remark_node(NodeId id, Mark mark) {
    if (!node_legal(mark)) throw ConstraintError("mark not legal on a node");
    NodeRec& n = node(id);
    if (n.mark_ == mark) return;
    if (recording()) {
        JEntry j;
        j.kind = JEntry::Kind::node_remarked;
        j.slot = id.slot;
        j.gen = n.gen_;
        j.old_mark = n.mark_;
        j.a = n.prev_;
        j.b = n.next_;
        journal_.push_back(std::move(j));
    }
    if (legacy_) {
        // The single legacy list is not keyed by mark; the node keeps its place.
        n.mark_ = mark;
        return;
    }
    bucket_unlink(id.slot);
    n.mark_ = mark;
    bucket_append(id.slot);
}

void HostGraph::set_rooted(NodeId id, bool rooted) {
    NodeRec& n = node(id);
    if (n.rooted_ == rooted) return;
    if (recording()) {
        JEntry j;
        j.kind = JEntry::Kind::node_rerooted;
        j.slot = id.slot;
        j.gen = n.gen_;
        j.old_rooted = n.rooted_;
        j.c = n.root_prev_;
        j.d = n.root_next_;
        journal_.push_back(std::move(j));
    }
    if (rooted)
        root_append(id.slot);
    else
        root_unlink(id.slot);
    n.rooted_ = rooted;
}

void HostGraph::relabel_edge(EdgeId id, HostList label) {
    EdgeRec& e = edge(id);
    if (e.label_ == label) return;
    if (recording()) {
        JEntry j;
        j.kind = JEntry::Kind::edge_relabeled;
        j.slot = id.slot;
        j.gen = e.gen_;
        j.old_label = std::move(e.label_);
        journal_.push_back(std::move(j));
    }
    e.label_ = std::move(label);
}

void HostGraph::remark_edge(EdgeId id, Mark mark) {
    if (!edge_legal(mark)) throw ConstraintError("mark not legal on an edge");
    EdgeRec& e = edge(id);
    if (e.mark_ == mark) return;
    if (recording()) {
        JEntry j;
        j.kind = JEntry::Kind::edge_remarked;
        j.slot = id.slot;
        j.gen = e.gen_;
        j.old_mark = e.mark_;
        j.a = e.sprev_;
        j.b = e.snext_;
        j.c = e.tprev_;
        j.d = e.tnext_;
        journal_.push_back(std::move(j));
    }
    cell_unlink(id.slot);
    e.mark_ = mark;
    cell_append(id.slot);
}

// --- cursors ------------------------------------------------------------------

NodeId HostGraph::first_node(Mark mark) const {
    if (!node_legal(mark)) throw ConstraintError("mark not legal on a node");
    if (legacy_) return legacy_scan(0, mark);
    std::int32_t s = bucket_head_[node_bucket(mark)];
    if (s < 0) return {};
    ++inspections_;
    return NodeId{s, nodes_[s].gen_};
}

NodeId HostGraph::next_node(NodeId id, Mark mark) const {
    node(id);  // validity check
    if (legacy_) return legacy_scan(id.slot + 1, mark);
    std::int32_t s = nodes_[id.slot].next_;
    if (s < 0) return {};
    ++inspections_;
    return NodeId{s, nodes_[s].gen_};
}

NodeId HostGraph::legacy_scan(std::int32_t from, Mark mark) const {
    for (std::int32_t s = from; s < std::int32_t(nodes_.size()); ++s) {
        if (!nodes_[s].alive_) continue;
        ++inspections_;
        if (nodes_[s].mark_ == mark) return NodeId{s, nodes_[s].gen_};
    }
    return {};
}

EdgeId HostGraph::first_edge(NodeId id, Mark mark, Dir dir) const {
    if (!edge_legal(mark)) throw ConstraintError("mark not legal on an edge");
    std::int32_t e = node(id).cells_[edge_row(mark)][int(dir)].head;
    if (e < 0) return {};
    ++inspections_;
    return EdgeId{e, edges_[e].gen_};
}

EdgeId HostGraph::next_edge(EdgeId id, Dir dir) const {
    const EdgeRec& e = edge(id);
    std::int32_t n = dir == Dir::in ? e.tnext_ : e.snext_;
    if (n < 0) return {};
    ++inspections_;
    return EdgeId{n, edges_[n].gen_};
}

namespace {
constexpr Mark kAnyRows[4] = {Mark::red, Mark::green, Mark::blue, Mark::dashed};

int any_row_position(Mark m) {
    for (int i = 0; i < 4; ++i)
        if (kAnyRows[i] == m) return i;
    return -1;
}
}  // namespace

EdgeId HostGraph::first_edge_any(NodeId id, Dir dir) const {
    const NodeRec& n = node(id);
    for (Mark m : kAnyRows) {
        std::int32_t e = n.cells_[edge_row(m)][int(dir)].head;
        if (e >= 0) {
            ++inspections_;
            return EdgeId{e, edges_[e].gen_};
        }
    }
    return {};
}

EdgeId HostGraph::next_edge_any(EdgeId id, Dir dir) const {
    const EdgeRec& e = edge(id);
    std::int32_t n = dir == Dir::in ? e.tnext_ : e.snext_;
    if (n >= 0) {
        ++inspections_;
        return EdgeId{n, edges_[n].gen_};
    }
    std::int32_t nslot = dir == Dir::in ? e.tgt_ : e.src_;
    const NodeRec& rec = nodes_[nslot];
    for (int row = any_row_position(e.mark_) + 1; row < 4; ++row) {
        std::int32_t head = rec.cells_[edge_row(kAnyRows[row])][int(dir)].head;
        if (head >= 0) {
            ++inspections_;
            return EdgeId{head, edges_[head].gen_};
        }
    }
    return {};
}

std::vector<NodeId> HostGraph::all_nodes() const {
    std::vector<NodeId> out;
    out.reserve(std::size_t(node_count_));
    for (std::int32_t s = 0; s < std::int32_t(nodes_.size()); ++s)
        if (nodes_[s].alive_) out.push_back(NodeId{s, nodes_[s].gen_});
    return out;
}

std::vector<EdgeId> HostGraph::all_edges() const {
    std::vector<EdgeId> out;
    out.reserve(std::size_t(edge_count_));
    for (std::int32_t s = 0; s < std::int32_t(edges_.size()); ++s)
        if (edges_[s].alive_) out.push_back(EdgeId{s, edges_[s].gen_});
    return out;
}

// --- journal --------------------------------------------------------------------

void HostGraph::commit_scope(std::size_t mark) {
    assert(!scopes_.empty() && scopes_.back() == mark);
    (void)mark;
    scopes_.pop_back();
    if (scopes_.empty()) journal_.clear();
}

void HostGraph::rollback_scope(std::size_t mark) {
    assert(!scopes_.empty() && scopes_.back() == mark);
    scopes_.pop_back();
    while (journal_.size() > mark) {
        undo(journal_.back());
        journal_.pop_back();
    }
}

void HostGraph::undo(const JEntry& j) {
    switch (j.kind) {
    case JEntry::Kind::node_added: {
        NodeRec& n = nodes_[j.slot];
        assert(n.alive_ && n.in_deg_ == 0 && n.out_deg_ == 0);
        bucket_unlink(j.slot);
        if (n.rooted_) root_unlink(j.slot);
        node_names_.erase(n.name_);
        n.label_.clear();
        n.name_.clear();
        n.alive_ = false;
        ++n.gen_;
        free_nodes_.push_back(j.slot);
        --node_count_;
        break;
    }
    case JEntry::Kind::node_deleted: {
        assert(!free_nodes_.empty() && free_nodes_.back() == j.slot);
        free_nodes_.pop_back();
        NodeRec& n = nodes_[j.slot];
        n.label_ = j.old_label;
        n.name_ = j.old_name;
        n.gen_ = j.gen;
        n.mark_ = j.old_mark;
        n.rooted_ = j.old_rooted;
        n.matched_ = false;
        n.alive_ = true;
        n.in_deg_ = n.out_deg_ = 0;
        bucket_link_between(j.slot, j.a, j.b);
        if (n.rooted_) root_link_between(j.slot, j.c, j.d);
        node_names_.emplace(n.name_, j.slot);
        ++node_count_;
        break;
    }
    case JEntry::Kind::edge_added: {
        EdgeRec& e = edges_[j.slot];
        assert(e.alive_);
        cell_unlink(j.slot);
        nodes_[e.src_].out_deg_ -= 1;
        nodes_[e.tgt_].in_deg_ -= 1;
        edge_names_.erase(e.name_);
        e.label_.clear();
        e.name_.clear();
        e.alive_ = false;
        ++e.gen_;
        free_edges_.push_back(j.slot);
        --edge_count_;
        break;
    }
    case JEntry::Kind::edge_deleted: {
        assert(!free_edges_.empty() && free_edges_.back() == j.slot);
        free_edges_.pop_back();
        EdgeRec& e = edges_[j.slot];
        e.label_ = j.old_label;
        e.name_ = j.old_name;
        e.gen_ = j.gen;
        e.mark_ = j.old_mark;
        e.matched_ = false;
        e.alive_ = true;
        e.src_ = j.src;
        e.tgt_ = j.tgt;
        cell_link_between(j.slot, j.a, j.b, j.c, j.d);
        nodes_[e.src_].out_deg_ += 1;
        nodes_[e.tgt_].in_deg_ += 1;
        edge_names_.emplace(e.name_, j.slot);
        ++edge_count_;
        break;
    }
    case JEntry::Kind::node_relabeled:
        nodes_[j.slot].label_ = j.old_label;
        break;
    case JEntry::Kind::node_remarked: {
        NodeRec& n = nodes_[j.slot];
        if (legacy_) {
            n.mark_ = j.old_mark;
            break;
        }
        bucket_unlink(j.slot);
        n.mark_ = j.old_mark;
        bucket_link_between(j.slot, j.a, j.b);
        break;
    }
    case JEntry::Kind::node_rerooted: {
        NodeRec& n = nodes_[j.slot];
        if (n.rooted_) root_unlink(j.slot);
        n.rooted_ = j.old_rooted;
        if (j.old_rooted) root_link_between(j.slot, j.c, j.d);
        break;
    }
    case JEntry::Kind::edge_relabeled:
        edges_[j.slot].label_ = j.old_label;
        break;
    case JEntry::Kind::edge_remarked: {
        cell_unlink(j.slot);
        edges_[j.slot].mark_ = j.old_mark;
        cell_link_between(j.slot, j.a, j.b, j.c, j.d);
        break;
    }
    }
}

}  // namespace rewrite
