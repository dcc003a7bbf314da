#include "strata/coarsen.hpp"

#include <algorithm>

namespace strata {

Coarsener::Coarsener(Graph& coarse, std::uint64_t seed) : coarse_(coarse), seed_(seed) {}

Priority Coarsener::make_priority(VertexId u, VertexId v) const {
    Priority p = edge_priority(seed_, u, v);
    if (override_) {
        if (auto val = override_(u, v)) p.value = *val;
    }
    return p;
}

void Coarsener::apply_event(const EditEvent& ev) {
    switch (ev.kind) {
        case EditKind::AddVertex: on_add_vertex(ev.id); break;
        case EditKind::RemoveVertex: on_remove_vertex(ev.id); break;
        case EditKind::AddEdge: on_add_edge(ev.id, ev.u, ev.v); break;
        case EditKind::RemoveEdge: on_remove_edge(ev.id); break;
    }
}

void Coarsener::sync(const Graph& fine) {
    const auto& log = fine.log();
    for (; log_cursor_ < log.size(); ++log_cursor_) apply_event(log[log_cursor_]);
    propagate();
}

VertexId Coarsener::fresh_singleton(VertexId fine_id) {
    VertexId cid = coarse_.add_vertex();
    parent_[fine_id] = cid;
    members_[cid] = {fine_id, -1};
    return cid;
}

void Coarsener::on_add_vertex(VertexId v) {
    STRATA_CHECK(!parent_.contains(v), "duplicate fine vertex " + std::to_string(v));
    adj_.emplace(v, std::unordered_map<VertexId, EdgeId>{});
    fresh_singleton(v);
}

void Coarsener::on_remove_vertex(VertexId v) {
    auto it = adj_.find(v);
    STRATA_CHECK(it != adj_.end(), "remove of unknown fine vertex " + std::to_string(v));
    STRATA_CHECK(it->second.empty(), "fine vertex removed while edges remain");
    VertexId cid = parent_.at(v);
    STRATA_CHECK(members_.at(cid)[1] == -1, "removed vertex still in a merged pair");
    STRATA_CHECK(coarse_.degree(cid) == 0, "singleton image still has coarse edges");
    coarse_.remove_vertex(cid);
    members_.erase(cid);
    parent_.erase(v);
    adj_.erase(it);
}

void Coarsener::on_add_edge(EdgeId id, VertexId u, VertexId v) {
    STRATA_CHECK(!edges_.contains(id), "duplicate fine edge id " + std::to_string(id));
    STRATA_CHECK(parent_.contains(u) && parent_.contains(v),
                 "edge references unknown fine vertex");
    edges_.emplace(id, EdgeInfo{u, v, make_priority(u, v), false, 0});
    adj_[u][v] = id;
    adj_[v][u] = id;
    VertexId pu = parent_.at(u), pv = parent_.at(v);
    // A new distinct fine edge cannot be internal to a merged pair: the pair
    // exists only while its own fine edge does, and duplicates are rejected.
    STRATA_CHECK(pu != pv, "new fine edge internal to a coarse vertex");
    coarse_.bump_edge(pu, pv);
    enqueue(id);
}

void Coarsener::on_remove_edge(EdgeId id) {
    auto it = edges_.find(id);
    STRATA_CHECK(it != edges_.end(), "remove of unknown fine edge " + std::to_string(id));
    EdgeInfo info = it->second;
    edges_.erase(it);
    adj_[info.u].erase(info.v);
    adj_[info.v].erase(info.u);
    if (info.matched) {
        // Splitting the pair rebuilds both singletons' coarse edges from the
        // mirror (which no longer holds this edge) and queues the dependents.
        do_unmatch(id, info.u, info.v);
    } else {
        coarse_.debump_edge(parent_.at(info.u), parent_.at(info.v));
        enqueue_dependents(info.u, info.v, info.pri);
    }
}

void Coarsener::enqueue(EdgeId e) {
    auto it = edges_.find(e);
    STRATA_CHECK(it != edges_.end(), "enqueue of unknown edge");
    std::uint32_t stamp = ++it->second.stamp;
    queue_.push({it->second.pri, e, stamp});
    ++stats_.queue_pushes;
}

void Coarsener::enqueue_dependents(VertexId u, VertexId v, const Priority& pri) {
    for (VertexId end : {u, v}) {
        auto it = adj_.find(end);
        if (it == adj_.end()) continue;
        for (const auto& [nbr, eid] : it->second) {
            const EdgeInfo& f = edges_.at(eid);
            if (dominates(pri, f.pri)) enqueue(eid);
        }
    }
}

bool Coarsener::match_condition(const EdgeInfo& e) const {
    for (VertexId end : {e.u, e.v}) {
        for (const auto& [nbr, eid] : adj_.at(end)) {
            const EdgeInfo& f = edges_.at(eid);
            if (f.matched && dominates(f.pri, e.pri)) return false;
        }
    }
    return true;
}

void Coarsener::propagate() {
    while (!queue_.empty()) {
        QueueEntry top = queue_.top();
        queue_.pop();
        ++stats_.queue_pops;
        auto it = edges_.find(top.edge);
        if (it == edges_.end() || it->second.stamp != top.stamp) continue;  // stale
        ++stats_.reevals;
        if (eval_sink_) eval_sink_->push_back(top.edge);
        bool want = match_condition(it->second);
        if (want == it->second.matched) continue;
        if (want)
            do_match(top.edge);
        else
            do_unmatch(top.edge, it->second.u, it->second.v);
    }
}

void Coarsener::do_match(EdgeId e) {
    EdgeInfo& info = edges_.at(e);
    STRATA_CHECK(!info.matched, "match of already matched edge");
    VertexId v1 = info.u, v2 = info.v;

    // Any matched neighbor must come later in the order (otherwise the match
    // condition could not have held); it loses its slot now.
    std::vector<EdgeId> evict;
    for (VertexId end : {v1, v2}) {
        for (const auto& [nbr, eid] : adj_.at(end)) {
            const EdgeInfo& f = edges_.at(eid);
            if (!f.matched) continue;
            STRATA_CHECK(dominates(info.pri, f.pri), "matched dominator present at match time");
            evict.push_back(eid);
        }
    }
    for (EdgeId eid : evict) {
        const EdgeInfo& f = edges_.at(eid);
        do_unmatch(eid, f.u, f.v);
    }

    info.matched = true;
    ++stats_.matches;

    VertexId s1 = parent_.at(v1), s2 = parent_.at(v2);
    STRATA_CHECK(s1 != s2, "matching an edge internal to a coarse vertex");
    STRATA_CHECK(members_.at(s1)[1] == -1 && members_.at(s2)[1] == -1,
                 "matched endpoint not a singleton");
    coarse_.remove_vertex(s1);
    coarse_.remove_vertex(s2);
    members_.erase(s1);
    members_.erase(s2);

    VertexId w = coarse_.add_vertex();
    parent_[v1] = w;
    parent_[v2] = w;
    members_[w] = {std::min(v1, v2), std::max(v1, v2)};
    reparented_.push_back(v1);
    reparented_.push_back(v2);

    rederive_coarse_edges(v1, v2);
    rederive_coarse_edges(v2, v1);

    // No dependents are queued here: matching e can only falsify a dependent's
    // condition, and any dependent whose pending evaluation would have matched
    // it re-checks against the new state when popped.
}

void Coarsener::do_unmatch(EdgeId e, VertexId v1, VertexId v2) {
    auto it = edges_.find(e);
    Priority pri;
    if (it != edges_.end()) {
        STRATA_CHECK(it->second.matched, "unmatch of unmatched edge");
        it->second.matched = false;
        pri = it->second.pri;
    } else {
        pri = make_priority(v1, v2);  // edge being deleted; only used for dependents
    }
    ++stats_.unmatches;

    VertexId w = parent_.at(v1);
    STRATA_CHECK(parent_.at(v2) == w, "pair endpoints disagree on coarse image");
    STRATA_CHECK(members_.at(w)[1] != -1, "unmatch of a singleton image");
    coarse_.remove_vertex(w);
    members_.erase(w);

    fresh_singleton(v1);
    fresh_singleton(v2);
    reparented_.push_back(v1);
    reparented_.push_back(v2);

    rederive_coarse_edges(v1, -1);
    rederive_coarse_edges(v2, v1);  // the (v1,v2) edge, if alive, was counted from v1's side

    enqueue_dependents(v1, v2, pri);
}

// Recreate the coarse edges induced by fine edges at `fine_id`, skipping the
// neighbor `skip_other` (used for edges already accounted for by the caller).
// Neighbors are visited in sorted order so coarse edge ids come out in a stable
// order for a given history.
void Coarsener::rederive_coarse_edges(VertexId fine_id, VertexId skip_other) {
    auto it = adj_.find(fine_id);
    if (it == adj_.end()) return;
    std::vector<VertexId> nbrs;
    nbrs.reserve(it->second.size());
    for (const auto& [nbr, eid] : it->second)
        if (nbr != skip_other) nbrs.push_back(nbr);
    std::sort(nbrs.begin(), nbrs.end());
    VertexId me = parent_.at(fine_id);
    for (VertexId nbr : nbrs) {
        VertexId other = parent_.at(nbr);
        if (other == me) continue;  // internal to the merged pair
        coarse_.bump_edge(me, other);
    }
}

VertexId Coarsener::parent(VertexId fine_id) const {
    auto it = parent_.find(fine_id);
    if (it == parent_.end())
        throw error("no coarse image for vertex " + std::to_string(fine_id));
    return it->second;
}

std::vector<VertexId> Coarsener::members(VertexId coarse_id) const {
    auto it = members_.find(coarse_id);
    if (it == members_.end())
        throw error("unknown coarse vertex " + std::to_string(coarse_id));
    if (it->second[1] == -1) return {it->second[0]};
    return {it->second[0], it->second[1]};
}

bool Coarsener::is_matched(EdgeId fine_edge) const {
    auto it = edges_.find(fine_edge);
    return it != edges_.end() && it->second.matched;
}

std::vector<EdgeId> Coarsener::matched_edges_sorted() const {
    std::vector<EdgeId> out;
    for (const auto& [id, info] : edges_)
        if (info.matched) out.push_back(id);
    std::sort(out.begin(), out.end());
    return out;
}

Priority Coarsener::priority_of(EdgeId fine_edge) const {
    auto it = edges_.find(fine_edge);
    if (it == edges_.end()) throw error("unknown fine edge " + std::to_string(fine_edge));
    return it->second.pri;
}

nlohmann::json Coarsener::dump() const {
    using nlohmann::json;
    std::vector<std::vector<VertexId>> parts;
    parts.reserve(members_.size());
    for (const auto& [cid, mem] : members_) {
        if (mem[1] == -1)
            parts.push_back({mem[0]});
        else
            parts.push_back({mem[0], mem[1]});
    }
    std::sort(parts.begin(), parts.end());

    std::vector<std::array<VertexId, 2>> matched;
    for (const auto& [id, info] : edges_)
        if (info.matched) matched.push_back({std::min(info.u, info.v), std::max(info.u, info.v)});
    std::sort(matched.begin(), matched.end());

    std::vector<json> cedges;
    for (const auto& [eid, e] : coarse_.edges()) {
        std::vector<VertexId> mu = members(e.u), mw = members(e.v);
        if (mw < mu) std::swap(mu, mw);
        cedges.push_back(json::array({mu, mw, e.count}));
    }
    std::sort(cedges.begin(), cedges.end(),
              [](const json& x, const json& y) { return x.dump() < y.dump(); });

    json j;
    j["partition"] = parts;
    j["matched"] = matched;
    j["coarse_edges"] = cedges;
    return j;
}

}  // namespace strata
