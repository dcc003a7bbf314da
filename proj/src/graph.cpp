#include "strata/graph.hpp"

#include <algorithm>

namespace strata {

VertexId Graph::add_vertex() {
    VertexId id = next_vertex_++;
    adj_.emplace(id, std::unordered_map<VertexId, EdgeId>{});
    log_.push_back({EditKind::AddVertex, id});
    return id;
}

void Graph::add_vertex(VertexId id) {
    if (id < 0) throw error("vertex id must be non-negative: " + std::to_string(id));
    if (has_vertex(id)) throw error("vertex id already exists: " + std::to_string(id));
    adj_.emplace(id, std::unordered_map<VertexId, EdgeId>{});
    next_vertex_ = std::max(next_vertex_, id + 1);
    log_.push_back({EditKind::AddVertex, id});
}

EdgeId Graph::add_edge(VertexId u, VertexId v) {
    EdgeId id = next_edge_;
    add_edge(id, u, v);
    return id;
}

void Graph::add_edge(EdgeId id, VertexId u, VertexId v) {
    if (id < 0) throw error("edge id must be non-negative: " + std::to_string(id));
    if (has_edge(id)) throw error("edge id already exists: " + std::to_string(id));
    if (u == v) throw error("self-loop rejected on vertex " + std::to_string(u));
    if (!has_vertex(u)) throw error("add_edge: unknown vertex " + std::to_string(u));
    if (!has_vertex(v)) throw error("add_edge: unknown vertex " + std::to_string(v));
    if (adj_[u].contains(v))
        throw error("duplicate edge rejected: (" + std::to_string(u) + "," + std::to_string(v) +
                    ")");
    edges_.emplace(id, Edge{u, v, 1});
    adj_[u].emplace(v, id);
    adj_[v].emplace(u, id);
    next_edge_ = std::max(next_edge_, id + 1);
    log_.push_back({EditKind::AddEdge, id, u, v});
}

void Graph::remove_edge(EdgeId id) {
    auto it = edges_.find(id);
    if (it == edges_.end()) throw error("remove_edge: unknown edge " + std::to_string(id));
    Edge e = it->second;
    adj_[e.u].erase(e.v);
    adj_[e.v].erase(e.u);
    edges_.erase(it);
    log_.push_back({EditKind::RemoveEdge, id, e.u, e.v});
}

void Graph::remove_vertex(VertexId id) {
    auto it = adj_.find(id);
    if (it == adj_.end()) throw error("remove_vertex: unknown vertex " + std::to_string(id));
    // Expand into edge removals first, in edge-id order for stable logs.
    std::vector<EdgeId> incident;
    incident.reserve(it->second.size());
    for (const auto& [nbr, eid] : it->second) incident.push_back(eid);
    std::sort(incident.begin(), incident.end());
    for (EdgeId eid : incident) remove_edge(eid);
    adj_.erase(id);
    log_.push_back({EditKind::RemoveVertex, id});
}

EdgeId Graph::bump_edge(VertexId u, VertexId v) {
    if (auto eid = edge_between(u, v)) {
        ++edges_[*eid].count;
        return *eid;
    }
    return add_edge(u, v);
}

void Graph::debump_edge(VertexId u, VertexId v) {
    auto eid = edge_between(u, v);
    STRATA_CHECK(eid.has_value(), "debump of absent edge (" + std::to_string(u) + "," +
                                      std::to_string(v) + ")");
    Edge& e = edges_[*eid];
    if (--e.count == 0) remove_edge(*eid);
}

std::optional<EdgeId> Graph::edge_between(VertexId u, VertexId v) const {
    auto it = adj_.find(u);
    if (it == adj_.end()) return std::nullopt;
    auto jt = it->second.find(v);
    if (jt == it->second.end()) return std::nullopt;
    return jt->second;
}

const Graph::Edge& Graph::edge(EdgeId id) const {
    auto it = edges_.find(id);
    if (it == edges_.end()) throw error("edge: unknown edge " + std::to_string(id));
    return it->second;
}

int Graph::degree(VertexId id) const { return static_cast<int>(adjacency(id).size()); }

const std::unordered_map<VertexId, EdgeId>& Graph::adjacency(VertexId id) const {
    auto it = adj_.find(id);
    if (it == adj_.end()) throw error("adjacency: unknown vertex " + std::to_string(id));
    return it->second;
}

std::vector<VertexId> Graph::vertex_ids_sorted() const {
    std::vector<VertexId> ids;
    ids.reserve(adj_.size());
    for (const auto& [id, _] : adj_) ids.push_back(id);
    std::sort(ids.begin(), ids.end());
    return ids;
}

}  // namespace strata
