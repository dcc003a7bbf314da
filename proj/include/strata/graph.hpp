#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "strata/error.hpp"

namespace strata {

using VertexId = std::int64_t;
using EdgeId = std::int64_t;

enum class EditKind { AddVertex, RemoveVertex, AddEdge, RemoveEdge };

// One structural edit.  For edge events u/v carry the endpoints (in insertion
// order, which doubles as the direction for the optional gravity force); remove
// events keep them so downstream consumers need no lookups into drained state.
struct EditEvent {
    EditKind kind;
    std::int64_t id = -1;  // vertex id for vertex events, edge id for edge events
    VertexId u = -1, v = -1;
    bool has_time = false;
    double time = 0.0;
};

// Undirected simple graph with integer multiplicities on edges.
//
// The same structure serves every level of the chain: the base graph keeps all
// counts at 1 (parallel edges are rejected), while coarse graphs accumulate the
// number of distinct finer edges crossing each pair via bump/debump.  Ids are
// never reused within a run.  Every mutation appends to an event log that
// consumers drain by cursor.
class Graph {
  public:
    struct Edge {
        VertexId u, v;  // insertion order (direction metadata); identity is the
                        // unordered pair
        int count = 1;
    };

    // --- mutations -------------------------------------------------------
    VertexId add_vertex();
    void add_vertex(VertexId id);  // explicit id (event replay); throws if taken
    EdgeId add_edge(VertexId u, VertexId v);
    void add_edge(EdgeId id, VertexId u, VertexId v);
    void remove_edge(EdgeId id);
    // Removes incident edges first (each logged), then the vertex.
    void remove_vertex(VertexId id);

    // Multiplicity interface used by coarsening: increment the count of the
    // unordered pair, creating (and logging) the edge at 0 -> 1; decrement,
    // removing (and logging) at 1 -> 0.
    EdgeId bump_edge(VertexId u, VertexId v);
    void debump_edge(VertexId u, VertexId v);

    // --- queries ----------------------------------------------------------
    bool has_vertex(VertexId id) const { return adj_.contains(id); }
    bool has_edge(EdgeId id) const { return edges_.contains(id); }
    std::optional<EdgeId> edge_between(VertexId u, VertexId v) const;
    const Edge& edge(EdgeId id) const;
    int degree(VertexId id) const;  // number of distinct incident edges
    std::size_t num_vertices() const { return adj_.size(); }
    std::size_t num_edges() const { return edges_.size(); }

    // neighbor vertex -> edge id
    const std::unordered_map<VertexId, EdgeId>& adjacency(VertexId id) const;
    const std::unordered_map<EdgeId, Edge>& edges() const { return edges_; }
    std::vector<VertexId> vertex_ids_sorted() const;

    // --- event log --------------------------------------------------------
    const std::vector<EditEvent>& log() const { return log_; }

  private:
    std::unordered_map<VertexId, std::unordered_map<VertexId, EdgeId>> adj_;
    std::unordered_map<EdgeId, Edge> edges_;
    std::vector<EditEvent> log_;
    VertexId next_vertex_ = 0;
    EdgeId next_edge_ = 0;
};

}  // namespace strata
