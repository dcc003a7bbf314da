#pragma once

#include <array>
#include <functional>
#include <queue>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "strata/graph.hpp"
#include "strata/priority.hpp"

namespace strata {

// Maintains a maximal matching on a fine graph under edits, and the coarse
// graph obtained by contracting matched edges, incrementally.
//
// The matching is the unique greedy one induced by the random edge order: an
// edge is matched exactly when every edge that shares one of its endpoints and
// precedes it in the order is unmatched (the empty conjunction holds, so an
// edge with no earlier neighbor is always matched).  After an edit, only edges
// whose condition may have changed are re-evaluated: they sit in a max-heap
// keyed by priority and are drained earliest-in-order first, so by the time an
// edge is evaluated all of its predecessors are final.  The result at
// quiescence therefore depends only on the current graph and the seed, never
// on edit history.
//
// Every fine vertex always has a coarse image: either a merged pair {v1,v2}
// (the endpoints of a matched edge) or a singleton {v}.  Isolated vertices
// keep their singleton image until the vertex itself is removed.  A coarse
// edge (U,W) carries the number of distinct fine edges with one endpoint in U
// and the other in W; it exists while that count is positive.  Coarse vertex
// ids are freshly allocated on every merge/split, so a coarse id never changes
// meaning mid-run.
//
// The coarsener never reads the fine Graph object.  It keeps its own mirror of
// the fine structure, advanced one event at a time, so that batches of edits
// can be delivered from a log without the live graph racing ahead of the
// bookkeeping.
class Coarsener {
  public:
    struct Stats {
        std::uint64_t reevals = 0;       // match-equation evaluations in propagate()
        std::uint64_t queue_pushes = 0;
        std::uint64_t queue_pops = 0;    // including stale entries skipped
        std::uint64_t matches = 0;
        std::uint64_t unmatches = 0;
    };

    // Optional replacement for the hashed priority value, keyed by the fine
    // edge's endpoints; used by tests that need a prescribed edge order.
    using PriorityOverride =
        std::function<std::optional<double>(VertexId u, VertexId v)>;

    Coarsener(Graph& coarse, std::uint64_t seed);

    // Feed one fine-graph edit (the edit must already be reflected in whatever
    // produced it; the coarsener updates its own mirror).  Queued re-evaluations
    // run on the next propagate().
    void apply_event(const EditEvent& ev);

    // Drain the pending queue to quiescence.
    void propagate();

    // Consume any unseen events from a fine graph's log, then propagate.
    void sync(const Graph& fine);

    // --- queries ------------------------------------------------------------
    VertexId parent(VertexId fine_id) const;
    bool has_parent(VertexId fine_id) const { return parent_.contains(fine_id); }
    // Fine members of a coarse vertex (1 or 2 entries).
    std::vector<VertexId> members(VertexId coarse_id) const;
    bool is_matched(EdgeId fine_edge) const;
    std::vector<EdgeId> matched_edges_sorted() const;
    Priority priority_of(EdgeId fine_edge) const;
    std::size_t pending() const { return queue_.size(); }

    // Fine vertices whose coarse image changed since the last clear; the layout
    // rebuild uses this to know which displacements to re-derive.
    const std::vector<VertexId>& reparented() const { return reparented_; }
    void clear_reparented() { reparented_.clear(); }

    const Stats& stats() const { return stats_; }
    void reset_stats() { stats_ = {}; }
    // When set, propagate() records the ids of edges it evaluates.
    void record_evaluations(std::vector<EdgeId>* sink) { eval_sink_ = sink; }

    void set_priority_override(PriorityOverride fn) { override_ = std::move(fn); }

    // Canonical description of the matching and coarse graph: vertex partition
    // as sorted member lists, matched edges as sorted endpoint pairs, coarse
    // edges as (members, members, count) triples — comparable across histories.
    nlohmann::json dump() const;

  private:
    struct EdgeInfo {
        VertexId u, v;
        Priority pri;
        bool matched = false;
        std::uint32_t stamp = 0;  // bumped on enqueue; stale heap entries skip
    };
    struct QueueEntry {
        Priority pri;
        EdgeId edge;
        std::uint32_t stamp;
    };
    struct QueueCmp {
        // std::priority_queue keeps the *largest* element on top, so "less
        // than" here means "evaluated later".
        bool operator()(const QueueEntry& x, const QueueEntry& y) const {
            return dominates(y.pri, x.pri);
        }
    };

    Priority make_priority(VertexId u, VertexId v) const;
    void enqueue(EdgeId e);
    void enqueue_dependents(VertexId u, VertexId v, const Priority& pri);
    bool match_condition(const EdgeInfo& e) const;
    void do_match(EdgeId e);
    void do_unmatch(EdgeId e, VertexId v1, VertexId v2);
    VertexId fresh_singleton(VertexId fine_id);
    void rederive_coarse_edges(VertexId fine_id, VertexId skip_other);

    void on_add_vertex(VertexId v);
    void on_remove_vertex(VertexId v);
    void on_add_edge(EdgeId id, VertexId u, VertexId v);
    void on_remove_edge(EdgeId id);

    Graph& coarse_;
    std::uint64_t seed_;
    PriorityOverride override_;

    // Mirror of the fine graph.
    std::unordered_map<EdgeId, EdgeInfo> edges_;
    std::unordered_map<VertexId, std::unordered_map<VertexId, EdgeId>> adj_;

    std::unordered_map<VertexId, VertexId> parent_;
    std::unordered_map<VertexId, std::array<VertexId, 2>> members_;  // [1] = -1 for singletons

    std::priority_queue<QueueEntry, std::vector<QueueEntry>, QueueCmp> queue_;
    std::size_t log_cursor_ = 0;
    std::vector<VertexId> reparented_;
    Stats stats_;
    std::vector<EdgeId>* eval_sink_ = nullptr;
};

}  // namespace strata
