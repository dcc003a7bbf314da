#include "strata/scenarios.hpp"

#include <algorithm>
#include <cmath>

#include "strata/error.hpp"
#include "strata/hashing.hpp"

namespace strata {

namespace {

EditEvent vertex_event(VertexId id, double t) {
    EditEvent ev;
    ev.kind = EditKind::AddVertex;
    ev.id = id;
    ev.has_time = true;
    ev.time = t;
    return ev;
}

EditEvent edge_event(EdgeId id, VertexId u, VertexId v, double t) {
    EditEvent ev;
    ev.kind = EditKind::AddEdge;
    ev.id = id;
    ev.u = u;
    ev.v = v;
    ev.has_time = true;
    ev.time = t;
    return ev;
}

}  // namespace

std::vector<EditEvent> scenario_cube(int n) {
    if (n < 1) throw error("cube scenario needs n >= 1");
    std::vector<EditEvent> out;
    const auto vid = [n](int i, int j, int k) {
        return static_cast<VertexId>((i * n + j) * n + k);
    };
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) out.push_back(vertex_event(vid(i, j, k), 0.0));
    EdgeId eid = 0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            for (int k = 0; k < n; ++k) {
                const VertexId v = vid(i, j, k);
                if (i + 1 < n) out.push_back(edge_event(eid++, v, vid(i + 1, j, k), 0.0));
                if (j + 1 < n) out.push_back(edge_event(eid++, v, vid(i, j + 1, k), 0.0));
                if (k + 1 < n) out.push_back(edge_event(eid++, v, vid(i, j, k + 1), 0.0));
            }
        }
    }
    return out;
}

std::vector<EditEvent> scenario_gnp(int n, double p_max, double duration,
                                    std::uint64_t seed) {
    if (n < 1) throw error("gnp scenario needs n >= 1");
    if (!(p_max > 0.0 && p_max <= 1.0)) throw error("gnp scenario needs p_max in (0, 1]");
    if (duration < 0.0) throw error("gnp scenario needs duration >= 0");

    std::vector<EditEvent> out;
    for (int i = 0; i < n; ++i) out.push_back(vertex_event(i, 0.0));

    struct Arrival {
        double t;
        VertexId u, v;
    };
    std::vector<Arrival> arrivals;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double trigger = unit_double(mix64(seed, static_cast<std::uint64_t>(i),
                                                     static_cast<std::uint64_t>(j)));
            if (trigger < p_max)
                arrivals.push_back({duration * trigger / p_max, i, j});
        }
    }
    std::sort(arrivals.begin(), arrivals.end(), [](const Arrival& a, const Arrival& b) {
        if (a.t != b.t) return a.t < b.t;
        return std::pair(a.u, a.v) < std::pair(b.u, b.v);
    });
    EdgeId eid = 0;
    for (const Arrival& a : arrivals) out.push_back(edge_event(eid++, a.u, a.v, a.t));
    return out;
}

std::vector<EditEvent> scenario_tree(int count, double duration, std::uint64_t seed) {
    if (count < 1) throw error("tree scenario needs count >= 1");
    if (duration < 0.0) throw error("tree scenario needs duration >= 0");

    struct Node {
        double key;
        int left = -1, right = -1;
    };
    std::vector<Node> nodes;
    nodes.reserve(count);

    std::vector<EditEvent> out;
    EdgeId eid = 0;
    for (int k = 0; k < count; ++k) {
        const double key = unit_double(mix64(seed, static_cast<std::uint64_t>(k)));
        const double t = duration * std::sqrt(static_cast<double>(k) / count);
        out.push_back(vertex_event(k, t));
        if (k > 0) {
            int at = 0;
            for (;;) {
                int& next = (key < nodes[at].key) ? nodes[at].left : nodes[at].right;
                if (next == -1) {
                    next = k;
                    break;
                }
                at = next;
            }
            out.push_back(edge_event(eid++, at, k, t));
        }
        nodes.push_back({key});
    }
    return out;
}

}  // namespace strata
