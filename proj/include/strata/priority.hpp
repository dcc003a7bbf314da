#pragma once

#include "strata/graph.hpp"
#include "strata/hashing.hpp"

namespace strata {

// Random total order on edges.  Each edge gets a real in [0,1) hashed from the
// level seed and its canonical (min,max) endpoint pair; a larger value means the
// edge is considered earlier by the greedy matching (it "dominates" its
// lower-valued neighbors).  Ties — possible only through injected test values —
// fall back to the canonical key, so the order is always strict and total.
struct Priority {
    double value = 0.0;
    VertexId a = -1, b = -1;  // canonical endpoints, a < b

    friend bool operator==(const Priority&, const Priority&) = default;
};

inline Priority edge_priority(std::uint64_t seed, VertexId u, VertexId v) {
    Priority p;
    p.a = u < v ? u : v;
    p.b = u < v ? v : u;
    p.value = unit_double(mix64(seed, static_cast<std::uint64_t>(p.a),
                                static_cast<std::uint64_t>(p.b)));
    return p;
}

// True when e1 is considered before e2 (e1 wins conflicts against e2).
inline bool dominates(const Priority& e1, const Priority& e2) {
    if (e1.value != e2.value) return e1.value > e2.value;
    if (e1.a != e2.a) return e1.a < e2.a;
    return e1.b < e2.b;
}

}  // namespace strata
