#pragma once

#include <cstdint>
#include <vector>

#include "strata/events.hpp"

namespace strata {

// Built-in event streams for demos, benchmarks and tests.  All of them emit
// timed events sorted by time; vertex ids and edge ids each count up from 0.

// n x n x n lattice with 6-neighbour connectivity, everything at t = 0.
std::vector<EditEvent> scenario_cube(int n);

// Sparse random graph grown over [0, duration]: each unordered pair (i, j)
// draws a stateless uniform trigger in [0, 1) and, if trigger < p_max, gains
// an edge at time duration * trigger / p_max.  Once the stream has fully
// played, each pair is connected independently with probability p_max.
std::vector<EditEvent> scenario_gnp(int n, double p_max, double duration,
                                    std::uint64_t seed);

// Binary search tree grown by inserting `count` random keys; vertex k arrives
// at duration * sqrt(k / count), so the insertion rate accelerates while the
// tree grows.  Every vertex after the root brings one edge from its parent.
std::vector<EditEvent> scenario_tree(int count, double duration,
                                     std::uint64_t seed);

}  // namespace strata
