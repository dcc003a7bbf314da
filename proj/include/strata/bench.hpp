#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "strata/physics.hpp"

namespace strata {

// Incremental-matching cost under random edits of degree-bounded graphs.
// For each (edge count, max degree) cell: build a random graph, then apply
// `ops` random single-edge insertions/deletions, syncing the coarsener after
// every one and recording how many match conditions it re-evaluated.
struct MatchingBenchCell {
    std::size_t edges = 0;
    int max_degree = 0;
    std::size_t ops = 0;
    double mean = 0.0, p50 = 0.0, p90 = 0.0, p99 = 0.0, max = 0.0;
    double seconds = 0.0;  // wall time of the measured ops
};

struct MatchingBenchResult {
    std::vector<MatchingBenchCell> cells;
    nlohmann::json to_json() const;
};

MatchingBenchResult run_matching_bench(const std::vector<std::size_t>& edge_counts,
                                       const std::vector<int>& max_degrees,
                                       std::size_t ops, std::uint64_t seed);

// Steps-to-converge comparison: the same cube scenario, the same finest-level
// starting scatter, run once single-level and once with the full chain.
// Convergence is measured on the exact finest-level potential: the step after
// which every later sample stays within `band` of the final value.
struct ConvergenceCompareConfig {
    int cube_n = 5;
    int multi_levels = 3;
    int seeds = 5;
    std::uint64_t base_seed = 1;
    std::string integrator = "euler";
    double dt = 0.005;
    long max_steps = 6000;
    long sample_stride = 10;
    double band = 0.05;
    double theta = 0.7;
    double init_radius = 0.0;  // <= 0: scale with the cube edge
    PhysicsParams physics;
};

struct ConvergenceComparePair {
    std::uint64_t seed = 0;
    long single_steps = 0, multi_steps = 0;
    double single_final = 0.0, multi_final = 0.0;
};

struct ConvergenceCompareResult {
    std::vector<ConvergenceComparePair> pairs;
    double mean_single_steps = 0.0;
    double mean_multi_steps = 0.0;
    nlohmann::json to_json() const;
};

ConvergenceCompareResult run_convergence_compare(const ConvergenceCompareConfig& cfg);

}  // namespace strata
