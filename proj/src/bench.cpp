#include "strata/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>

#include "strata/coarsen.hpp"
#include "strata/engine.hpp"
#include "strata/error.hpp"
#include "strata/graph.hpp"
#include "strata/hashing.hpp"
#include "strata/scenarios.hpp"

namespace strata {

namespace {

double percentile(std::vector<double> sorted, double q) {
    if (sorted.empty()) return 0.0;
    const std::size_t idx = std::min(
        sorted.size() - 1, static_cast<std::size_t>(q * static_cast<double>(sorted.size())));
    return sorted[idx];
}

}  // namespace

nlohmann::json MatchingBenchResult::to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : cells) {
        nlohmann::json j;
        j["edges"] = c.edges;
        j["max_degree"] = c.max_degree;
        j["ops"] = c.ops;
        j["reevals_mean"] = c.mean;
        j["reevals_p50"] = c.p50;
        j["reevals_p90"] = c.p90;
        j["reevals_p99"] = c.p99;
        j["reevals_max"] = c.max;
        j["seconds"] = c.seconds;
        arr.push_back(std::move(j));
    }
    nlohmann::json out;
    out["matching_bench"] = std::move(arr);
    return out;
}

MatchingBenchResult run_matching_bench(const std::vector<std::size_t>& edge_counts,
                                       const std::vector<int>& max_degrees,
                                       std::size_t ops, std::uint64_t seed) {
    if (ops == 0) throw error("bench needs ops >= 1");
    MatchingBenchResult result;

    for (const std::size_t edges : edge_counts) {
        for (const int d : max_degrees) {
            if (d < 2) throw error("bench max degree must be >= 2");
            std::mt19937_64 rng(mix64(seed, edges, static_cast<std::uint64_t>(d)));

            // Half the degree capacity stays free so rejection sampling of
            // valid endpoints terminates quickly.
            const std::size_t n =
                std::max<std::size_t>(4, 2 * ((2 * edges + d - 1) / d));

            Graph fine;
            Graph coarse;
            Coarsener co(coarse, mix64(seed, 0xc0a12ULL));
            for (std::size_t i = 0; i < n; ++i) fine.add_vertex();

            auto pick_pair = [&](VertexId& u, VertexId& v) {
                for (int tries = 0; tries < 256; ++tries) {
                    u = static_cast<VertexId>(rng() % n);
                    v = static_cast<VertexId>(rng() % n);
                    if (u == v) continue;
                    if (fine.degree(u) >= d || fine.degree(v) >= d) continue;
                    if (fine.edge_between(u, v)) continue;
                    return true;
                }
                return false;
            };

            std::vector<EdgeId> live;
            live.reserve(edges + ops);
            VertexId u, v;
            while (live.size() < edges) {
                if (!pick_pair(u, v))
                    throw error("bench graph generation stalled; lower edges or raise degree");
                live.push_back(fine.add_edge(u, v));
            }
            co.sync(fine);  // setup cost is not measured
            co.reset_stats();

            std::vector<double> per_op;
            per_op.reserve(ops);
            std::uint64_t prev = 0;
            const auto t0 = std::chrono::steady_clock::now();
            for (std::size_t k = 0; k < ops; ++k) {
                const bool removal = (rng() & 1) != 0 && !live.empty();
                if (removal) {
                    const std::size_t idx = rng() % live.size();
                    fine.remove_edge(live[idx]);
                    live[idx] = live.back();
                    live.pop_back();
                } else if (pick_pair(u, v)) {
                    live.push_back(fine.add_edge(u, v));
                } else if (!live.empty()) {
                    const std::size_t idx = rng() % live.size();
                    fine.remove_edge(live[idx]);
                    live[idx] = live.back();
                    live.pop_back();
                }
                co.sync(fine);
                const std::uint64_t now = co.stats().reevals;
                per_op.push_back(static_cast<double>(now - prev));
                prev = now;
            }
            const auto t1 = std::chrono::steady_clock::now();

            MatchingBenchCell cell;
            cell.edges = edges;
            cell.max_degree = d;
            cell.ops = ops;
            double sum = 0.0;
            for (double x : per_op) sum += x;
            cell.mean = sum / static_cast<double>(per_op.size());
            std::vector<double> sorted = per_op;
            std::sort(sorted.begin(), sorted.end());
            cell.p50 = percentile(sorted, 0.50);
            cell.p90 = percentile(sorted, 0.90);
            cell.p99 = percentile(sorted, 0.99);
            cell.max = sorted.back();
            cell.seconds = std::chrono::duration<double>(t1 - t0).count();
            result.cells.push_back(cell);
        }
    }
    return result;
}

nlohmann::json ConvergenceCompareResult::to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& p : pairs) {
        nlohmann::json j;
        j["seed"] = p.seed;
        j["single_steps"] = p.single_steps;
        j["multi_steps"] = p.multi_steps;
        j["single_final_potential"] = p.single_final;
        j["multi_final_potential"] = p.multi_final;
        arr.push_back(std::move(j));
    }
    nlohmann::json out;
    out["pairs"] = std::move(arr);
    out["mean_single_steps"] = mean_single_steps;
    out["mean_multi_steps"] = mean_multi_steps;
    return out;
}

namespace {

// First step after which every later sample stays inside the band around the
// final sample.
long entry_step(const std::vector<std::pair<long, double>>& samples, double band) {
    const double fin = samples.back().second;
    const double tol = band * std::abs(fin);
    std::size_t first_good = samples.size() - 1;
    while (first_good > 0 && std::abs(samples[first_good - 1].second - fin) <= tol)
        --first_good;
    return samples[first_good].first;
}

long run_one(const ConvergenceCompareConfig& cfg, int levels, std::uint64_t seed,
             double& final_potential) {
    RunConfig rc;
    rc.levels = levels;
    rc.integrator = cfg.integrator;
    rc.dt = cfg.dt;
    rc.theta = cfg.theta;
    rc.seed = seed;
    rc.physics = cfg.physics;
    rc.random_init = true;
    // Scatter at roughly the settled lattice extent; a much tighter ball
    // makes the initial repulsion kick violent enough to destabilize fixed-dt
    // integration.
    rc.init_radius = cfg.init_radius > 0.0 ? cfg.init_radius : 1.3 * cfg.cube_n;
    rc.max_steps = cfg.max_steps;

    Engine e(rc);
    e.queue_events(scenario_cube(cfg.cube_n));
    e.apply_all_pending();
    e.sync_structure();

    std::vector<std::pair<long, double>> samples;
    for (long k = 0;; ++k) {
        if (k % cfg.sample_stride == 0 || k == cfg.max_steps)
            samples.emplace_back(k, e.evaluator().potential(e.state(), 0, true));
        if (k >= cfg.max_steps) break;
        e.step();
    }
    final_potential = samples.back().second;
    return entry_step(samples, cfg.band);
}

}  // namespace

ConvergenceCompareResult run_convergence_compare(const ConvergenceCompareConfig& cfg) {
    if (cfg.seeds < 1) throw error("compare needs at least one seed");
    if (cfg.multi_levels < 2) throw error("compare needs multi_levels >= 2");
    ConvergenceCompareResult out;
    double sum_single = 0.0, sum_multi = 0.0;
    for (int s = 0; s < cfg.seeds; ++s) {
        ConvergenceComparePair p;
        p.seed = cfg.base_seed + static_cast<std::uint64_t>(s);
        p.single_steps = run_one(cfg, 1, p.seed, p.single_final);
        p.multi_steps = run_one(cfg, cfg.multi_levels, p.seed, p.multi_final);
        sum_single += static_cast<double>(p.single_steps);
        sum_multi += static_cast<double>(p.multi_steps);
        out.pairs.push_back(p);
    }
    out.mean_single_steps = sum_single / cfg.seeds;
    out.mean_multi_steps = sum_multi / cfg.seeds;
    return out;
}

}  // namespace strata
