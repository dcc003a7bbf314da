#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "strata/bench.hpp"
#include "strata/engine.hpp"
#include "strata/error.hpp"
#include "strata/events.hpp"
#include "strata/scenarios.hpp"

namespace {

// 0 = success, 1 = usage/config, 2 = bad input, 3 = internal invariant broken
constexpr int kExitConfig = 1;
constexpr int kExitInput = 2;
constexpr int kExitInternal = 3;

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "strata: force-directed graph layout that simulates a chain of "
        "coarsened copies of an edited graph alongside the graph itself"};

    strata::RunConfig rc;
    std::string events_path;
    std::string scenario;
    std::string frames_path;
    int scenario_n = 4;
    double gnp_pmax = 0.05;
    double duration = 10.0;
    bool dump_events = false;
    double equilibrium_tol = 0.0;
    double frame_damping = -1.0;

    bool bench_matching = false;
    std::vector<std::size_t> bench_edges{2000};
    std::vector<int> bench_degrees{2, 3, 4};
    std::size_t bench_ops = 1000;

    bool compare_convergence = false;
    int compare_seeds = 5;
    long compare_steps = 6000;
    long compare_stride = 10;

    app.add_option("--levels", rc.levels, "total graphs in the chain (1 = no coarsening)")
        ->capture_default_str();
    app.add_option("--integrator", rc.integrator, "euler or rk4")
        ->check(CLI::IsMember({"euler", "rk4"}))
        ->capture_default_str();
    app.add_option("--dt", rc.dt, "integration step")->capture_default_str();
    app.add_option("--theta", rc.theta, "repulsion opening angle; <= 0 sums all pairs")
        ->capture_default_str();
    app.add_option("--phi", rc.physics.time_dilation,
                   "coarse-motion dilation in [0,1]; 1 fully decouples levels")
        ->capture_default_str();
    app.add_option("--seed", rc.seed, "root seed")->capture_default_str();
    app.add_option("--dim", rc.physics.dim, "2 or 3")->capture_default_str();
    app.add_option("--spring-k", rc.physics.spring_k, "spring constant")
        ->capture_default_str();
    app.add_option("--repulsion-f0", rc.physics.repulsion_f0, "repulsion strength")
        ->capture_default_str();
    app.add_option("--softening", rc.physics.softening, "repulsion softening radius")
        ->capture_default_str();
    app.add_option("--damping", rc.physics.damping, "velocity drag")
        ->capture_default_str();
    app.add_option("--frame-damping", frame_damping,
                   "projection-fit damping (sets both the alpha and beta terms)");
    app.add_option("--gravity", rc.physics.gravity,
                   "per-edge pull of the head vertex along -y")
        ->capture_default_str();
    app.add_option("--steps", rc.max_steps, "step budget")->capture_default_str();

    app.add_option("--events", events_path, "JSONL edit-event file");
    app.add_option("--scenario", scenario, "built-in stream: cube, gnp or tree")
        ->check(CLI::IsMember({"cube", "gnp", "tree"}));
    app.add_option("--scenario-n", scenario_n,
                   "cube side length / gnp vertex count / tree size")
        ->capture_default_str();
    app.add_option("--gnp-pmax", gnp_pmax, "gnp edge probability at stream end")
        ->capture_default_str();
    app.add_option("--duration", duration, "gnp/tree growth time span")
        ->capture_default_str();
    app.add_flag("--dump-events", dump_events,
                 "print the event stream as JSONL and exit");

    app.add_option("--frames", frames_path, "write JSONL frames here");
    app.add_option("--frame-stride", rc.frame_stride, "steps between frames")
        ->capture_default_str();
    app.add_flag("--random-init", rc.random_init,
                 "scatter the initial layout in a ball");
    app.add_option("--init-radius", rc.init_radius, "scatter radius")
        ->capture_default_str();
    app.add_option("--check-equilibrium", equilibrium_tol,
                   "keep stepping until the exact force residual drops below TOL");

    app.add_flag("--bench-matching", bench_matching,
                 "measure re-evaluations per edit instead of running a layout");
    app.add_option("--bench-edges", bench_edges, "edge counts to bench")
        ->capture_default_str();
    app.add_option("--bench-degrees", bench_degrees, "max degrees to bench")
        ->capture_default_str();
    app.add_option("--bench-ops", bench_ops, "edits per bench cell")
        ->capture_default_str();

    app.add_flag("--compare-convergence", compare_convergence,
                 "compare steps-to-settle with and without the coarse chain");
    app.add_option("--compare-seeds", compare_seeds, "paired runs to average")
        ->capture_default_str();
    app.add_option("--compare-steps", compare_steps, "step budget per run")
        ->capture_default_str();
    app.add_option("--compare-stride", compare_stride, "steps between samples")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc_cli = app.exit(e);
        return rc_cli == 0 ? 0 : kExitConfig;
    }

    if (equilibrium_tol > 0.0) {
        rc.check_equilibrium = true;
        rc.equilibrium_tol = equilibrium_tol;
    }
    if (frame_damping >= 0.0) {
        rc.physics.frame_damping_alpha = frame_damping;
        rc.physics.frame_damping_beta = frame_damping;
    }

    try {
        if (bench_matching) {
            const auto result =
                strata::run_matching_bench(bench_edges, bench_degrees, bench_ops, rc.seed);
            std::cout << result.to_json().dump(2) << '\n';
            return 0;
        }
        if (compare_convergence) {
            strata::ConvergenceCompareConfig cc;
            cc.cube_n = scenario_n;
            cc.multi_levels = std::max(rc.levels, 2);
            cc.seeds = compare_seeds;
            cc.base_seed = rc.seed;
            cc.integrator = rc.integrator;
            cc.dt = rc.dt;
            cc.max_steps = compare_steps;
            cc.sample_stride = compare_stride;
            cc.theta = rc.theta;
            cc.init_radius = rc.random_init ? rc.init_radius : 0.0;
            cc.physics = rc.physics;
            const auto result = strata::run_convergence_compare(cc);
            std::cout << result.to_json().dump(2) << '\n';
            return 0;
        }

        if (!events_path.empty() && !scenario.empty()) {
            std::cerr << "choose either --events or --scenario, not both\n";
            return kExitConfig;
        }

        std::vector<strata::EditEvent> events;
        if (!events_path.empty()) {
            try {
                events = strata::load_events(events_path);
            } catch (const strata::error& e) {
                std::cerr << "error: " << e.what() << '\n';
                return kExitInput;
            }
        } else if (scenario == "cube") {
            events = strata::scenario_cube(scenario_n);
        } else if (scenario == "gnp") {
            events = strata::scenario_gnp(scenario_n, gnp_pmax, duration, rc.seed);
        } else if (scenario == "tree") {
            events = strata::scenario_tree(scenario_n, duration, rc.seed);
        } else {
            std::cerr << "nothing to do: give --events, --scenario or a bench flag\n";
            return kExitConfig;
        }

        if (dump_events) {
            strata::write_events(std::cout, events);
            return 0;
        }

        strata::Engine engine(rc);
        engine.queue_events(std::move(events));

        std::ofstream frames_file;
        std::ostream* frames = nullptr;
        if (!frames_path.empty()) {
            frames_file.open(frames_path);
            if (!frames_file) {
                std::cerr << "error: cannot open frames file '" << frames_path << "'\n";
                return kExitInput;
            }
            frames = &frames_file;
        }

        strata::RunReport report;
        try {
            report = engine.run(frames);
        } catch (const strata::internal_error&) {
            throw;
        } catch (const strata::error& e) {
            std::cerr << "error: " << e.what() << '\n';
            return kExitInput;
        }
        std::cout << report.to_json().dump(2) << '\n';
        return 0;
    } catch (const strata::internal_error& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kExitInternal;
    } catch (const strata::error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
}
