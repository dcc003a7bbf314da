#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "strata/coarsen.hpp"
#include "strata/dynamics.hpp"
#include "strata/events.hpp"
#include "strata/graph.hpp"
#include "strata/integrate.hpp"
#include "strata/physics.hpp"
#include "strata/state.hpp"

namespace strata {

struct RunConfig {
    int levels = 3;  // total number of graphs, finest included; 1 = single level
    std::string integrator = "euler";  // "euler" | "rk4"
    double dt = 0.01;
    double theta = 0.7;  // repulsion opening angle; <= 0 sums all pairs
    std::uint64_t seed = 1;
    PhysicsParams physics;
    long max_steps = 20000;
    long frame_stride = 10;
    bool random_init = false;  // scatter first-seen vertices in a ball
    double init_radius = 1.0;
    bool check_equilibrium = false;  // keep stepping until the exact gradient
    double equilibrium_tol = 1e-3;   // test passes (or max_steps runs out)
    double settle_speed = 1e-3;      // "settled" once the finest level stays
    int settle_window = 100;         // below this speed for this many steps

    void validate() const;
};

struct RunReport {
    long steps = 0;
    double time = 0.0;
    long events_applied = 0;
    long frames_written = 0;
    bool settled = false;
    bool equilibrium_checked = false;
    bool equilibrium_pass = false;
    double max_gradient = -1.0;
    double potential = 0.0;  // finest level, at exit
    double kinetic = 0.0;
    std::size_t vertices = 0;
    std::size_t edges = 0;

    nlohmann::json to_json() const;
};

// Owns the level chain (graphs, coarseners), the flat state, and the stepping
// loop.  Structural edits are queued as events; whenever any apply, the
// coarsening chain is synced bottom-up and the state is rebuilt around the new
// topology.  World positions and velocities of surviving vertices carry over
// exactly; new vertices are placed by rule (members of a merged pair at their
// mean, fresh vertices at their neighbours' centroid, else the origin, plus a
// small deterministic jitter) so a placement never depends on container order
// or edit history beyond the graph itself.
class Engine {
  public:
    explicit Engine(RunConfig cfg);

    void queue_events(std::vector<EditEvent> evs);
    std::size_t pending_events() const { return pending_.size(); }

    // Full loop: apply due events, sync, frame, step; returns at stream end
    // once settled (and, if requested, at equilibrium) or after max_steps.
    // frames may be null.
    RunReport run(std::ostream* frames);

    // Fine-grained driving for tests and benches ---------------------------
    long apply_due(double now);  // timed events with t <= now, plus one untimed
    void apply_all_pending();
    void sync_structure();  // no-op unless something changed
    void step();            // one integrator step (syncs first if needed)
    void write_header(std::ostream& out) const;
    void write_frame(std::ostream& out, long frame_index);

    // Re-scatter every vertex (salted draw), zero velocities, reset frames.
    void randomize_positions(std::uint64_t salt);

    double time() const { return time_; }
    long steps_taken() const { return steps_; }
    bool settled() const { return settle_count_ >= cfg_.settle_window; }
    const RunConfig& config() const { return cfg_; }
    const Graph& graph(int level) const { return graphs_[level]; }
    Coarsener& coarsener(int i) { return *coarseners_[i]; }
    const StateLayout& layout() const { return layout_; }
    std::vector<double>& state() { return state_; }
    Evaluator& evaluator() { return *eval_; }
    std::vector<Vec3> world_positions(int level = 0);
    double max_world_speed(int level = 0);

  private:
    void apply_one(const EditEvent& ev);
    void rebuild(bool force_random, std::uint64_t salt);
    Vec3 scatter_point(std::uint64_t salt, int level, VertexId id, double radius) const;

    RunConfig cfg_;
    std::deque<Graph> graphs_;  // stable addresses; coarseners hold references
    std::vector<std::unique_ptr<Coarsener>> coarseners_;
    std::deque<EditEvent> pending_;

    StateLayout layout_;
    std::vector<double> state_;
    std::unique_ptr<Evaluator> eval_;
    StepScratch scratch_;
    DerivFn deriv_;
    ComponentNamer namer_;

    double time_ = 0.0;
    long steps_ = 0;
    long events_applied_ = 0;
    int settle_count_ = 0;
    bool dirty_ = true;
    bool built_ = false;  // true once a state vector exists to migrate from
};

}  // namespace strata
