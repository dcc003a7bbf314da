#pragma once

#include <array>
#include <span>
#include <vector>

#include "strata/graph.hpp"
#include "strata/nbody.hpp"
#include "strata/physics.hpp"
#include "strata/state.hpp"
#include "strata/vec.hpp"

namespace strata {

// Edge endpoints and parent pointers resolved to state slots, one entry per
// level; built by the engine (or a test) against a specific StateLayout.
struct LevelTopology {
    // (tail, head) slot pairs; tail is the first endpoint given at insertion.
    // Directed gravity, when enabled, pushes the head along gravity_dir and
    // the tail the opposite way.
    std::vector<std::array<int, 2>> edges;
    // Slot of each vertex's image one level up; empty at the coarsest level.
    std::vector<int> parent;
};

struct EquilibriumReport {
    double max_gradient = 0.0;
    VertexId worst_vertex = -1;
    double tolerance = 0.0;
    bool pass = false;
};

// Time derivative of the flat multilevel state.
//
// Every level is a graph in its own right and feels its own spring and
// repulsion forces, evaluated at world coordinates.  The coarsest level
// integrates world position directly.  Each finer level stores displacements
// delta from an affine image of its parent level, x = delta + alpha*Y + beta,
// where Y is the parent's world position; alpha and beta are themselves
// second-order states driven toward the least-squares fit of the finer level
// by their own equations of motion.  A finer level's displacement
// acceleration is its force minus a pseudoforce that cancels the acceleration
// inherited through the moving frame; the parent velocity and acceleration
// terms in that pseudoforce are scaled by time_dilation phi and phi^2, which
// slows the apparent motion of the coarse levels without disturbing their
// equilibria.  With phi = 1 the cancellation is exact and every level's world
// trajectory evolves as if simulated alone.
class Evaluator {
  public:
    Evaluator(const StateLayout* layout, std::vector<LevelTopology> topology,
              const PhysicsParams& phys, double theta);

    // ds := d/dt of s.  Both spans must match the layout's total size.
    void derivatives(std::span<const double> s, std::span<double> ds);

    // World coordinates of one level (no force evaluation).
    std::vector<Vec3> world_positions(std::span<const double> s, int level);
    std::vector<Vec3> world_velocities(std::span<const double> s, int level);
    double max_world_speed(std::span<const double> s, int level);

    // Energies of one level's graph at world coordinates.  exact = true sums
    // all pairs for repulsion; otherwise the tree with this evaluator's theta.
    double potential(std::span<const double> s, int level, bool exact);
    double kinetic(std::span<const double> s, int level);

    // Max-norm of the exact potential gradient over the finest level's
    // vertices; pass iff max <= tol.
    EquilibriumReport equilibrium_check(std::span<const double> s, double tol);

    const PhysicsParams& physics() const { return phys_; }
    double theta() const { return theta_; }

  private:
    void compute_worlds(std::span<const double> s);
    void compute_world_vels(std::span<const double> s);
    void accumulate_forces(std::span<const double> s, int level);

    const StateLayout* layout_;
    std::vector<LevelTopology> topo_;
    PhysicsParams phys_;
    double theta_;

    // per-level scratch, indexed [level][slot]
    std::vector<std::vector<Vec3>> wpos_, wvel_, wacc_, force_;
    BarnesHutTree tree_;
};

}  // namespace strata
