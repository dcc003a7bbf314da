#pragma once

#include "strata/error.hpp"
#include "strata/vec.hpp"

namespace strata {

// Force-law and dynamics constants.  The potential being minimized is
//
//   V = sum over edges of  k/2 |xi - xj|^2
//     + sum over unordered vertex pairs of  f0 / (softening + |xi - xj|)
//
// so springs pull with k*r and every pair repels with f0/(softening + r)^2.
// Velocity damping uses `damping` on vertex state and the two frame dampings
// on the affine frame of each level pair.  `time_dilation` (phi) scales how
// strongly a level reacts to its coarser level's motion: the projected
// velocity enters the displacement equation of motion scaled by phi and the
// projected acceleration by phi^2; phi = 1 removes the dilation entirely and
// decouples the levels exactly.
struct PhysicsParams {
    double spring_k = 1.0;
    double repulsion_f0 = 1.0;
    double softening = 0.05;  // keeps the repulsion finite at zero separation
    double damping = 2.0;
    double frame_damping_alpha = 2.0;
    double frame_damping_beta = 2.0;
    double time_dilation = 0.1;  // phi in [0, 1]
    double gravity = 0.0;        // per-edge pull along gravity_dir; 0 disables
    Vec3 gravity_dir{0.0, -1.0, 0.0};
    int dim = 3;  // 2 or 3, fixed for a whole run

    void validate() const {
        if (spring_k <= 0) throw error("spring_k must be positive");
        if (repulsion_f0 < 0) throw error("repulsion_f0 must be non-negative");
        if (softening <= 0) throw error("softening must be positive");
        if (damping < 0 || frame_damping_alpha < 0 || frame_damping_beta < 0)
            throw error("damping constants must be non-negative");
        if (time_dilation < 0 || time_dilation > 1)
            throw error("time_dilation must lie in [0, 1]");
        if (dim != 2 && dim != 3) throw error("dim must be 2 or 3");
    }
};

}  // namespace strata
