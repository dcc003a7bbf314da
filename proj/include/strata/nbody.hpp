#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "strata/vec.hpp"

namespace strata {

struct RepulsionLaw {
    double f0 = 1.0;
    double softening = 0.05;
    int dim = 3;
};

// Octree over a point set with per-node charge counts and centroids, used to
// approximate the pairwise repulsion in O(log n) per query.  A subtree is
// treated as `count` charges at its centroid when its box looks small from the
// query point: width / distance <= theta.  theta = 0 forces full opening, which
// reproduces the exact pairwise sum (up to summation order).  The tree is
// rebuilt from scratch for every derivative evaluation; nothing is updated in
// place.
class BarnesHutTree {
  public:
    struct Node {
        Vec3 box_center;
        double box_half = 0;   // half of the side length
        Vec3 centroid;         // mean position of contained points
        int count = 0;
        std::array<std::int32_t, 8> child{-1, -1, -1, -1, -1, -1, -1, -1};
        std::int32_t points_begin = 0, points_end = 0;  // into point_index(), leaves only
        bool leaf = true;
    };

    // max_depth bounds subdivision; coincident points pile up in one leaf
    // bucket at the bottom rather than splitting forever.
    void build(std::span<const Vec3> pts, int max_depth = 48);

    // Net repulsion on point i exerted by all other points.
    Vec3 repulsion(std::size_t i, double theta, const RepulsionLaw& law) const;
    // Sum of f0/(softening + r) from point i to all other points.
    double potential_sum(std::size_t i, double theta, const RepulsionLaw& law) const;

    std::size_t size() const { return points_.size(); }
    const std::vector<Node>& nodes() const { return nodes_; }
    const std::vector<std::int32_t>& point_index() const { return order_; }
    const std::vector<Vec3>& points() const { return points_; }

    // Exact O(n) reference for one query point (O(n^2) for all); the oracle the
    // tree is tested against and the path used when theta = 0 is requested by
    // the dynamics.
    static Vec3 exact_repulsion(std::span<const Vec3> pts, std::size_t i,
                                const RepulsionLaw& law);
    static double exact_potential_sum(std::span<const Vec3> pts, std::size_t i,
                                      const RepulsionLaw& law);

    // Force on `on` from a single unit charge at `from`; f0/(soft+r)^2 directed
    // away from `from`, with the deterministic tie-break direction when the
    // points coincide.
    static Vec3 pair_force(const Vec3& on, const Vec3& from, std::int64_t on_idx,
                           std::int64_t from_idx, const RepulsionLaw& law);

  private:
    int build_node(std::int32_t begin, std::int32_t end, Vec3 center, double half, int depth,
                   int max_depth);

    std::vector<Node> nodes_;
    std::vector<std::int32_t> order_;  // permutation of [0, n)
    std::vector<Vec3> points_;
};

}  // namespace strata
