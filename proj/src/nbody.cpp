#include "strata/nbody.hpp"

#include <algorithm>

#include "strata/error.hpp"
#include "strata/hashing.hpp"

namespace strata {

Vec3 BarnesHutTree::pair_force(const Vec3& on, const Vec3& from, std::int64_t on_idx,
                               std::int64_t from_idx, const RepulsionLaw& law) {
    Vec3 d = on - from;
    double r = d.norm();
    double mag = law.f0 / ((law.softening + r) * (law.softening + r));
    if (r < 1e-12) return mag * coincident_direction(on_idx, from_idx, law.dim);
    return (mag / r) * d;
}

void BarnesHutTree::build(std::span<const Vec3> pts, int max_depth) {
    nodes_.clear();
    points_.assign(pts.begin(), pts.end());
    order_.resize(points_.size());
    for (std::size_t i = 0; i < order_.size(); ++i) order_[i] = static_cast<std::int32_t>(i);
    if (points_.empty()) return;

    Vec3 lo = points_[0], hi = points_[0];
    for (const Vec3& p : points_) {
        lo.x = std::min(lo.x, p.x); lo.y = std::min(lo.y, p.y); lo.z = std::min(lo.z, p.z);
        hi.x = std::max(hi.x, p.x); hi.y = std::max(hi.y, p.y); hi.z = std::max(hi.z, p.z);
    }
    Vec3 center = 0.5 * (lo + hi);
    double half = 0.5 * std::max({hi.x - lo.x, hi.y - lo.y, hi.z - lo.z});
    half = half * 1.0000001 + 1e-12;  // pad so boundary points sit strictly inside

    nodes_.reserve(2 * points_.size() + 8);
    build_node(0, static_cast<std::int32_t>(points_.size()), center, half, 0, max_depth);
}

int BarnesHutTree::build_node(std::int32_t begin, std::int32_t end, Vec3 center, double half,
                              int depth, int max_depth) {
    int idx = static_cast<int>(nodes_.size());
    {
        Node n;
        n.box_center = center;
        n.box_half = half;
        n.points_begin = begin;
        n.points_end = end;
        n.count = end - begin;
        Vec3 sum;
        for (std::int32_t k = begin; k < end; ++k) sum += points_[order_[k]];
        n.centroid = (1.0 / n.count) * sum;
        nodes_.push_back(n);
    }
    if (end - begin <= 1 || depth >= max_depth) return idx;  // leaf (bucket at max depth)

    auto octant_of = [&](std::int32_t pi) {
        const Vec3& p = points_[pi];
        return (p.x >= center.x ? 1 : 0) | (p.y >= center.y ? 2 : 0) | (p.z >= center.z ? 4 : 0);
    };
    auto it0 = order_.begin() + begin, it1 = order_.begin() + end;
    std::sort(it0, it1,
              [&](std::int32_t a, std::int32_t b) { return octant_of(a) < octant_of(b); });
    std::array<std::int32_t, 9> bounds;
    bounds[0] = begin;
    for (int o = 0; o < 8; ++o)
        bounds[o + 1] = static_cast<std::int32_t>(
            std::partition_point(it0, it1, [&](std::int32_t a) { return octant_of(a) <= o; }) -
            order_.begin());

    nodes_[idx].leaf = false;
    double qh = 0.5 * half;
    for (int o = 0; o < 8; ++o) {
        if (bounds[o + 1] == bounds[o]) continue;
        Vec3 c = center;
        c.x += (o & 1) ? qh : -qh;
        c.y += (o & 2) ? qh : -qh;
        c.z += (o & 4) ? qh : -qh;
        int child = build_node(bounds[o], bounds[o + 1], c, qh, depth + 1, max_depth);
        nodes_[idx].child[o] = child;
    }
    return idx;
}

namespace {

inline bool box_contains(const BarnesHutTree::Node& n, const Vec3& p) {
    return std::abs(p.x - n.box_center.x) <= n.box_half &&
           std::abs(p.y - n.box_center.y) <= n.box_half &&
           std::abs(p.z - n.box_center.z) <= n.box_half;
}

}  // namespace

Vec3 BarnesHutTree::repulsion(std::size_t i, double theta, const RepulsionLaw& law) const {
    Vec3 total;
    if (nodes_.empty()) return total;
    const Vec3 xi = points_[i];
    const auto self = static_cast<std::int32_t>(i);
    std::int32_t stack[512];  // >= 7 * max_depth + 1
    int sp = 0;
    stack[sp++] = 0;
    while (sp > 0) {
        const Node& n = nodes_[stack[--sp]];
        if (n.leaf) {
            for (std::int32_t k = n.points_begin; k < n.points_end; ++k) {
                std::int32_t pj = order_[k];
                if (pj == self) continue;
                total += pair_force(xi, points_[pj], self, pj, law);
            }
            continue;
        }
        Vec3 d = xi - n.centroid;
        double dist = d.norm();
        // Nodes whose box still contains the query point are always opened so
        // the point never lumps itself into an aggregate.
        if (dist > 0 && 2.0 * n.box_half <= theta * dist && !box_contains(n, xi)) {
            double mag = n.count * law.f0 / ((law.softening + dist) * (law.softening + dist));
            total += (mag / dist) * d;
            continue;
        }
        for (int o = 0; o < 8; ++o)
            if (n.child[o] >= 0) stack[sp++] = n.child[o];
    }
    return total;
}

double BarnesHutTree::potential_sum(std::size_t i, double theta, const RepulsionLaw& law) const {
    double total = 0;
    if (nodes_.empty()) return total;
    const Vec3 xi = points_[i];
    const auto self = static_cast<std::int32_t>(i);
    std::int32_t stack[512];  // >= 7 * max_depth + 1
    int sp = 0;
    stack[sp++] = 0;
    while (sp > 0) {
        const Node& n = nodes_[stack[--sp]];
        if (n.leaf) {
            for (std::int32_t k = n.points_begin; k < n.points_end; ++k) {
                std::int32_t pj = order_[k];
                if (pj == self) continue;
                total += law.f0 / (law.softening + (xi - points_[pj]).norm());
            }
            continue;
        }
        Vec3 d = xi - n.centroid;
        double dist = d.norm();
        if (dist > 0 && 2.0 * n.box_half <= theta * dist && !box_contains(n, xi)) {
            total += n.count * law.f0 / (law.softening + dist);
            continue;
        }
        for (int o = 0; o < 8; ++o)
            if (n.child[o] >= 0) stack[sp++] = n.child[o];
    }
    return total;
}

Vec3 BarnesHutTree::exact_repulsion(std::span<const Vec3> pts, std::size_t i,
                                    const RepulsionLaw& law) {
    Vec3 total;
    for (std::size_t j = 0; j < pts.size(); ++j) {
        if (j == i) continue;
        total += pair_force(pts[i], pts[j], static_cast<std::int64_t>(i),
                            static_cast<std::int64_t>(j), law);
    }
    return total;
}

double BarnesHutTree::exact_potential_sum(std::span<const Vec3> pts, std::size_t i,
                                          const RepulsionLaw& law) {
    double total = 0;
    for (std::size_t j = 0; j < pts.size(); ++j) {
        if (j == i) continue;
        total += law.f0 / (law.softening + (pts[i] - pts[j]).norm());
    }
    return total;
}

}  // namespace strata
