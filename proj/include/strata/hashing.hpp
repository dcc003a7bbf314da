#pragma once

#include <cstdint>
#include <numbers>

#include "strata/vec.hpp"

namespace strata {

// splitmix64 finalizer.  Every deterministic pseudo-random quantity in the engine
// (edge priorities, per-level seeds, placement jitter, tie-break directions) is
// derived from chains of this mix so that runs are reproducible from the root seed
// alone, independent of any RNG engine state.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b) { return mix64(mix64(a) ^ b); }

inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    return mix64(mix64(a, b) ^ c);
}

// Map a hash to [0, 1) using the top 53 bits.
inline double unit_double(std::uint64_t h) { return static_cast<double>(h >> 11) * 0x1.0p-53; }

// Seed for one coarsening level, derived from the run-wide root seed.
inline std::uint64_t level_seed(std::uint64_t root_seed, int level) {
    return mix64(root_seed, 0x5eedULL + static_cast<std::uint64_t>(level));
}

// Deterministic unit vector keyed by an arbitrary hash; uniform on the sphere
// (or circle when dim == 2).
inline Vec3 unit_direction(std::uint64_t key, int dim) {
    double u = unit_double(mix64(key, 1));
    double v = unit_double(mix64(key, 2));
    double phi = 2.0 * std::numbers::pi * u;
    if (dim == 2) return {std::cos(phi), std::sin(phi), 0.0};
    double z = 2.0 * v - 1.0;
    double s = std::sqrt(std::max(0.0, 1.0 - z * z));
    return {s * std::cos(phi), s * std::sin(phi), z};
}

// Repulsion direction for two (near-)coincident points, keyed by their indices.
// Antisymmetric under swapping i and j so that pairwise forces still cancel.
inline Vec3 coincident_direction(std::int64_t i, std::int64_t j, int dim) {
    std::int64_t lo = i < j ? i : j;
    std::int64_t hi = i < j ? j : i;
    Vec3 dir = unit_direction(mix64(static_cast<std::uint64_t>(lo) ^ 0xc01dULL,
                                    static_cast<std::uint64_t>(hi)),
                              dim);
    return i < j ? dir : -dir;
}

}  // namespace strata
