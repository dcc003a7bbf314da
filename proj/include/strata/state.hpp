#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "strata/graph.hpp"
#include "strata/vec.hpp"

namespace strata {

// Maps the structured multilevel state onto one flat vector of doubles for the
// integrators.  Level 0 is the finest (displayed) graph; the last level is the
// coarsest.  Per level, vertices are ordered by ascending id and hold six
// doubles: position and velocity at the coarsest level, displacement and its
// velocity everywhere else.  Every level except the coarsest also carries a
// 24-double frame block: the 3x3 projection alpha, its velocity, the offset
// beta, and its velocity.
//
// The layout is immutable; graph edits build a fresh layout and the engine
// migrates values by vertex id.
struct StateLayout {
    static constexpr std::size_t kPerVertex = 6;
    static constexpr std::size_t kFrame = 24;

    struct LevelBlock {
        std::vector<VertexId> ids;  // ascending
        std::unordered_map<VertexId, int> slot_of;
        std::size_t vertex_offset = 0;
        std::size_t frame_offset = 0;  // meaningful iff has_frame
        bool has_frame = false;
    };

    std::vector<LevelBlock> levels;
    std::size_t total = 0;

    void add_level(std::vector<VertexId> sorted_ids);
    void finalize();  // assigns offsets; call once after all add_level calls

    int num_levels() const { return static_cast<int>(levels.size()); }
    int count(int level) const { return static_cast<int>(levels[level].ids.size()); }
    bool coarsest(int level) const { return level == num_levels() - 1; }

    std::size_t pos_off(int l, int slot) const {
        return levels[l].vertex_offset + kPerVertex * slot;
    }
    std::size_t vel_off(int l, int slot) const { return pos_off(l, slot) + 3; }
    std::size_t alpha_off(int l) const { return levels[l].frame_offset; }
    std::size_t alphadot_off(int l) const { return levels[l].frame_offset + 9; }
    std::size_t beta_off(int l) const { return levels[l].frame_offset + 18; }
    std::size_t betadot_off(int l) const { return levels[l].frame_offset + 21; }

    // Human-readable location of a flat index, for diagnostics.
    std::string describe(std::size_t flat_index) const;
};

inline Vec3 get3(const double* p) { return {p[0], p[1], p[2]}; }
inline void put3(double* p, const Vec3& v) { p[0] = v.x; p[1] = v.y; p[2] = v.z; }
inline void add3(double* p, const Vec3& v) { p[0] += v.x; p[1] += v.y; p[2] += v.z; }
inline Mat3 get9(const double* p) {
    Mat3 m;
    for (int i = 0; i < 9; ++i) m.m[i] = p[i];
    return m;
}
inline void put9(double* p, const Mat3& m) {
    for (int i = 0; i < 9; ++i) p[i] = m.m[i];
}

}  // namespace strata
