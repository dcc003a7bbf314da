#include "strata/state.hpp"

#include <algorithm>

#include "strata/error.hpp"

namespace strata {

void StateLayout::add_level(std::vector<VertexId> sorted_ids) {
    STRATA_CHECK(std::is_sorted(sorted_ids.begin(), sorted_ids.end()),
                 "level ids must be sorted");
    LevelBlock b;
    b.ids = std::move(sorted_ids);
    b.slot_of.reserve(b.ids.size());
    for (int i = 0; i < static_cast<int>(b.ids.size()); ++i) b.slot_of[b.ids[i]] = i;
    levels.push_back(std::move(b));
}

void StateLayout::finalize() {
    std::size_t off = 0;
    for (int l = 0; l < num_levels(); ++l) {
        LevelBlock& b = levels[l];
        b.has_frame = l + 1 < num_levels();
        if (b.has_frame) {
            b.frame_offset = off;
            off += kFrame;
        }
        b.vertex_offset = off;
        off += kPerVertex * b.ids.size();
    }
    total = off;
}

std::string StateLayout::describe(std::size_t flat_index) const {
    static const char* frame_part[] = {"alpha", "alpha_dot", "beta", "beta_dot"};
    static const char* axis[] = {"x", "y", "z"};
    for (int l = 0; l < num_levels(); ++l) {
        const LevelBlock& b = levels[l];
        if (b.has_frame && flat_index >= b.frame_offset &&
            flat_index < b.frame_offset + kFrame) {
            std::size_t k = flat_index - b.frame_offset;
            std::string out = "level " + std::to_string(l) + " frame ";
            if (k < 18) {
                out += frame_part[k / 9];
                out += "[" + std::to_string((k % 9) / 3) + "][" + std::to_string(k % 3) + "]";
            } else {
                out += frame_part[2 + (k - 18) / 3];
                out += ".";
                out += axis[(k - 18) % 3];
            }
            return out;
        }
        std::size_t lo = b.vertex_offset;
        std::size_t hi = lo + kPerVertex * b.ids.size();
        if (flat_index >= lo && flat_index < hi) {
            std::size_t k = flat_index - lo;
            int slot = static_cast<int>(k / kPerVertex);
            std::size_t c = k % kPerVertex;
            std::string out = "level " + std::to_string(l) + " vertex " +
                              std::to_string(b.ids[slot]) + " ";
            out += (c < 3) ? "pos." : "vel.";
            out += axis[c % 3];
            return out;
        }
    }
    return "flat index " + std::to_string(flat_index) + " (out of range)";
}

}  // namespace strata
