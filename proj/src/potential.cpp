#include "flipdist/potential.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <string>

#include "flipdist/cycles.hpp"

namespace flipdist {

int PotentialMap::min_value() const {
    return *std::min_element(values.begin(), values.end());
}

int PotentialMap::sum() const {
    return std::accumulate(values.begin(), values.end(), 0);
}

std::vector<int> crossing_potential(const Embedding& emb,
                                    const std::vector<uint8_t>& dirs,
                                    int root_face_idx) {
    constexpr int unset = std::numeric_limits<int>::min();
    std::vector<int> z(emb.face_count(), unset);
    z[root_face_idx] = 0;
    std::queue<int> queue;
    queue.push(root_face_idx);
    while (!queue.empty()) {
        int f = queue.front();
        queue.pop();
        for (const HalfEdge& h : emb.faces()[f].boundary) {
            // h keeps face f on its left; the neighbour across h sits right.
            int eidx = emb.edge_index(h.edge);
            int delta = 0;
            if (dirs[eidx] != 0) {
                bool marked_along_h =
                    (dirs[eidx] == 1) == (emb.ends(h.edge).first == h.tail);
                delta = marked_along_h ? -1 : 1;  // from left side to right side
            }
            int g = emb.face_index_of_slot(emb.slot(h) ^ 1);
            if (z[g] == unset) {
                z[g] = z[f] + delta;
                queue.push(g);
            }
        }
    }
    // Every face is reached (the dual of a connected embedding is connected);
    // now re-check the defining relation on every single edge so that an
    // unbalanced edge set cannot produce a silently inconsistent labeling.
    for (const auto& e : emb.edges()) {
        int eidx = emb.edge_index(e.id);
        HalfEdge fwd{e.id, e.u, e.v};
        int left = emb.face_index_of_slot(emb.slot(fwd));
        int right = emb.face_index_of_slot(emb.slot(fwd) ^ 1);
        int expected = dirs[eidx] == 0 ? 0 : (dirs[eidx] == 1 ? 1 : -1);
        if (z[left] == unset || z[right] == unset)
            throw invariant_error("face labeling did not reach both sides of edge " +
                                  std::to_string(e.id));
        if (z[left] - z[right] != expected)
            throw invariant_error(
                "face potential is inconsistent across edge " + std::to_string(e.id) +
                ": the marked edge set is not balanced or the dual is corrupt");
    }
    return z;
}

PotentialMap plane_potential(const EulerianDifference& diff, const Embedding& emb) {
    if (emb.mode() != SurfaceMode::plane)
        throw domain_error("plane_potential requires a plane embedding");
    PotentialMap map;
    map.embedding = &emb;
    map.mode = SurfaceMode::plane;
    map.reference = emb.outer_face();
    map.values = crossing_potential(emb, diff.direction_mask(), emb.outer_face_index());
    return map;
}

PotentialMap sphere_potential(const EulerianDifference& diff, const Embedding& emb,
                              FaceId f) {
    if (emb.mode() != SurfaceMode::sphere)
        throw domain_error("sphere_potential requires a sphere embedding");
    PotentialMap map;
    map.embedding = &emb;
    map.mode = SurfaceMode::sphere;
    map.reference = f;
    map.values = crossing_potential(emb, diff.direction_mask(), emb.face_index(f));
    return map;
}

int potential_from_cycles(const CycleSystem& system, const Embedding& emb, FaceId g) {
    if (!system.classified)
        throw domain_error("potential_from_cycles needs a classified cycle system");
    int ccw = 0, cw = 0;
    for (const DirectedCycle& c : system.cycles) {
        if (!std::binary_search(c.interior.begin(), c.interior.end(), g)) continue;
        if (c.turn == Turn::ccw) ++ccw;
        else ++cw;
    }
    (void)emb;
    return ccw - cw;
}

int z_min(const PotentialMap& map) {
    if (map.mode != SurfaceMode::sphere)
        throw domain_error("z_min applies to sphere potentials");
    return map.min_value();
}

}  // namespace flipdist
