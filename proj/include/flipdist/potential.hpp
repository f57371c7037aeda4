#pragma once

#include <cstdint>
#include <vector>

#include "flipdist/embedding.hpp"
#include "flipdist/orientation.hpp"

namespace flipdist {

struct CycleSystem;

// Integer label per face, zero at the reference face, changing by +1/-1/0
// across each edge depending on whether the labeled side is left of, right
// of, or unrelated to a marked directed edge.
struct PotentialMap {
    const Embedding* embedding = nullptr;
    SurfaceMode mode = SurfaceMode::plane;
    FaceId reference = -1;
    std::vector<int> values;  // by face index

    int at(FaceId f) const { return values[embedding->face_index(f)]; }
    int min_value() const;
    int sum() const;
};

// Face labels from the reference face outward: crossing a marked edge into
// its left face adds one, into its right face subtracts one, unmarked edges
// change nothing. The labeling is checked for consistency across every edge,
// not only along the traversal tree. `dirs` is a per-edge-index mask:
// 0 absent, 1 forward (ends order), 2 reversed.
std::vector<int> crossing_potential(const Embedding& emb,
                                    const std::vector<uint8_t>& dirs,
                                    int root_face_idx);

// Potential of a difference on a plane embedding, rooted at the outer face.
PotentialMap plane_potential(const EulerianDifference& diff, const Embedding& emb);

// Same labeling on a sphere embedding, rooted at an arbitrary face f.
PotentialMap sphere_potential(const EulerianDifference& diff, const Embedding& emb,
                              FaceId f);

// Independent route to the same number: counterclockwise cycles containing g
// minus clockwise cycles containing g, over a classified cycle system.
int potential_from_cycles(const CycleSystem& system, const Embedding& emb, FaceId g);

int z_min(const PotentialMap& map);

}  // namespace flipdist
