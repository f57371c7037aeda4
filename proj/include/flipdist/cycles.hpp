#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "flipdist/embedding.hpp"
#include "flipdist/orientation.hpp"

namespace flipdist {

enum class Turn { ccw, cw };

struct DirectedCycle {
    std::vector<HalfEdge> walk;    // cyclic, each edge once, directed
    Turn turn = Turn::ccw;         // valid once the system is classified
    std::vector<FaceId> interior;  // sorted; valid once classified
    int parent = -1;               // index of the minimal enclosing cycle
    FaceId canonical_id = -1;      // smallest half-edge code on the walk

    std::vector<EdgeId> edge_ids() const;
};

// Edge-disjoint, pairwise uncrossed directed simple cycles that together
// carry every edge of a balanced difference.
struct CycleSystem {
    std::vector<DirectedCycle> cycles;
    bool classified = false;
};

// Decomposes a balanced edge set by repeatedly peeling a face of the
// restricted sub-embedding whose boundary walk runs along the given
// directions, splitting the walk into simple cycles where it pinches.
// `peel_seed` only shuffles the tie-break among candidate faces; any seed
// yields a valid system and the per-face ccw/cw balance is seed-invariant.
CycleSystem standard_cycle_system(const EulerianDifference& diff,
                                  const Embedding& emb, uint64_t peel_seed = 0);

// Marks each cycle ccw or cw and fills interiors and the nesting forest.
// `reference_outside` is the face treated as lying outside every cycle: the
// outer face on the plane, a designated face on the sphere.
CycleSystem classify_and_nest(CycleSystem system, const Embedding& emb,
                              SurfaceMode mode,
                              std::optional<FaceId> reference_outside);

}  // namespace flipdist
