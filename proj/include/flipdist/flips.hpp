#pragma once

#include <map>
#include <optional>
#include <vector>

#include "flipdist/cycles.hpp"
#include "flipdist/embedding.hpp"
#include "flipdist/orientation.hpp"
#include "flipdist/potential.hpp"

namespace flipdist {

// Faces to reorient, in application order. Each listed face's boundary is a
// counterclockwise directed cycle at the moment it is applied.
struct FlipSequence {
    SurfaceMode mode = SurfaceMode::plane;
    std::vector<FaceId> flips;

    int size() const { return static_cast<int>(flips.size()); }
};

// A distance answer together with everything needed to re-check it without
// trusting the engine: the face potential, a cycle decomposition of the
// difference, the sequence itself and how often each face gets flipped.
struct DistanceCertificate {
    SurfaceMode mode = SurfaceMode::plane;
    std::optional<int> distance;  // nullopt = incomparable (plane only)
    PotentialMap potential;
    CycleSystem cycles;
    FlipSequence sequence;
    std::map<FaceId, int> per_face_counts;
};

// Faces whose boundary is a directed cycle with the face on its left; inner
// faces only on the plane, every face on the sphere. Requires a strongly
// connected orientation.
std::vector<FaceId> flippable_faces(const Orientation& d);

// Reverses the boundary of g; g must currently be flippable.
Orientation apply_flip(const Orientation& d, FaceId g);

Orientation apply_sequence(const Orientation& d, const FlipSequence& seq);

// Plane order test: can dp be transformed into d by flips?
bool comparable(const Orientation& dp, const Orientation& d);

// Exact flip distance on the plane, or nothing when the pair is incomparable.
std::optional<int> plane_distance(const Orientation& dp, const Orientation& d);

// Same number, counted as interior faces of counterclockwise cycles minus
// interior faces of clockwise ones over a cycle decomposition.
int cycle_count_distance(const Orientation& dp, const Orientation& d);

// Exact flip distance on the sphere; independent of the reference face f.
int sphere_distance(const Orientation& dp, const Orientation& d, FaceId f);

// Reverses one counterclockwise simple cycle with exactly one flip per
// enclosed face, leaving every other edge as it was.
FlipSequence reverse_ccw_cycle(const Orientation& d,
                               const std::vector<HalfEdge>& cycle);

// Reverses a counterclockwise cycle together with pairwise exclusive
// clockwise cycles enclosed by it, flipping exactly the faces inside the
// outer cycle but outside every inner one, once each.
FlipSequence reverse_nested(const Orientation& d,
                            const std::vector<HalfEdge>& ccw_cycle,
                            const std::vector<std::vector<HalfEdge>>& cw_cycles);

// A minimum flip sequence transforming dp into d. Plane mode requires
// comparable(dp, d); on the sphere every ordered pair works and f (when
// given) only selects the reference face for the certificate potential.
FlipSequence flip_sequence(const Orientation& dp, const Orientation& d,
                           std::optional<FaceId> f = std::nullopt);

// Quota-driven cross-check: flips any flippable face with remaining quota,
// smallest face id first. Matches flip_sequence in length whenever it
// finishes; a stall with quota left raises an error with a state dump.
FlipSequence greedy_sequence(const Orientation& dp, const Orientation& d,
                             std::optional<FaceId> f = std::nullopt);

DistanceCertificate distance_certificate(const Orientation& dp, const Orientation& d,
                                         std::optional<FaceId> f = std::nullopt,
                                         uint64_t peel_seed = 0);

}  // namespace flipdist
