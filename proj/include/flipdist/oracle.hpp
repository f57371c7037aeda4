#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "flipdist/embedding.hpp"
#include "flipdist/orientation.hpp"

namespace flipdist {

// Every alpha-orientation of an instance, in canonical order (ascending
// direction bit-vector, bits indexed by edge).
struct OrientationUniverse {
    const Embedding* embedding = nullptr;
    AlphaSpec alpha;
    std::vector<Orientation> all;

    int size() const { return static_cast<int>(all.size()); }
    std::optional<int> index_of(const Orientation& d) const;
};

// Exhaustive backtracking over edge directions with out-degree pruning.
// `budget` caps the number of explored search nodes.
OrientationUniverse enumerate_alpha_orientations(const Embedding& emb,
                                                 const AlphaSpec& alpha,
                                                 std::size_t budget = 1'000'000);

// Node i has an arc to node j when reorienting one face's directed boundary
// turns universe[i] into universe[j]. Flippability is recomputed here
// directly from the face boundaries so the oracle does not share the
// engine's flip logic.
struct FlipGraph {
    SurfaceMode mode = SurfaceMode::plane;
    struct Arc {
        int to;
        FaceId face;
    };
    std::vector<std::vector<Arc>> arcs;

    int size() const { return static_cast<int>(arcs.size()); }
};

FlipGraph build_flip_graph(const OrientationUniverse& universe, SurfaceMode mode,
                           std::optional<FaceId> outer);

std::optional<int> bfs_distance(const FlipGraph& graph, int from, int to);
std::vector<std::optional<int>> bfs_distances(const FlipGraph& graph, int from);

// Full brute-force verification of one instance: formulas against breadth-
// first search over the real flip graph, certificate replay, order/lattice
// structure, rigid edges. Every property is a named check in the report.
struct VerifyReport {
    struct Check {
        std::string name;
        bool pass = true;
        std::string detail;  // counterexample or summary
    };
    std::string instance;
    std::vector<Check> checks;

    bool all_pass() const;
    std::string text() const;
};

VerifyReport verify_instance(const Embedding& emb, const AlphaSpec& alpha,
                             std::size_t budget = 1'000'000);

}  // namespace flipdist
