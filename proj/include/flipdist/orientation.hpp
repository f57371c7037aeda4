#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "flipdist/embedding.hpp"

namespace flipdist {

// A direction for every edge of an embedding. Value-semantic: reorienting
// operations return new objects, the embedding itself is shared read-only.
class Orientation {
public:
    Orientation(const Embedding& emb, std::vector<uint8_t> towards_second);

    // directions given as edgeId -> (tail, head); every edge must appear
    static Orientation from_directions(const Embedding& emb,
                                       const std::map<EdgeId, std::pair<VertexId, VertexId>>& dirs);

    const Embedding& embedding() const { return *emb_; }

    VertexId tail(EdgeId e) const;
    VertexId head(EdgeId e) const;
    HalfEdge directed(EdgeId e) const;
    // true iff the orientation directs h.edge from h.tail to h.head
    bool points_along(const HalfEdge& h) const;

    int out_degree(VertexId v) const;
    std::vector<int> out_degrees() const;  // by vertex index

    Orientation with_reversed(const std::vector<EdgeId>& edges) const;

    // direction bits by edge index; bit i set = edge i points ends().second
    // -> ends().first. Canonical key for enumeration and hashing.
    uint64_t bit_code() const;

    bool operator==(const Orientation& o) const;
    bool operator!=(const Orientation& o) const { return !(*this == o); }

private:
    const Embedding* emb_;
    std::vector<uint8_t> dir_;  // by edge index; 0 = ends().first is the tail
};

// Required out-degree per vertex.
struct AlphaSpec {
    std::map<VertexId, int> out_degree;

    int sum() const;
    int at(VertexId v) const;
};

// The directed edges of dp on which d disagrees. Always balanced: every
// vertex has equal in- and out-degree within the difference.
struct EulerianDifference {
    const Embedding* embedding = nullptr;
    std::vector<HalfEdge> edges;  // directed as in dp, ordered by edge index

    bool empty() const { return edges.empty(); }
    // per-edge direction relative to ends(): 0 = absent, 1 = forward, 2 = reversed
    std::vector<uint8_t> direction_mask() const;
};

bool is_alpha_orientation(const Orientation& d, const AlphaSpec& alpha);

// Finds an alpha-orientation by augmenting-path search on the edge/vertex
// assignment network, visiting edges in ascending id order, so the result is
// deterministic. Returns nothing when the spec is infeasible; a wrong degree
// sum is reported as an error instead.
std::optional<Orientation> find_alpha_orientation(const Embedding& emb,
                                                  const AlphaSpec& alpha);

bool is_strongly_connected(const Orientation& d);

// Strongly connected component id per vertex index (Tarjan).
std::vector<int> strong_components(const Orientation& d);

// Edges lying on no directed cycle of d; these are exactly the edges that
// have the same direction in every alpha-orientation of the instance.
std::vector<EdgeId> rigid_edges(const Embedding& emb, const AlphaSpec& alpha,
                                const Orientation& d);

EulerianDifference difference(const Orientation& dp, const Orientation& d);

}  // namespace flipdist
