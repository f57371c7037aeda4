#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "flipdist/errors.hpp"

namespace flipdist {

using VertexId = int;
using EdgeId = int;
// A face is named by the smallest half-edge code (2*edgeId + side) on its
// boundary walk, which keeps face identity stable across runs and across
// subgraph operations.
using FaceId = int;

enum class SurfaceMode { plane, sphere };

std::string to_string(SurfaceMode mode);

// One directed traversal of an edge.
struct HalfEdge {
    EdgeId edge = -1;
    VertexId tail = -1;
    VertexId head = -1;

    bool operator==(const HalfEdge& o) const {
        return edge == o.edge && tail == o.tail && head == o.head;
    }
    bool operator!=(const HalfEdge& o) const { return !(*this == o); }
};

HalfEdge reversed(const HalfEdge& h);

struct Face {
    FaceId id = -1;
    // Cyclic boundary walk; traversing it keeps this face on the left.
    std::vector<HalfEdge> boundary;
};

// Left/right face per edge, relative to the edge's reference direction
// (ends().first -> ends().second).
struct DualAdjacency {
    struct Sides {
        EdgeId edge;
        FaceId left;
        FaceId right;
    };
    std::vector<Sides> sides;  // ordered by edge index
};

// A combinatorial embedding of a simple 2-connected graph on the sphere or
// the plane, given as a rotation system: the counterclockwise cyclic order
// of incident edges around every vertex. Faces, half-edge/face incidence and
// the dual graph are derived at construction time; the object is immutable
// afterwards and safe to share between threads.
class Embedding {
public:
    struct VertexSpec {
        VertexId id;
        std::vector<EdgeId> rotation;  // ccw order of incident edges
    };
    struct EdgeSpec {
        EdgeId id;
        VertexId u, v;
    };

    // Validates everything: simplicity, connectivity, 2-connectivity, the
    // rotation structure, and the genus-0 check V - E + F = 2. In plane mode
    // `outer` must name a directed half-edge on the outer face's boundary.
    static Embedding build(SurfaceMode mode, std::vector<VertexSpec> vertices,
                           std::vector<EdgeSpec> edges,
                           std::optional<HalfEdge> outer);

    SurfaceMode mode() const { return mode_; }

    int vertex_count() const { return static_cast<int>(vertices_.size()); }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    int face_count() const { return static_cast<int>(faces_.size()); }

    const std::vector<VertexSpec>& vertices() const { return vertices_; }
    const std::vector<EdgeSpec>& edges() const { return edges_; }
    const std::vector<Face>& faces() const { return faces_; }

    bool has_vertex(VertexId v) const { return vindex_.count(v) > 0; }
    bool has_edge(EdgeId e) const { return eindex_.count(e) > 0; }

    int vertex_index(VertexId v) const;
    int edge_index(EdgeId e) const;
    VertexId vertex_id(int idx) const { return vertices_[idx].id; }
    EdgeId edge_id(int idx) const { return edges_[idx].id; }

    std::pair<VertexId, VertexId> ends(EdgeId e) const;
    int degree(VertexId v) const;
    const std::vector<EdgeId>& rotation(VertexId v) const;

    // Half-edge slots: 2*edge_index + side, side 0 = ends().first as tail.
    int slot(const HalfEdge& h) const;
    HalfEdge half_edge(int slot) const;
    int half_edge_code(const HalfEdge& h) const;  // 2*edgeId + side

    const Face& face(FaceId id) const;
    int face_index(FaceId id) const;
    FaceId face_id(int idx) const { return faces_[idx].id; }
    int face_index_of_slot(int slot) const { return face_of_slot_[slot]; }

    // The face lying to the left (resp. right) of the directed edge h.
    FaceId left_face(const HalfEdge& h) const;
    FaceId right_face(const HalfEdge& h) const;

    FaceId outer_face() const;       // plane mode only
    int outer_face_index() const;    // plane mode only

    DualAdjacency dual_adjacency() const;

    // Faces enclosed by a simple cycle (given as an edge set): a face is
    // enclosed iff it cannot reach `outside` in the dual graph once the
    // cycle's dual edges are cut. interior_faces() uses the outer face.
    std::vector<FaceId> interior_faces(const std::vector<EdgeId>& cycle) const;
    std::vector<FaceId> enclosed_faces(const std::vector<EdgeId>& cycle,
                                       FaceId outside) const;

    // Same computation on face indices; `cut` is an edge-index mask. Faces
    // reachable from `outside_idx` get false. No cycle validation.
    std::vector<char> enclosed_mask(const std::vector<char>& cut,
                                    int outside_idx) const;

private:
    Embedding() = default;

    SurfaceMode mode_ = SurfaceMode::sphere;
    std::vector<VertexSpec> vertices_;
    std::vector<EdgeSpec> edges_;
    std::unordered_map<VertexId, int> vindex_;
    std::unordered_map<EdgeId, int> eindex_;
    std::vector<Face> faces_;
    std::unordered_map<FaceId, int> findex_;
    std::vector<int> face_of_slot_;  // half-edge slot -> face index
    int outer_face_ = -1;            // face index, plane mode
};

namespace detail {

// Face-tracing orbits of the rotation system restricted to a subset of
// edges (mask by edge index). Each orbit is a cyclic list of half-edge
// slots walked with the traced region on the left. With an all-true mask
// the orbits are exactly the faces of the embedding.
std::vector<std::vector<int>> trace_orbits(const Embedding& emb,
                                           const std::vector<char>& edge_mask);

}  // namespace detail

}  // namespace flipdist
