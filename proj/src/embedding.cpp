#include "flipdist/embedding.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <queue>
#include <set>

namespace flipdist {

std::string to_string(SurfaceMode mode) {
    return mode == SurfaceMode::plane ? "plane" : "sphere";
}

HalfEdge reversed(const HalfEdge& h) { return HalfEdge{h.edge, h.head, h.tail}; }

int Embedding::vertex_index(VertexId v) const {
    auto it = vindex_.find(v);
    if (it == vindex_.end()) throw domain_error("unknown vertex id " + std::to_string(v));
    return it->second;
}

int Embedding::edge_index(EdgeId e) const {
    auto it = eindex_.find(e);
    if (it == eindex_.end()) throw domain_error("unknown edge id " + std::to_string(e));
    return it->second;
}

std::pair<VertexId, VertexId> Embedding::ends(EdgeId e) const {
    const EdgeSpec& spec = edges_[edge_index(e)];
    return {spec.u, spec.v};
}

int Embedding::degree(VertexId v) const {
    return static_cast<int>(rotation(v).size());
}

const std::vector<EdgeId>& Embedding::rotation(VertexId v) const {
    return vertices_[vertex_index(v)].rotation;
}

int Embedding::slot(const HalfEdge& h) const {
    int eidx = edge_index(h.edge);
    const EdgeSpec& spec = edges_[eidx];
    if (h.tail == spec.u && h.head == spec.v) return 2 * eidx;
    if (h.tail == spec.v && h.head == spec.u) return 2 * eidx + 1;
    throw domain_error("half-edge endpoints do not match edge " + std::to_string(h.edge));
}

HalfEdge Embedding::half_edge(int s) const {
    const EdgeSpec& spec = edges_[s / 2];
    if (s % 2 == 0) return HalfEdge{spec.id, spec.u, spec.v};
    return HalfEdge{spec.id, spec.v, spec.u};
}

int Embedding::half_edge_code(const HalfEdge& h) const {
    int s = slot(h);
    return 2 * edges_[s / 2].id + (s % 2);
}

const Face& Embedding::face(FaceId id) const { return faces_[face_index(id)]; }

int Embedding::face_index(FaceId id) const {
    auto it = findex_.find(id);
    if (it == findex_.end()) throw domain_error("unknown face id " + std::to_string(id));
    return it->second;
}

FaceId Embedding::left_face(const HalfEdge& h) const {
    return faces_[face_of_slot_[slot(h)]].id;
}

FaceId Embedding::right_face(const HalfEdge& h) const {
    return faces_[face_of_slot_[slot(h) ^ 1]].id;
}

FaceId Embedding::outer_face() const { return faces_[outer_face_index()].id; }

int Embedding::outer_face_index() const {
    if (mode_ != SurfaceMode::plane)
        throw domain_error("outer face is only defined in plane mode");
    return outer_face_;
}

DualAdjacency Embedding::dual_adjacency() const {
    DualAdjacency dual;
    dual.sides.reserve(edges_.size());
    for (const EdgeSpec& e : edges_) {
        HalfEdge ref{e.id, e.u, e.v};
        dual.sides.push_back({e.id, left_face(ref), right_face(ref)});
    }
    return dual;
}

std::vector<char> Embedding::enclosed_mask(const std::vector<char>& cut,
                                           int outside_idx) const {
    std::vector<char> enclosed(faces_.size(), 1);
    std::queue<int> queue;
    enclosed[outside_idx] = 0;
    queue.push(outside_idx);
    while (!queue.empty()) {
        int f = queue.front();
        queue.pop();
        for (const HalfEdge& h : faces_[f].boundary) {
            int eidx = edge_index(h.edge);
            if (cut[eidx]) continue;
            int g = face_of_slot_[slot(h) ^ 1];
            if (enclosed[g]) {
                enclosed[g] = 0;
                queue.push(g);
            }
        }
    }
    return enclosed;
}

namespace {

// A simple cycle presented as an edge set: every touched vertex has exactly
// two cycle edges and the edges form one connected piece.
void check_simple_cycle(const Embedding& emb, const std::vector<EdgeId>& cycle) {
    if (cycle.empty()) throw domain_error("cycle is empty");
    std::set<EdgeId> seen;
    std::map<VertexId, std::vector<EdgeId>> at_vertex;
    for (EdgeId e : cycle) {
        if (!seen.insert(e).second)
            throw domain_error("cycle repeats edge " + std::to_string(e));
        auto [u, v] = emb.ends(e);
        at_vertex[u].push_back(e);
        at_vertex[v].push_back(e);
    }
    for (const auto& [v, inc] : at_vertex)
        if (inc.size() != 2)
            throw domain_error("edge set is not a simple cycle: vertex " +
                               std::to_string(v) + " has " +
                               std::to_string(inc.size()) + " cycle edges");
    // connectivity: walk from an arbitrary cycle edge
    std::set<EdgeId> reached;
    std::vector<EdgeId> stack{cycle.front()};
    while (!stack.empty()) {
        EdgeId e = stack.back();
        stack.pop_back();
        if (!reached.insert(e).second) continue;
        auto [u, v] = emb.ends(e);
        for (VertexId w : {u, v})
            for (EdgeId f : at_vertex[w])
                if (!reached.count(f)) stack.push_back(f);
    }
    if (reached.size() != cycle.size())
        throw domain_error("edge set is not a simple cycle: disconnected");
}

}  // namespace

std::vector<FaceId> Embedding::interior_faces(const std::vector<EdgeId>& cycle) const {
    return enclosed_faces(cycle, outer_face());
}

std::vector<FaceId> Embedding::enclosed_faces(const std::vector<EdgeId>& cycle,
                                              FaceId outside) const {
    check_simple_cycle(*this, cycle);
    std::vector<char> cut(edges_.size(), 0);
    for (EdgeId e : cycle) cut[edge_index(e)] = 1;
    std::vector<char> mask = enclosed_mask(cut, face_index(outside));
    std::vector<FaceId> result;
    for (int f = 0; f < face_count(); ++f)
        if (mask[f]) result.push_back(faces_[f].id);
    std::sort(result.begin(), result.end());
    return result;
}

namespace detail {

std::vector<std::vector<int>> trace_orbits(const Embedding& emb,
                                           const std::vector<char>& edge_mask) {
    // Restricted rotations: for each vertex the surviving edges in ccw order,
    // plus each edge end's position within that list.
    int ne = emb.edge_count();
    std::vector<std::vector<int>> rot(emb.vertex_count());
    // position of slot s's edge within rot[tail(s)]
    std::vector<int> pos(2 * ne, -1);
    for (int vi = 0; vi < emb.vertex_count(); ++vi) {
        const auto& spec = emb.vertices()[vi];
        for (EdgeId e : spec.rotation) {
            int ei = emb.edge_index(e);
            if (!edge_mask[ei]) continue;
            int side = emb.ends(e).first == spec.id ? 0 : 1;
            pos[2 * ei + side] = static_cast<int>(rot[vi].size());
            rot[vi].push_back(ei);
        }
    }

    std::vector<char> visited(2 * ne, 0);
    std::vector<std::vector<int>> orbits;
    for (int start = 0; start < 2 * ne; ++start) {
        if (!edge_mask[start / 2] || visited[start]) continue;
        std::vector<int> walk;
        int s = start;
        while (!visited[s]) {
            visited[s] = 1;
            walk.push_back(s);
            // Arrive at the head of s and leave along the ccw-predecessor of
            // s's edge in the rotation there; this keeps the traced face on
            // the left of the walk.
            HalfEdge h = emb.half_edge(s);
            int vhead = emb.vertex_index(h.head);
            int ei = s / 2;
            int arriving_side = emb.ends(h.edge).first == h.head ? 0 : 1;
            int p = pos[2 * ei + arriving_side];
            const std::vector<int>& r = rot[vhead];
            int prev_edge = r[(p + r.size() - 1) % r.size()];
            int out_side = emb.ends(emb.edge_id(prev_edge)).first == h.head ? 0 : 1;
            s = 2 * prev_edge + out_side;
        }
        orbits.push_back(std::move(walk));
    }
    return orbits;
}

}  // namespace detail

Embedding Embedding::build(SurfaceMode mode, std::vector<VertexSpec> vertices,
                           std::vector<EdgeSpec> edges,
                           std::optional<HalfEdge> outer) {
    Embedding emb;
    emb.mode_ = mode;
    emb.vertices_ = std::move(vertices);
    emb.edges_ = std::move(edges);

    if (emb.vertices_.size() < 3)
        throw parse_error("need at least 3 vertices (2-connected graphs only)");
    if (emb.edges_.empty()) throw parse_error("graph has no edges");

    for (int i = 0; i < static_cast<int>(emb.vertices_.size()); ++i) {
        VertexId v = emb.vertices_[i].id;
        if (!emb.vindex_.emplace(v, i).second)
            throw parse_error("duplicate vertex id " + std::to_string(v));
    }
    std::set<std::pair<VertexId, VertexId>> pairs;
    for (int i = 0; i < static_cast<int>(emb.edges_.size()); ++i) {
        const EdgeSpec& e = emb.edges_[i];
        if (e.id < 0 || e.id > std::numeric_limits<int>::max() / 4)
            throw parse_error("edge id out of range: " + std::to_string(e.id));
        if (!emb.eindex_.emplace(e.id, i).second)
            throw parse_error("duplicate edge id " + std::to_string(e.id));
        if (!emb.vindex_.count(e.u) || !emb.vindex_.count(e.v))
            throw parse_error("edge " + std::to_string(e.id) + " has unknown endpoint");
        if (e.u == e.v)
            throw parse_error("loop at vertex " + std::to_string(e.u) + " (edge " +
                              std::to_string(e.id) + "); loops are not allowed");
        auto key = std::minmax(e.u, e.v);
        if (!pairs.insert(key).second)
            throw parse_error("multi-edge between " + std::to_string(e.u) + " and " +
                              std::to_string(e.v) + "; multi-edges are not allowed");
    }

    // Rotation sanity: each vertex lists exactly its incident edges, once
    // each, so every edge id shows up exactly twice across all rotations.
    std::vector<int> uses(emb.edges_.size(), 0);
    for (const VertexSpec& vs : emb.vertices_) {
        std::set<EdgeId> local;
        for (EdgeId e : vs.rotation) {
            if (!emb.eindex_.count(e))
                throw parse_error("rotation of vertex " + std::to_string(vs.id) +
                                  " names unknown edge " + std::to_string(e));
            auto [u, v] = emb.ends(e);
            if (u != vs.id && v != vs.id)
                throw parse_error("rotation of vertex " + std::to_string(vs.id) +
                                  " names non-incident edge " + std::to_string(e));
            if (!local.insert(e).second)
                throw parse_error("rotation of vertex " + std::to_string(vs.id) +
                                  " repeats edge " + std::to_string(e));
            ++uses[emb.eindex_.at(e)];
        }
    }
    for (size_t i = 0; i < uses.size(); ++i)
        if (uses[i] != 2)
            throw parse_error("edge " + std::to_string(emb.edges_[i].id) +
                              " appears " + std::to_string(uses[i]) +
                              " times across rotations, expected 2");

    // Connectivity and 2-connectivity (articulation points via DFS lowpoints).
    {
        int n = static_cast<int>(emb.vertices_.size());
        std::vector<std::vector<int>> adj(n);
        for (const EdgeSpec& e : emb.edges_) {
            int ui = emb.vindex_.at(e.u), vi = emb.vindex_.at(e.v);
            adj[ui].push_back(vi);
            adj[vi].push_back(ui);
        }
        std::vector<int> disc(n, -1), low(n, 0);
        int timer = 0, visited_count = 0;
        // iterative DFS from vertex 0
        struct Frame { int v, parent; size_t i; };
        std::vector<Frame> stack{{0, -1, 0}};
        disc[0] = low[0] = timer++;
        ++visited_count;
        int root_children = 0;
        bool articulation = false;
        while (!stack.empty()) {
            Frame& fr = stack.back();
            if (fr.i < adj[fr.v].size()) {
                int w = adj[fr.v][fr.i++];
                if (disc[w] == -1) {
                    disc[w] = low[w] = timer++;
                    ++visited_count;
                    if (fr.v == 0) ++root_children;
                    stack.push_back({w, fr.v, 0});
                } else if (w != fr.parent) {
                    low[fr.v] = std::min(low[fr.v], disc[w]);
                }
            } else {
                int v = fr.v, parent = fr.parent;
                stack.pop_back();
                if (parent != -1) {
                    low[parent] = std::min(low[parent], low[v]);
                    if (parent != 0 && low[v] >= disc[parent]) articulation = true;
                }
            }
        }
        if (visited_count != n) throw parse_error("graph is disconnected");
        if (articulation || root_children > 1)
            throw parse_error("graph is not 2-connected");
    }

    // Trace faces and run the genus check.
    std::vector<char> all(emb.edges_.size(), 1);
    std::vector<std::vector<int>> orbits = detail::trace_orbits(emb, all);
    int v_count = static_cast<int>(emb.vertices_.size());
    int e_count = static_cast<int>(emb.edges_.size());
    int f_count = static_cast<int>(orbits.size());
    if (v_count - e_count + f_count != 2)
        throw parse_error("embedding is not genus 0: V=" + std::to_string(v_count) +
                          " E=" + std::to_string(e_count) + " F=" +
                          std::to_string(f_count) + " gives V-E+F=" +
                          std::to_string(v_count - e_count + f_count) +
                          ", expected 2");

    emb.face_of_slot_.assign(2 * e_count, -1);
    for (const std::vector<int>& orbit : orbits) {
        Face face;
        int min_code = std::numeric_limits<int>::max();
        std::set<VertexId> walk_vertices;
        for (int s : orbit) {
            HalfEdge h = emb.half_edge(s);
            face.boundary.push_back(h);
            min_code = std::min(min_code, 2 * h.edge + (s % 2));
            if (!walk_vertices.insert(h.tail).second)
                throw parse_error("face boundary is not a simple cycle at vertex " +
                                  std::to_string(h.tail) +
                                  "; embedding violates 2-connectivity assumptions");
        }
        face.id = min_code;
        int idx = static_cast<int>(emb.faces_.size());
        for (int s : orbit) emb.face_of_slot_[s] = idx;
        emb.findex_.emplace(face.id, idx);
        emb.faces_.push_back(std::move(face));
    }

    if (mode == SurfaceMode::plane) {
        if (!outer) throw parse_error("plane mode requires an outer_face");
        emb.outer_face_ = emb.face_of_slot_[emb.slot(*outer)];
    } else if (outer) {
        throw parse_error("sphere mode must not name an outer_face");
    }
    return emb;
}

}  // namespace flipdist
