#include "flipdist/flips.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>
#include <string>

namespace flipdist {

namespace {

std::vector<FaceId> sorted_face_ids(const Embedding& emb) {
    std::vector<FaceId> ids;
    for (const Face& f : emb.faces()) ids.push_back(f.id);
    std::sort(ids.begin(), ids.end());
    return ids;
}

void require_strongly_connected(const Orientation& d, const char* op) {
    if (!is_strongly_connected(d))
        throw domain_error(std::string(op) + " requires a strongly connected orientation");
}

void require_same_alpha(const Orientation& dp, const Orientation& d) {
    if (&dp.embedding() != &d.embedding())
        throw domain_error("orientations belong to different embeddings");
    if (dp.out_degrees() != d.out_degrees())
        throw domain_error("orientations have different out-degree vectors");
}

// Reorders a set of directed edges into one cyclic walk; the edges must form
// a simple directed cycle.
std::vector<HalfEdge> as_cyclic_walk(const Embedding& emb,
                                     const std::vector<HalfEdge>& edges) {
    if (edges.empty()) throw domain_error("cycle is empty");
    std::map<VertexId, const HalfEdge*> by_tail;
    for (const HalfEdge& h : edges) {
        emb.slot(h);  // validates endpoints
        if (!by_tail.emplace(h.tail, &h).second)
            throw domain_error("cycle is not simple: two edges leave vertex " +
                               std::to_string(h.tail));
    }
    std::vector<HalfEdge> walk;
    const HalfEdge* step = edges.data();
    for (size_t i = 0; i < edges.size(); ++i) {
        walk.push_back(*step);
        auto it = by_tail.find(step->head);
        if (it == by_tail.end())
            throw domain_error("cycle is not closed at vertex " +
                               std::to_string(step->head));
        step = it->second;
    }
    if (walk.back().head != walk.front().tail)
        throw domain_error("edges do not form a single simple cycle");
    return walk;
}

// ---------------------------------------------------------------------------
// Reversal engine.
//
// Works within a frame: one face index is treated as lying outside every
// cycle (the outer face on the plane, the re-rooting face on the sphere).
// Closed walks are cyclic half-edge slot lists; the faces a walk encloses are
// read off its crossing potential, which also certifies that the walk does
// not cross itself (all labels 0 or +1 for a counterclockwise walk, 0 or -1
// for a clockwise one). Walks may pinch at vertices; they never cross.
// ---------------------------------------------------------------------------

class Engine {
public:
    Engine(const Orientation& start, int frame_outer)
        : emb_(start.embedding()),
          cur_(start),
          frame_outer_(frame_outer),
          counts_(emb_.face_count(), 0) {
        incident_.resize(emb_.vertex_count());
        for (int ei = 0; ei < emb_.edge_count(); ++ei) {
            auto [u, v] = emb_.ends(emb_.edge_id(ei));
            incident_[emb_.vertex_index(u)].push_back(ei);
            incident_[emb_.vertex_index(v)].push_back(ei);
        }
        for (auto& list : incident_) std::sort(list.begin(), list.end());
    }

    struct Walk {
        std::vector<int> slots;    // cyclic half-edge slots
        std::vector<char> region;  // face-index mask of enclosed faces
        int region_size = 0;
        int sign = 0;  // +1 ccw, -1 cw (relative to the frame)
    };

    const Orientation& current() const { return cur_; }
    const std::vector<FaceId>& sequence() const { return seq_; }
    const std::vector<int>& counts() const { return counts_; }

    // Enclosure test without direction agreement, for candidate splices.
    std::optional<Walk> try_walk(std::vector<int> slots) const {
        Walk w;
        w.slots = std::move(slots);
        std::vector<uint8_t> dirs(emb_.edge_count(), 0);
        for (int s : w.slots) {
            if (dirs[s / 2] != 0)
                throw invariant_error("walk traverses an edge twice");
            dirs[s / 2] = (s % 2 == 0) ? 1 : 2;
        }
        std::vector<int> z = crossing_potential(emb_, dirs, frame_outer_);
        w.region.assign(emb_.face_count(), 0);
        for (int f = 0; f < emb_.face_count(); ++f) {
            if (z[f] == 0) continue;
            if (z[f] != 1 && z[f] != -1) return std::nullopt;
            if (w.sign == 0) w.sign = z[f];
            if (z[f] != w.sign) return std::nullopt;
            w.region[f] = 1;
            ++w.region_size;
        }
        if (w.sign == 0) return std::nullopt;  // a closed curve encloses something
        return w;
    }

    // Full construction: the slots must also run along the current orientation.
    Walk walk(std::vector<int> slots) const {
        for (int s : slots)
            if (!cur_.points_along(emb_.half_edge(s)))
                throw invariant_error("walk disagrees with the current orientation");
        std::optional<Walk> w = try_walk(std::move(slots));
        if (!w) throw invariant_error("closed walk crosses itself");
        return *w;
    }

    // Reverses the ccw walk `cm` and the cw cycles `holes` enclosed by it,
    // flipping each face inside cm but outside every hole exactly once.
    void reverse_with_holes(const Walk& cm, const std::vector<Walk>& holes) {
        require(cm.sign == 1, "outer walk of a reversal must be counterclockwise");
        std::vector<char> free = cm.region;
        int free_size = cm.region_size;
        for (const Walk& hole : holes) {
            require(hole.sign == -1, "inner cycles of a reversal must be clockwise");
            for (int f = 0; f < emb_.face_count(); ++f)
                if (hole.region[f]) {
                    require(free[f] == 1, "inner cycles must be disjoint and enclosed");
                    free[f] = 0;
                    --free_size;
                }
        }
        require(free_size >= 1, "reversal region is empty");
        std::vector<int> before = counts_;

        std::vector<int> comp = region_components(cm);
        int ncomp = 1 + *std::max_element(comp.begin(), comp.end());
        if (ncomp > 1) {
            // The walk pinches so hard that its region falls apart into
            // pieces meeting only at vertices (a figure eight). Each piece is
            // bounded by the slots whose enclosed side lies in it; reverse
            // the pieces independently.
            split_components(cm, holes, comp, ncomp);
        } else if (holes.empty() && free_size == 1) {
            base_flip(cm);
        } else {
            descend(cm, holes, free);
        }

        for (int f = 0; f < emb_.face_count(); ++f)
            require(counts_[f] - before[f] == (free[f] ? 1 : 0),
                    "reversal flipped a face the wrong number of times");
    }

private:
    // Component id per face index for the faces a walk encloses (-1 outside),
    // where two enclosed faces are connected if they share an edge the walk
    // does not use. Hole boundaries do not cut: their interiors belong to the
    // enclosed region, and the connector machinery routes through them.
    std::vector<int> region_components(const Walk& cm) const {
        std::vector<char> on_walk(emb_.edge_count(), 0);
        for (int s : cm.slots) on_walk[s / 2] = 1;
        std::vector<int> comp(emb_.face_count(), -1);
        int next = 0;
        for (int start = 0; start < emb_.face_count(); ++start) {
            if (!cm.region[start] || comp[start] != -1) continue;
            std::queue<int> queue;
            comp[start] = next;
            queue.push(start);
            while (!queue.empty()) {
                int f = queue.front();
                queue.pop();
                for (const HalfEdge& h : emb_.faces()[f].boundary) {
                    if (on_walk[emb_.edge_index(h.edge)]) continue;
                    int g = emb_.face_index_of_slot(emb_.slot(h) ^ 1);
                    if (cm.region[g] && comp[g] == -1) {
                        comp[g] = next;
                        queue.push(g);
                    }
                }
            }
            ++next;
        }
        return comp;
    }

    void split_components(const Walk& cm, const std::vector<Walk>& holes,
                          const std::vector<int>& comp, int ncomp) {
        std::vector<std::vector<Walk>> hole_groups(ncomp);
        for (const Walk& hole : holes) {
            int where = -1;
            for (int f = 0; f < emb_.face_count(); ++f)
                if (hole.region[f]) {
                    require(where == -1 || where == comp[f],
                            "hole spans two region components");
                    where = comp[f];
                }
            hole_groups[where].push_back(hole);
        }
        for (int c = 0; c < ncomp; ++c) {
            std::vector<int> slots;
            for (int s : cm.slots)
                if (comp[emb_.face_index_of_slot(s)] == c) slots.push_back(s);
            require(!slots.empty(), "region component without boundary slots");
            for (size_t i = 0; i < slots.size(); ++i) {
                HalfEdge a = emb_.half_edge(slots[i]);
                HalfEdge b = emb_.half_edge(slots[(i + 1) % slots.size()]);
                require(a.head == b.tail,
                        "component boundary is not a closed walk");
            }
            reverse_with_holes(walk(std::move(slots)), hole_groups[c]);
        }
    }

    // --- elementary flip ---------------------------------------------------

    void base_flip(const Walk& cm) {
        int fidx = -1;
        for (int f = 0; f < emb_.face_count(); ++f)
            if (cm.region[f]) fidx = f;
        const Face& face = emb_.faces()[fidx];
        std::set<int> walk_slots(cm.slots.begin(), cm.slots.end());
        require(walk_slots.size() == face.boundary.size(),
                "single-face walk does not match the face boundary");
        for (const HalfEdge& h : face.boundary)
            require(walk_slots.count(emb_.slot(h)) == 1,
                    "single-face walk does not match the face boundary");
        emit(fidx);
    }

    void emit(int fidx) {
        require(fidx != frame_outer_, "attempted to flip the frame's outside face");
        const Face& face = emb_.faces()[fidx];
        std::vector<EdgeId> edges;
        for (const HalfEdge& h : face.boundary) {
            require(cur_.points_along(h), "face is not flippable at emission time");
            edges.push_back(h.edge);
        }
        cur_ = cur_.with_reversed(edges);
        seq_.push_back(face.id);
        counts_[fidx]++;
    }

    // --- connector walk construction ---------------------------------------

    struct Visit {
        int hole;
        int entry_pos;  // position of the entry vertex in the hole's slots
        int entry_len;  // slots of the hole used by the connector walk
    };
    struct Event {
        bool is_visit;
        int slot = -1;   // when !is_visit
        Visit visit{};   // when is_visit
    };

    static std::vector<VertexId> slot_tails(const Embedding& emb,
                                            const std::vector<int>& slots) {
        std::vector<VertexId> tails;
        tails.reserve(slots.size());
        for (int s : slots) tails.push_back(emb.half_edge(s).tail);
        return tails;
    }

    std::vector<char> vertex_mask(const std::vector<int>& slots) const {
        std::vector<char> mask(emb_.vertex_count(), 0);
        for (int s : slots) mask[emb_.vertex_index(emb_.half_edge(s).tail)] = 1;
        return mask;
    }

    // Shortest directed path from `sources` to a vertex satisfying `target`,
    // using only edges with both sides inside `faces`, never expanding
    // through a vertex of `blocked`. Returns the path's slots; empty result
    // means no path. Deterministic: sources seeded in index order, adjacency
    // scanned in edge-index order.
    std::optional<std::vector<int>> shortest_leg(
        const std::vector<char>& faces, const std::vector<char>& sources,
        const std::vector<char>& blocked,
        const std::function<bool(int)>& target) const {
        std::vector<int> parent_slot(emb_.vertex_count(), -1);
        std::vector<int> parent_vertex(emb_.vertex_count(), -1);
        std::vector<char> visited = blocked;
        std::queue<int> queue;
        for (int v = 0; v < emb_.vertex_count(); ++v)
            if (sources[v]) {
                visited[v] = 1;
                queue.push(v);
            }
        auto build = [&](int via_slot, int from) {
            std::vector<int> path{via_slot};
            int w = from;
            while (parent_slot[w] != -1) {
                path.push_back(parent_slot[w]);
                w = parent_vertex[w];
            }
            std::reverse(path.begin(), path.end());
            return path;
        };
        while (!queue.empty()) {
            int x = queue.front();
            queue.pop();
            for (int ei : incident_[x]) {
                EdgeId e = emb_.edge_id(ei);
                HalfEdge h = cur_.directed(e);
                if (emb_.vertex_index(h.tail) != x) continue;
                int lf = emb_.face_index_of_slot(emb_.slot(h));
                int rf = emb_.face_index_of_slot(emb_.slot(h) ^ 1);
                if (!faces[lf] || !faces[rf]) continue;
                int y = emb_.vertex_index(h.head);
                if (target(y)) return build(emb_.slot(h), x);
                if (!visited[y]) {
                    visited[y] = 1;
                    parent_slot[y] = emb_.slot(h);
                    parent_vertex[y] = x;
                    queue.push(y);
                }
            }
        }
        return std::nullopt;
    }

    struct Connector {
        std::vector<Event> events;
        VertexId from, to;  // both on cm; equal when the walk is closed
        std::vector<char> visited_holes;
    };

    // Builds the connector walk of one reversal level: out of cm, through
    // some of the holes (entering and leaving each exactly once, following
    // its own direction in between), back to cm. With no holes it is a plain
    // interior path from cm to cm.
    //
    // The visiting order is chosen on a contact graph whose nodes are cm and
    // the holes and whose arcs are cycle-avoiding legs (or shared vertices).
    // A shortest closed route from cm through at least one hole never
    // repeats a hole, and one always exists because the orientation
    // restricted to the region stays strongly connected.
    Connector build_connector(const Walk& cm, const std::vector<Walk>& holes,
                              const std::vector<char>& free) {
        std::vector<char> cm_vertices = vertex_mask(cm.slots);
        std::vector<std::vector<char>> hole_vertices;
        std::vector<char> all_cycle_vertices = cm_vertices;
        for (const Walk& hole : holes) {
            hole_vertices.push_back(vertex_mask(hole.slots));
            for (int v = 0; v < emb_.vertex_count(); ++v)
                if (hole_vertices.back()[v]) all_cycle_vertices[v] = 1;
        }

        Connector con;
        con.visited_holes.assign(holes.size(), 0);
        VertexId from = -1, to = -1;
        std::vector<Event> raw;

        auto fail_context = [&](const char* what) {
            std::ostringstream why;
            why << what << ": walk";
            for (int s : cm.slots) {
                HalfEdge h = emb_.half_edge(s);
                why << " " << h.tail << ">" << h.head;
            }
            why << " with " << holes.size() << " holes:";
            for (const Walk& hole : holes) {
                why << " [";
                for (int s : hole.slots) {
                    HalfEdge h = emb_.half_edge(s);
                    why << " " << h.tail << ">" << h.head;
                }
                why << " ]";
            }
            return invariant_error(why.str());
        };

        if (holes.empty()) {
            auto target = [&](int y) { return cm_vertices[y] != 0; };
            auto path = shortest_leg(free, cm_vertices, all_cycle_vertices, target);
            if (!path)
                throw fail_context(
                    "no interior return path: region is not strongly connected");
            from = emb_.half_edge(path->front()).tail;
            to = emb_.half_edge(path->back()).head;
            for (int s : *path) raw.push_back(Event{false, s, {}});
        } else {
            // contact graph: node 0 = cm, node k+1 = hole k
            int nodes = static_cast<int>(holes.size()) + 1;
            struct Contact {
                std::vector<int> leg;  // empty = shared vertex
                VertexId depart = -1, arrive = -1;
                bool exists = false;
            };
            std::vector<std::vector<Contact>> contact(nodes,
                                                      std::vector<Contact>(nodes));
            auto vertices_of = [&](int node) -> const std::vector<char>& {
                return node == 0 ? cm_vertices : hole_vertices[node - 1];
            };
            auto node_of_vertex = [&](int v, int except) {
                if (except != 0 && cm_vertices[v]) return 0;
                for (int n = 1; n < nodes; ++n)
                    if (n != except && hole_vertices[n - 1][v]) return n;
                return -1;
            };
            for (int x = 0; x < nodes; ++x) {
                // shared vertices give zero-length contacts
                for (int v = 0; v < emb_.vertex_count(); ++v) {
                    if (!vertices_of(x)[v]) continue;
                    for (int y = 0; y < nodes; ++y) {
                        if (y == x || contact[x][y].exists) continue;
                        if (!vertices_of(y)[v]) continue;
                        contact[x][y].exists = true;
                        contact[x][y].depart = contact[x][y].arrive =
                            emb_.vertex_id(v);
                    }
                }
                // one search gives the shortest cycle-free leg to every
                // other cycle at once
                std::vector<int> parent_slot(emb_.vertex_count(), -1);
                std::vector<int> parent_vertex(emb_.vertex_count(), -1);
                std::vector<char> visited = all_cycle_vertices;
                std::queue<int> queue;
                for (int v = 0; v < emb_.vertex_count(); ++v)
                    if (vertices_of(x)[v]) queue.push(v);
                while (!queue.empty()) {
                    int at = queue.front();
                    queue.pop();
                    for (int ei : incident_[at]) {
                        HalfEdge h = cur_.directed(emb_.edge_id(ei));
                        if (emb_.vertex_index(h.tail) != at) continue;
                        int lf = emb_.face_index_of_slot(emb_.slot(h));
                        int rf = emb_.face_index_of_slot(emb_.slot(h) ^ 1);
                        if (!free[lf] || !free[rf]) continue;
                        int y = emb_.vertex_index(h.head);
                        int hit = node_of_vertex(y, x);
                        if (hit != -1) {
                            Contact& c = contact[x][hit];
                            if (c.exists) continue;
                            c.exists = true;
                            c.leg = {emb_.slot(h)};
                            int w = at;
                            while (parent_slot[w] != -1) {
                                c.leg.push_back(parent_slot[w]);
                                w = parent_vertex[w];
                            }
                            std::reverse(c.leg.begin(), c.leg.end());
                            c.depart = emb_.half_edge(c.leg.front()).tail;
                            c.arrive = emb_.half_edge(c.leg.back()).head;
                            continue;
                        }
                        if (!visited[y]) {
                            visited[y] = 1;
                            parent_slot[y] = emb_.slot(h);
                            parent_vertex[y] = at;
                            queue.push(y);
                        }
                    }
                }
            }

            // shortest route 0 -> ... -> 0 with at least one hole between;
            // a shortest route never needs to repeat a hole
            std::vector<int> dist(nodes, -1), via(nodes, -1);
            std::queue<int> order;
            for (int y = 1; y < nodes; ++y)
                if (contact[0][y].exists) {
                    dist[y] = 1;
                    via[y] = 0;
                    order.push(y);
                }
            int last = -1;
            while (!order.empty() && last == -1) {
                int x = order.front();
                order.pop();
                if (contact[x][0].exists) {
                    last = x;
                    break;
                }
                for (int y = 1; y < nodes; ++y)
                    if (contact[x][y].exists && dist[y] == -1) {
                        dist[y] = dist[x] + 1;
                        via[y] = x;
                        order.push(y);
                    }
            }
            if (last == -1)
                throw fail_context(
                    "no connector route: region is not strongly connected");
            std::vector<int> route{0};
            for (int x = last; x != 0; x = via[x]) route.insert(route.begin() + 1, x);
            route.push_back(0);

            // assemble: legs between consecutive stops, an arc along each hole
            // from its arrival vertex to the next leg's departure vertex
            VertexId pending_entry = -1;
            for (size_t i = 0; i + 1 < route.size(); ++i) {
                const Contact& c = contact[route[i]][route[i + 1]];
                if (i > 0) {
                    int k = route[i] - 1;
                    append_visit(raw, holes[k], k, pending_entry, c.depart);
                    con.visited_holes[k] = 1;
                }
                if (i == 0) from = c.depart;
                for (int s : c.leg) raw.push_back(Event{false, s, {}});
                pending_entry = c.arrive;
            }
            to = pending_entry;
        }

        con.events = erase_loops(raw, from, to);
        // A visit whose arc came out empty only touches its hole at one
        // vertex: the hole is not traversed at all, so it stays a hole for
        // the recursion and the walk just passes through the contact vertex.
        std::vector<Event> kept;
        for (const Event& ev : con.events)
            if (!(ev.is_visit && ev.visit.entry_len == 0)) kept.push_back(ev);
        con.events = std::move(kept);

        bool any_slots = false;
        for (const Event& ev : con.events) any_slots = any_slots || !ev.is_visit;
        if (!any_slots) {
            // Hole and outer walk meet only at the starting vertex. Take the
            // whole hole boundary as the visit arc so the walk is not empty.
            int k = -1;
            for (size_t i = 0; i < holes.size(); ++i)
                if (hole_vertices[i][emb_.vertex_index(from)] &&
                    con.visited_holes[i])
                    k = static_cast<int>(i);
            require(k != -1, "connector collapsed to nothing");
            con.events.clear();
            append_visit(con.events, holes[k], k, from, from, true);
            to = from;
        }

        std::vector<char> still(holes.size(), 0);
        for (const Event& ev : con.events)
            if (ev.is_visit) still[ev.visit.hole] = 1;
        con.visited_holes = still;
        con.from = from;
        con.to = to;
        return con;
    }

    void append_visit(std::vector<Event>& raw, const Walk& hole, int k,
                      VertexId entry, VertexId exit, bool force_full = false) {
        std::vector<VertexId> tails = slot_tails(emb_, hole.slots);
        int n = static_cast<int>(tails.size());
        int pos_entry = -1, pos_exit = -1;
        for (int i = 0; i < n; ++i) {
            if (tails[i] == entry) pos_entry = i;
            if (tails[i] == exit) pos_exit = i;
        }
        require(pos_entry != -1 && pos_exit != -1, "visit endpoints not on the hole");
        int len = ((pos_exit - pos_entry) % n + n) % n;
        if (len == 0 && force_full) len = n;
        Event ev;
        ev.is_visit = true;
        ev.visit = Visit{k, pos_entry, len};
        raw.push_back(ev);
        for (int i = 0; i < len; ++i)
            raw.push_back(Event{false, hole.slots[(pos_entry + i) % n], {}});
    }

    // Cuts out the stretch between two passes through the same vertex. Only
    // leg intermediates can repeat: cycle vertices stop or block the search,
    // so whole visits either survive intact or disappear inside a cut.
    std::vector<Event> erase_loops(const std::vector<Event>& raw, VertexId from,
                                   VertexId to) const {
        std::vector<Event> kept;
        std::vector<VertexId> path_vertices{from};
        std::vector<size_t> events_at;  // kept.size() when the vertex was appended
        events_at.push_back(0);
        std::map<VertexId, size_t> seen;  // vertex -> index in path_vertices
        for (const Event& ev : raw) {
            if (ev.is_visit) {
                kept.push_back(ev);
                continue;
            }
            VertexId w = emb_.half_edge(ev.slot).head;
            auto it = seen.find(w);
            if (it != seen.end()) {
                size_t p = it->second;
                for (size_t i = p + 1; i < path_vertices.size(); ++i)
                    seen.erase(path_vertices[i]);
                path_vertices.resize(p + 1);
                kept.resize(events_at[p]);
                events_at.resize(p + 1);
            } else {
                kept.push_back(ev);
                if (w != from && w != to) seen[w] = path_vertices.size();
                path_vertices.push_back(w);
                events_at.push_back(kept.size());
            }
        }
        return kept;
    }

    std::vector<int> forward_slots(const std::vector<Event>& events) const {
        std::vector<int> slots;
        for (const Event& ev : events)
            if (!ev.is_visit) slots.push_back(ev.slot);
        return slots;
    }

    // The other side of the connector: legs reversed, each visited hole
    // traversed along its complementary arc. Valid once the forward side has
    // been reversed.
    std::vector<int> conjugate_slots(const std::vector<Event>& events,
                                     const std::vector<Walk>& holes) const {
        std::vector<int> slots;
        std::set<size_t> arc_positions;  // indices of slot events inside visits
        for (size_t i = 0; i < events.size(); ++i) {
            if (!events[i].is_visit) continue;
            for (int j = 0; j < events[i].visit.entry_len; ++j)
                arc_positions.insert(i + 1 + j);
        }
        for (size_t i = events.size(); i-- > 0;) {
            const Event& ev = events[i];
            if (ev.is_visit) {
                const Walk& hole = holes[ev.visit.hole];
                int n = static_cast<int>(hole.slots.size());
                int start = (ev.visit.entry_pos + ev.visit.entry_len) % n;
                for (int j = 0; j < n - ev.visit.entry_len; ++j)
                    slots.push_back(hole.slots[(start + j) % n]);
            } else if (!arc_positions.count(i)) {
                slots.push_back(ev.slot ^ 1);
            }
        }
        return slots;
    }

    // --- the recursive split -------------------------------------------------

    static std::vector<int> positions_of(const std::vector<VertexId>& tails,
                                         VertexId v) {
        std::vector<int> out;
        for (int i = 0; i < static_cast<int>(tails.size()); ++i)
            if (tails[i] == v) out.push_back(i);
        return out;
    }

    static std::vector<int> cyclic_range(const std::vector<int>& slots, int start,
                                         int len) {
        std::vector<int> out;
        int n = static_cast<int>(slots.size());
        for (int i = 0; i < len; ++i) out.push_back(slots[(start + i) % n]);
        return out;
    }

    // Chooses the two sub-walks of this level. `fwd` runs along the current
    // orientation; `conj` is its counterpart, valid only after `fwd`'s side
    // is reversed. The cm-arc assignment (which stretch of cm joins which
    // side, and at which occurrence when cm pinches) is settled by checking
    // the enclosure labels of every candidate.
    void descend(const Walk& cm, const std::vector<Walk>& holes,
                 const std::vector<char>& free) {
        Connector con = build_connector(cm, holes, free);
        std::vector<int> fwd = forward_slots(con.events);
        std::vector<int> conj = conjugate_slots(con.events, holes);
        std::vector<VertexId> cm_tails = slot_tails(emb_, cm.slots);

        std::vector<char> visited_region(emb_.face_count(), 0);
        for (size_t k = 0; k < holes.size(); ++k)
            if (con.visited_holes[k])
                for (int f = 0; f < emb_.face_count(); ++f)
                    if (holes[k].region[f]) visited_region[f] = 1;

        auto partition_ok = [&](const Walk& a, const std::vector<char>& b_region) {
            for (int f = 0; f < emb_.face_count(); ++f) {
                int total = (a.region[f] ? 1 : 0) + (b_region[f] ? 1 : 0) +
                            (visited_region[f] ? 1 : 0);
                if (total != (cm.region[f] ? 1 : 0)) return false;
            }
            return true;
        };

        struct Candidate {
            std::vector<int> c1, c2;
        };
        std::vector<Candidate> candidates;
        if (con.from != con.to) {
            std::vector<int> occ_to = positions_of(cm_tails, con.to);
            std::vector<int> occ_from = positions_of(cm_tails, con.from);
            int n = static_cast<int>(cm.slots.size());
            for (int i : occ_to)
                for (int j : occ_from) {
                    int len1 = ((j - i) % n + n) % n;
                    Candidate cand;
                    cand.c1 = fwd;
                    auto arc1 = cyclic_range(cm.slots, i, len1);
                    cand.c1.insert(cand.c1.end(), arc1.begin(), arc1.end());
                    cand.c2 = conj;
                    auto arc2 = cyclic_range(cm.slots, j, n - len1);
                    cand.c2.insert(cand.c2.end(), arc2.begin(), arc2.end());
                    candidates.push_back(std::move(cand));
                }
        } else {
            // closed connector: cm joins one side whole, the other side none
            std::vector<int> occ = positions_of(cm_tails, con.from);
            for (int i : occ) {
                auto whole = cyclic_range(cm.slots, i, static_cast<int>(cm.slots.size()));
                Candidate a;  // connector alone is ccw
                a.c1 = fwd;
                a.c2 = conj;
                a.c2.insert(a.c2.end(), whole.begin(), whole.end());
                candidates.push_back(std::move(a));
                Candidate b;  // connector is cw; cm joins the forward side
                b.c1 = fwd;
                b.c1.insert(b.c1.end(), whole.begin(), whole.end());
                b.c2 = conj;
                candidates.push_back(std::move(b));
            }
        }

        // One side may come out empty (everything joined the other side);
        // an empty side encloses nothing and is skipped when recursing.
        auto side_walk = [&](const std::vector<int>& slots) -> std::optional<Walk> {
            if (slots.empty()) {
                Walk w;
                w.region.assign(emb_.face_count(), 0);
                w.sign = 1;
                return w;
            }
            std::optional<Walk> w = try_walk(slots);
            if (!w || w->sign != 1 || w->region_size == 0) return std::nullopt;
            return w;
        };

        for (const Candidate& cand : candidates) {
            std::optional<Walk> w1 = side_walk(cand.c1);
            if (!w1) continue;
            std::optional<Walk> w2 = side_walk(cand.c2);
            if (!w2) continue;
            if (!partition_ok(*w1, w2->region)) continue;

            std::vector<Walk> in1, in2;
            bool assign_ok = true;
            for (size_t k = 0; k < holes.size(); ++k) {
                if (con.visited_holes[k]) continue;
                bool inside1 = true, inside2 = true;
                for (int f = 0; f < emb_.face_count() && (inside1 || inside2); ++f) {
                    if (!holes[k].region[f]) continue;
                    if (!w1->region[f]) inside1 = false;
                    if (!w2->region[f]) inside2 = false;
                }
                if (inside1) in1.push_back(holes[k]);
                else if (inside2) in2.push_back(holes[k]);
                else { assign_ok = false; break; }
            }
            if (!assign_ok) continue;

            // Commit: the first side runs along the current orientation now,
            // the second becomes valid once the first has been reversed.
            if (!cand.c1.empty()) reverse_with_holes(walk(cand.c1), in1);
            if (!cand.c2.empty()) reverse_with_holes(walk(cand.c2), in2);
            return;
        }
        std::ostringstream why;
        why << "no valid split of a reversal region was found: walk";
        for (int s : cm.slots) {
            HalfEdge h = emb_.half_edge(s);
            why << " " << h.tail << ">" << h.head;
        }
        why << ", " << holes.size() << " holes, connector " << con.from << ".."
            << con.to << " via";
        for (int s : fwd) {
            HalfEdge h = emb_.half_edge(s);
            why << " " << h.tail << ">" << h.head;
        }
        why << ", " << candidates.size() << " candidates";
        throw invariant_error(why.str());
    }

    const Embedding& emb_;
    Orientation cur_;
    int frame_outer_;
    std::vector<FaceId> seq_;
    std::vector<int> counts_;
    std::vector<std::vector<int>> incident_;  // vertex index -> edge indices
};

// ---------------------------------------------------------------------------
// Driver: repeatedly pick a maximal clockwise cycle, its minimal enclosing
// counterclockwise cycle and every maximal clockwise cycle inside it, reverse
// that group, and rebuild the remaining difference.
// ---------------------------------------------------------------------------

Engine::Walk walk_of_cycle(const Engine& eng, const Embedding& emb,
                           const DirectedCycle& cycle) {
    std::vector<int> slots;
    for (const HalfEdge& h : cycle.walk) slots.push_back(emb.slot(h));
    Engine::Walk w = eng.walk(std::move(slots));
    require(w.sign == (cycle.turn == Turn::ccw ? 1 : -1),
            "cycle classification disagrees with walk enclosure");
    return w;
}

void run_to_target(Engine& eng, const Orientation& target, int frame_outer) {
    const Embedding& emb = target.embedding();
    while (true) {
        EulerianDifference diff = difference(eng.current(), target);
        if (diff.empty()) return;
        std::vector<int> z = crossing_potential(emb, diff.direction_mask(), frame_outer);
        for (int value : z)
            require(value >= 0, "difference potential went negative during reversal");
        CycleSystem sys =
            classify_and_nest(standard_cycle_system(diff, emb), emb, emb.mode(),
                              emb.faces()[frame_outer].id);

        std::vector<int> cw, ccw;
        for (int i = 0; i < static_cast<int>(sys.cycles.size()); ++i)
            (sys.cycles[i].turn == Turn::cw ? cw : ccw).push_back(i);

        auto contains = [&](int outer, int inner) {
            const auto& a = sys.cycles[outer].interior;
            const auto& b = sys.cycles[inner].interior;
            return std::includes(a.begin(), a.end(), b.begin(), b.end());
        };
        auto canonical = [&](int i) { return sys.cycles[i].canonical_id; };

        if (cw.empty()) {
            int pick = *std::min_element(ccw.begin(), ccw.end(),
                                         [&](int a, int b) {
                                             return canonical(a) < canonical(b);
                                         });
            eng.reverse_with_holes(walk_of_cycle(eng, emb, sys.cycles[pick]), {});
            continue;
        }

        // maximal clockwise cycles: contained in no other clockwise cycle
        std::vector<int> maximal;
        for (int i : cw) {
            bool top = true;
            for (int j : cw)
                if (i != j && contains(j, i)) { top = false; break; }
            if (top) maximal.push_back(i);
        }
        int first_cw = *std::min_element(maximal.begin(), maximal.end(),
                                         [&](int a, int b) {
                                             return canonical(a) < canonical(b);
                                         });
        int enclosing = -1;
        for (int i : ccw) {
            if (!contains(i, first_cw)) continue;
            if (enclosing == -1 ||
                sys.cycles[i].interior.size() < sys.cycles[enclosing].interior.size() ||
                (sys.cycles[i].interior.size() == sys.cycles[enclosing].interior.size() &&
                 canonical(i) < canonical(enclosing)))
                enclosing = i;
        }
        require(enclosing != -1,
                "no enclosing counterclockwise cycle for a maximal clockwise cycle");

        std::vector<Engine::Walk> holes;
        for (int i : maximal)
            if (contains(enclosing, i))
                holes.push_back(walk_of_cycle(eng, emb, sys.cycles[i]));
        eng.reverse_with_holes(walk_of_cycle(eng, emb, sys.cycles[enclosing]), holes);
    }
}

// Frame and per-face quota of a transformation, shared by the sequence
// builders and the certificates.
struct Plan {
    int frame_outer;            // face index
    std::vector<int> quota;     // by face index; always >= 0
    PotentialMap potential;     // as reported to the caller
};

int argmin_face_index(const Embedding& emb, const std::vector<int>& values) {
    int best = -1;
    for (FaceId id : sorted_face_ids(emb)) {
        int idx = emb.face_index(id);
        if (best == -1 || values[idx] < values[best]) best = idx;
    }
    return best;
}

Plan make_plan(const Orientation& dp, const Orientation& d,
               std::optional<FaceId> f) {
    const Embedding& emb = dp.embedding();
    require_same_alpha(dp, d);
    require_strongly_connected(dp, "flip distance");
    require_strongly_connected(d, "flip distance");
    EulerianDifference diff = difference(dp, d);
    Plan plan;
    if (emb.mode() == SurfaceMode::plane) {
        plan.potential = plane_potential(diff, emb);
        if (plan.potential.min_value() < 0)
            throw domain_error("incomparable: the difference potential is negative "
                               "on some face");
        plan.frame_outer = emb.outer_face_index();
        plan.quota = plan.potential.values;
    } else {
        FaceId root = f.value_or(sorted_face_ids(emb).front());
        plan.potential = sphere_potential(diff, emb, root);
        int base = plan.potential.min_value();
        plan.frame_outer = argmin_face_index(emb, plan.potential.values);
        plan.quota.resize(emb.face_count());
        for (int i = 0; i < emb.face_count(); ++i)
            plan.quota[i] = plan.potential.values[i] - base;
    }
    return plan;
}

}  // namespace

std::vector<FaceId> flippable_faces(const Orientation& d) {
    require_strongly_connected(d, "flippable_faces");
    const Embedding& emb = d.embedding();
    std::vector<FaceId> out;
    for (const Face& face : emb.faces()) {
        if (emb.mode() == SurfaceMode::plane && face.id == emb.outer_face()) continue;
        bool directed = true;
        for (const HalfEdge& h : face.boundary)
            if (!d.points_along(h)) { directed = false; break; }
        if (directed) out.push_back(face.id);
    }
    std::sort(out.begin(), out.end());
    return out;
}

Orientation apply_flip(const Orientation& d, FaceId g) {
    require_strongly_connected(d, "apply_flip");
    const Embedding& emb = d.embedding();
    const Face& face = emb.face(g);
    if (emb.mode() == SurfaceMode::plane && g == emb.outer_face())
        throw domain_error("the outer face cannot be flipped");
    std::vector<EdgeId> edges;
    for (const HalfEdge& h : face.boundary) {
        if (!d.points_along(h))
            throw domain_error("face " + std::to_string(g) +
                               " is not flippable: its boundary is not a "
                               "counterclockwise directed cycle");
        edges.push_back(h.edge);
    }
    return d.with_reversed(edges);
}

Orientation apply_sequence(const Orientation& d, const FlipSequence& seq) {
    Orientation out = d;
    for (FaceId g : seq.flips) out = apply_flip(out, g);
    return out;
}

bool comparable(const Orientation& dp, const Orientation& d) {
    if (dp.embedding().mode() != SurfaceMode::plane)
        throw domain_error("comparable is a plane-mode test");
    require_same_alpha(dp, d);
    require_strongly_connected(dp, "comparable");
    require_strongly_connected(d, "comparable");
    PotentialMap z = plane_potential(difference(dp, d), dp.embedding());
    return z.min_value() >= 0;
}

std::optional<int> plane_distance(const Orientation& dp, const Orientation& d) {
    if (dp.embedding().mode() != SurfaceMode::plane)
        throw domain_error("plane_distance requires a plane embedding");
    require_same_alpha(dp, d);
    require_strongly_connected(dp, "plane_distance");
    require_strongly_connected(d, "plane_distance");
    PotentialMap z = plane_potential(difference(dp, d), dp.embedding());
    if (z.min_value() < 0) return std::nullopt;
    return z.sum();
}

int cycle_count_distance(const Orientation& dp, const Orientation& d) {
    if (!comparable(dp, d))
        throw domain_error("cycle_count_distance requires a comparable pair");
    const Embedding& emb = dp.embedding();
    CycleSystem sys = classify_and_nest(standard_cycle_system(difference(dp, d), emb),
                                        emb, emb.mode(), emb.outer_face());
    int total = 0;
    for (const DirectedCycle& c : sys.cycles) {
        int faces = static_cast<int>(c.interior.size());
        total += c.turn == Turn::ccw ? faces : -faces;
    }
    return total;
}

int sphere_distance(const Orientation& dp, const Orientation& d, FaceId f) {
    if (dp.embedding().mode() != SurfaceMode::sphere)
        throw domain_error("sphere_distance requires a sphere embedding");
    require_same_alpha(dp, d);
    require_strongly_connected(dp, "sphere_distance");
    require_strongly_connected(d, "sphere_distance");
    PotentialMap z = sphere_potential(difference(dp, d), dp.embedding(), f);
    return z.sum() - z.min_value() * dp.embedding().face_count();
}

namespace {

// shared validation for the public cycle-reversal entry points
struct CheckedCycle {
    std::vector<HalfEdge> walk;
    std::vector<FaceId> interior;
    Turn turn;
};

CheckedCycle check_cycle(const Orientation& d, const std::vector<HalfEdge>& edges) {
    const Embedding& emb = d.embedding();
    CheckedCycle out;
    out.walk = as_cyclic_walk(emb, edges);
    for (const HalfEdge& h : out.walk)
        if (!d.points_along(h))
            throw domain_error("cycle is not directed in the orientation at edge " +
                               std::to_string(h.edge));
    std::vector<EdgeId> ids;
    for (const HalfEdge& h : out.walk) ids.push_back(h.edge);
    out.interior = emb.interior_faces(ids);
    int inside = 0, outside = 0;
    for (const HalfEdge& h : out.walk) {
        bool left_in = std::binary_search(out.interior.begin(), out.interior.end(),
                                          emb.left_face(h));
        (left_in ? inside : outside)++;
    }
    require(inside == 0 || outside == 0, "cycle classification inconsistent");
    out.turn = inside ? Turn::ccw : Turn::cw;
    return out;
}

}  // namespace

FlipSequence reverse_ccw_cycle(const Orientation& d,
                               const std::vector<HalfEdge>& cycle) {
    const Embedding& emb = d.embedding();
    if (emb.mode() != SurfaceMode::plane)
        throw domain_error("reverse_ccw_cycle requires a plane embedding");
    require_strongly_connected(d, "reverse_ccw_cycle");
    CheckedCycle checked = check_cycle(d, cycle);
    if (checked.turn != Turn::ccw)
        throw domain_error("cycle is clockwise; only counterclockwise cycles flip");

    Engine eng(d, emb.outer_face_index());
    std::vector<int> slots;
    for (const HalfEdge& h : checked.walk) slots.push_back(emb.slot(h));
    eng.reverse_with_holes(eng.walk(slots), {});

    std::vector<EdgeId> ids;
    for (const HalfEdge& h : checked.walk) ids.push_back(h.edge);
    require(eng.current() == d.with_reversed(ids),
            "reversal changed edges outside the cycle");
    FlipSequence seq;
    seq.mode = emb.mode();
    seq.flips = eng.sequence();
    return seq;
}

FlipSequence reverse_nested(const Orientation& d,
                            const std::vector<HalfEdge>& ccw_cycle,
                            const std::vector<std::vector<HalfEdge>>& cw_cycles) {
    const Embedding& emb = d.embedding();
    if (emb.mode() != SurfaceMode::plane)
        throw domain_error("reverse_nested requires a plane embedding");
    require_strongly_connected(d, "reverse_nested");
    CheckedCycle outer = check_cycle(d, ccw_cycle);
    if (outer.turn != Turn::ccw)
        throw domain_error("outer cycle must be counterclockwise");

    std::vector<CheckedCycle> inner;
    std::set<EdgeId> used;
    for (const HalfEdge& h : outer.walk) used.insert(h.edge);
    for (const auto& edges : cw_cycles) {
        CheckedCycle c = check_cycle(d, edges);
        if (c.turn != Turn::cw)
            throw domain_error("inner cycles must be clockwise");
        if (!std::includes(outer.interior.begin(), outer.interior.end(),
                           c.interior.begin(), c.interior.end()))
            throw domain_error("inner cycle is not contained in the outer cycle");
        for (const HalfEdge& h : c.walk)
            if (!used.insert(h.edge).second)
                throw domain_error("cycles share edge " + std::to_string(h.edge));
        for (const CheckedCycle& other : inner) {
            std::vector<FaceId> common;
            std::set_intersection(c.interior.begin(), c.interior.end(),
                                  other.interior.begin(), other.interior.end(),
                                  std::back_inserter(common));
            if (!common.empty())
                throw domain_error("inner cycles are not pairwise exclusive");
        }
        inner.push_back(std::move(c));
    }

    Engine eng(d, emb.outer_face_index());
    auto slots_of = [&](const CheckedCycle& c) {
        std::vector<int> slots;
        for (const HalfEdge& h : c.walk) slots.push_back(emb.slot(h));
        return slots;
    };
    std::vector<Engine::Walk> holes;
    for (const CheckedCycle& c : inner) holes.push_back(eng.walk(slots_of(c)));
    eng.reverse_with_holes(eng.walk(slots_of(outer)), holes);

    std::vector<EdgeId> ids;
    for (EdgeId e : used) ids.push_back(e);
    require(eng.current() == d.with_reversed(ids),
            "reversal changed edges outside the given cycles");
    FlipSequence seq;
    seq.mode = emb.mode();
    seq.flips = eng.sequence();
    return seq;
}

FlipSequence flip_sequence(const Orientation& dp, const Orientation& d,
                           std::optional<FaceId> f) {
    const Embedding& emb = dp.embedding();
    FlipSequence seq;
    seq.mode = emb.mode();
    if (dp == d) {
        require_same_alpha(dp, d);
        require_strongly_connected(dp, "flip_sequence");
        return seq;
    }
    Plan plan = make_plan(dp, d, f);
    Engine eng(dp, plan.frame_outer);
    run_to_target(eng, d, plan.frame_outer);
    require(eng.current() == d, "flip sequence did not reach the target");
    require(eng.counts() == plan.quota,
            "per-face flip counts disagree with the potential");
    seq.flips = eng.sequence();
    return seq;
}

FlipSequence greedy_sequence(const Orientation& dp, const Orientation& d,
                             std::optional<FaceId> f) {
    const Embedding& emb = dp.embedding();
    FlipSequence seq;
    seq.mode = emb.mode();
    if (dp == d) {
        require_same_alpha(dp, d);
        require_strongly_connected(dp, "greedy_sequence");
        return seq;
    }
    Plan plan = make_plan(dp, d, f);
    std::vector<int> quota = plan.quota;
    int total = std::accumulate(quota.begin(), quota.end(), 0);
    Orientation cur = dp;
    while (total > 0) {
        FaceId pick = -1;
        for (FaceId g : flippable_faces(cur)) {
            if (quota[emb.face_index(g)] > 0) { pick = g; break; }
        }
        if (pick == -1) {
            std::ostringstream dump;
            dump << "greedy flip selection stalled with quota remaining;"
                 << " remaining per face:";
            for (FaceId g : sorted_face_ids(emb))
                dump << " " << g << ":" << quota[emb.face_index(g)];
            dump << "; current orientation:";
            for (const auto& e : emb.edges()) {
                HalfEdge h = cur.directed(e.id);
                dump << " " << e.id << ":" << h.tail << "->" << h.head;
            }
            throw invariant_error(dump.str());
        }
        cur = apply_flip(cur, pick);
        quota[emb.face_index(pick)]--;
        --total;
        seq.flips.push_back(pick);
    }
    require(cur == d, "greedy sequence exhausted its quotas off target");
    return seq;
}

DistanceCertificate distance_certificate(const Orientation& dp, const Orientation& d,
                                         std::optional<FaceId> f, uint64_t peel_seed) {
    const Embedding& emb = dp.embedding();
    require_same_alpha(dp, d);
    require_strongly_connected(dp, "distance_certificate");
    require_strongly_connected(d, "distance_certificate");

    DistanceCertificate cert;
    cert.mode = emb.mode();
    cert.sequence.mode = emb.mode();
    EulerianDifference diff = difference(dp, d);

    if (emb.mode() == SurfaceMode::plane) {
        cert.potential = plane_potential(diff, emb);
        cert.cycles = classify_and_nest(standard_cycle_system(diff, emb, peel_seed),
                                        emb, emb.mode(), emb.outer_face());
        if (cert.potential.min_value() >= 0) {
            cert.distance = cert.potential.sum();
            cert.sequence = flip_sequence(dp, d);
        }
    } else {
        FaceId root = f.value_or(sorted_face_ids(emb).front());
        cert.potential = sphere_potential(diff, emb, root);
        int base = cert.potential.min_value();
        int frame = argmin_face_index(emb, cert.potential.values);
        cert.cycles = classify_and_nest(standard_cycle_system(diff, emb, peel_seed),
                                        emb, emb.mode(), emb.faces()[frame].id);
        cert.distance = cert.potential.sum() - base * emb.face_count();
        cert.sequence = flip_sequence(dp, d, root);
    }
    if (cert.distance) {
        for (FaceId g : cert.sequence.flips) cert.per_face_counts[g]++;
        require(*cert.distance == cert.sequence.size(),
                "certificate distance disagrees with its own sequence");
    }
    return cert;
}

}  // namespace flipdist
