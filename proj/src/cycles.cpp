#include "flipdist/cycles.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <string>

namespace flipdist {

std::vector<EdgeId> DirectedCycle::edge_ids() const {
    std::vector<EdgeId> ids;
    ids.reserve(walk.size());
    for (const HalfEdge& h : walk) ids.push_back(h.edge);
    return ids;
}

namespace {

uint64_t mix(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

int orbit_code(const Embedding& emb, const std::vector<int>& orbit) {
    int code = std::numeric_limits<int>::max();
    for (int s : orbit) code = std::min(code, emb.half_edge_code(emb.half_edge(s)));
    return code;
}

// Splits a closed walk into simple cycles: whenever the walk returns to a
// vertex already on the open path, the enclosed stretch comes off as one
// cycle. A closed walk decomposes completely this way.
std::vector<std::vector<HalfEdge>> split_simple(const Embedding& emb,
                                                const std::vector<int>& orbit) {
    std::vector<std::vector<HalfEdge>> cycles;
    std::vector<HalfEdge> path;
    std::map<VertexId, int> depth;  // vertex -> position in path where it starts
    HalfEdge first = emb.half_edge(orbit.front());
    depth[first.tail] = 0;
    for (int s : orbit) {
        HalfEdge h = emb.half_edge(s);
        path.push_back(h);
        auto it = depth.find(h.head);
        if (it != depth.end()) {
            std::vector<HalfEdge> cycle(path.begin() + it->second, path.end());
            for (const HalfEdge& c : cycle)
                if (c.tail != h.head) depth.erase(c.tail);
            path.erase(path.begin() + it->second, path.end());
            cycles.push_back(std::move(cycle));
        } else {
            depth[h.head] = static_cast<int>(path.size());
        }
    }
    if (!path.empty())
        throw invariant_error("closed walk did not decompose into cycles");
    return cycles;
}

}  // namespace

CycleSystem standard_cycle_system(const EulerianDifference& diff,
                                  const Embedding& emb, uint64_t peel_seed) {
    CycleSystem system;
    if (diff.edges.empty()) return system;
    if (diff.embedding != &emb)
        throw domain_error("difference belongs to a different embedding");

    std::vector<uint8_t> dirs = diff.direction_mask();
    std::vector<char> present(emb.edge_count(), 0);
    int remaining = 0;
    for (int i = 0; i < emb.edge_count(); ++i)
        if (dirs[i]) {
            present[i] = 1;
            ++remaining;
        }

    while (remaining > 0) {
        std::vector<std::vector<int>> orbits = detail::trace_orbits(emb, present);
        // Keep the orbits whose every half-edge runs along the difference.
        std::vector<std::vector<int>*> directed;
        for (auto& orbit : orbits) {
            bool ok = true;
            for (int s : orbit) {
                bool forward = (s % 2) == 0;
                if ((dirs[s / 2] == 1) != forward) {
                    ok = false;
                    break;
                }
            }
            if (ok) directed.push_back(&orbit);
        }
        if (directed.empty())
            throw invariant_error(
                "no directed facial walk in a nonempty balanced edge set; "
                "the difference or the embedding is corrupt");
        std::sort(directed.begin(), directed.end(),
                  [&](const std::vector<int>* a, const std::vector<int>* b) {
                      int ca = orbit_code(emb, *a), cb = orbit_code(emb, *b);
                      if (peel_seed != 0) {
                          uint64_t ka = mix(peel_seed ^ static_cast<uint64_t>(ca));
                          uint64_t kb = mix(peel_seed ^ static_cast<uint64_t>(cb));
                          if (ka != kb) return ka < kb;
                      }
                      return ca < cb;
                  });
        const std::vector<int>& pick = *directed.front();
        for (auto& cycle_edges : split_simple(emb, pick)) {
            DirectedCycle cycle;
            cycle.walk = std::move(cycle_edges);
            cycle.canonical_id = std::numeric_limits<int>::max();
            for (const HalfEdge& h : cycle.walk)
                cycle.canonical_id =
                    std::min(cycle.canonical_id, FaceId{emb.half_edge_code(h)});
            system.cycles.push_back(std::move(cycle));
        }
        for (int s : pick) {
            present[s / 2] = 0;
            --remaining;
        }
    }
    return system;
}

CycleSystem classify_and_nest(CycleSystem system, const Embedding& emb,
                              SurfaceMode mode,
                              std::optional<FaceId> reference_outside) {
    FaceId outside;
    if (reference_outside) {
        outside = *reference_outside;
    } else if (mode == SurfaceMode::plane && emb.mode() == SurfaceMode::plane) {
        outside = emb.outer_face();
    } else if (mode == SurfaceMode::plane) {
        throw domain_error("plane classification needs an outer face");
    } else {
        throw domain_error("sphere classification needs a designated outside face");
    }

    for (DirectedCycle& cycle : system.cycles) {
        cycle.interior = emb.enclosed_faces(cycle.edge_ids(), outside);
        int inside_votes = 0, outside_votes = 0;
        for (const HalfEdge& h : cycle.walk) {
            bool left_in = std::binary_search(cycle.interior.begin(),
                                              cycle.interior.end(), emb.left_face(h));
            (left_in ? inside_votes : outside_votes)++;
        }
        if (inside_votes && outside_votes)
            throw invariant_error("cycle classification is inconsistent along cycle " +
                                  std::to_string(cycle.canonical_id) +
                                  "; embedding or cycle is corrupt");
        cycle.turn = inside_votes ? Turn::ccw : Turn::cw;
    }

    // Nesting forest: parent = smallest enclosing interior. Interiors in a
    // valid system are pairwise disjoint or nested, which we verify here.
    int n = static_cast<int>(system.cycles.size());
    for (int i = 0; i < n; ++i) {
        system.cycles[i].parent = -1;
        size_t best = std::numeric_limits<size_t>::max();
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            const auto& a = system.cycles[i].interior;
            const auto& b = system.cycles[j].interior;
            bool a_in_b = std::includes(b.begin(), b.end(), a.begin(), a.end());
            bool b_in_a = std::includes(a.begin(), a.end(), b.begin(), b.end());
            std::vector<FaceId> common;
            std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                                  std::back_inserter(common));
            if (!common.empty() && !a_in_b && !b_in_a)
                throw invariant_error("cycle interiors cross; not a standard system");
            if (a_in_b && b.size() > a.size() && b.size() < best) {
                best = b.size();
                system.cycles[i].parent = j;
            }
        }
    }
    system.classified = true;
    return system;
}

}  // namespace flipdist
