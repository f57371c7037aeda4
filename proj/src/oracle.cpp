#include "flipdist/oracle.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <queue>
#include <set>
#include <sstream>
#include <unordered_map>

#include "flipdist/flips.hpp"
#include "flipdist/potential.hpp"

namespace flipdist {

std::optional<int> OrientationUniverse::index_of(const Orientation& d) const {
    uint64_t code = d.bit_code();
    auto cmp = [](const Orientation& o, uint64_t c) { return o.bit_code() < c; };
    auto it = std::lower_bound(all.begin(), all.end(), code, cmp);
    if (it == all.end() || it->bit_code() != code) return std::nullopt;
    return static_cast<int>(it - all.begin());
}

OrientationUniverse enumerate_alpha_orientations(const Embedding& emb,
                                                 const AlphaSpec& alpha,
                                                 std::size_t budget) {
    if (static_cast<int>(alpha.out_degree.size()) != emb.vertex_count())
        throw domain_error("alpha must cover exactly the embedding's vertices");
    OrientationUniverse universe;
    universe.embedding = &emb;
    universe.alpha = alpha;
    if (alpha.sum() != emb.edge_count()) return universe;  // nothing can match

    int ne = emb.edge_count();
    std::vector<int> need(emb.vertex_count());       // out-degree still required
    std::vector<int> remaining(emb.vertex_count());  // undecided incident edges
    for (const auto& v : emb.vertices()) {
        need[emb.vertex_index(v.id)] = alpha.at(v.id);
        remaining[emb.vertex_index(v.id)] = emb.degree(v.id);
    }

    std::vector<uint8_t> dir(ne, 0);
    std::size_t nodes = 0;

    std::function<void(int)> explore = [&](int ei) {
        if (++nodes > budget)
            throw domain_error("enumeration budget of " + std::to_string(budget) +
                               " nodes exceeded");
        if (ei == ne) {
            universe.all.emplace_back(emb, dir);
            return;
        }
        auto [u, v] = emb.ends(emb.edge_id(ei));
        int ui = emb.vertex_index(u), vi = emb.vertex_index(v);
        remaining[ui]--;
        remaining[vi]--;
        for (int side = 0; side < 2; ++side) {
            int t = side == 0 ? ui : vi;
            int o = side == 0 ? vi : ui;
            if (need[t] == 0) continue;                 // tail has no capacity left
            if (need[o] > remaining[o]) continue;       // the other end cannot finish
            need[t]--;
            dir[ei] = static_cast<uint8_t>(side);
            explore(ei + 1);
            need[t]++;
        }
        remaining[ui]++;
        remaining[vi]++;
    };
    explore(0);

    std::sort(universe.all.begin(), universe.all.end(),
              [](const Orientation& a, const Orientation& b) {
                  return a.bit_code() < b.bit_code();
              });
    return universe;
}

namespace {

// Flippability straight from the face boundary: every boundary half-edge of
// the face must run along the orientation.
bool oracle_flippable(const Orientation& d, const Face& face) {
    for (const HalfEdge& h : face.boundary)
        if (!d.points_along(h)) return false;
    return true;
}

Orientation oracle_flip(const Orientation& d, const Face& face) {
    std::vector<EdgeId> edges;
    for (const HalfEdge& h : face.boundary) edges.push_back(h.edge);
    return d.with_reversed(edges);
}

}  // namespace

FlipGraph build_flip_graph(const OrientationUniverse& universe, SurfaceMode mode,
                           std::optional<FaceId> outer) {
    const Embedding& emb = *universe.embedding;
    FaceId skip = -1;
    if (mode == SurfaceMode::plane) {
        if (outer) skip = *outer;
        else if (emb.mode() == SurfaceMode::plane) skip = emb.outer_face();
        else throw domain_error("plane flip graph needs an outer face");
    }

    std::unordered_map<uint64_t, int> index;
    for (int i = 0; i < universe.size(); ++i)
        index.emplace(universe.all[i].bit_code(), i);

    FlipGraph graph;
    graph.mode = mode;
    graph.arcs.resize(universe.size());
    for (int i = 0; i < universe.size(); ++i) {
        for (const Face& face : emb.faces()) {
            if (mode == SurfaceMode::plane && face.id == skip) continue;
            if (!oracle_flippable(universe.all[i], face)) continue;
            Orientation next = oracle_flip(universe.all[i], face);
            auto it = index.find(next.bit_code());
            require(it != index.end(),
                    "a flip left the enumerated universe; enumeration incomplete");
            graph.arcs[i].push_back({it->second, face.id});
        }
    }
    return graph;
}

std::vector<std::optional<int>> bfs_distances(const FlipGraph& graph, int from) {
    std::vector<std::optional<int>> dist(graph.size());
    std::queue<int> queue;
    dist[from] = 0;
    queue.push(from);
    while (!queue.empty()) {
        int x = queue.front();
        queue.pop();
        for (const FlipGraph::Arc& arc : graph.arcs[x])
            if (!dist[arc.to]) {
                dist[arc.to] = *dist[x] + 1;
                queue.push(arc.to);
            }
    }
    return dist;
}

std::optional<int> bfs_distance(const FlipGraph& graph, int from, int to) {
    return bfs_distances(graph, from)[to];
}

bool VerifyReport::all_pass() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const Check& c) { return c.pass; });
}

std::string VerifyReport::text() const {
    std::ostringstream out;
    out << "verify " << instance << "\n";
    for (const Check& c : checks) {
        out << "  [" << (c.pass ? "pass" : "FAIL") << "] " << c.name;
        if (!c.detail.empty()) out << ": " << c.detail;
        out << "\n";
    }
    out << (all_pass() ? "all checks passed" : "SOME CHECKS FAILED") << "\n";
    return out.str();
}

namespace {

struct Checker {
    VerifyReport& report;

    void add(const std::string& name, bool pass, const std::string& detail = "") {
        report.checks.push_back({name, pass, detail});
    }
};

std::string pair_tag(int i, int j) {
    return "pair (" + std::to_string(i) + "," + std::to_string(j) + ")";
}

}  // namespace

VerifyReport verify_instance(const Embedding& emb, const AlphaSpec& alpha,
                             std::size_t budget) {
    VerifyReport report;
    {
        std::ostringstream tag;
        tag << to_string(emb.mode()) << " V=" << emb.vertex_count()
            << " E=" << emb.edge_count() << " F=" << emb.face_count() << " alpha=(";
        bool first = true;
        for (const auto& [v, a] : alpha.out_degree) {
            if (!first) tag << ",";
            tag << v << ":" << a;
            first = false;
        }
        tag << ")";
        report.instance = tag.str();
    }
    Checker check{report};

    check.add("euler", emb.vertex_count() - emb.edge_count() + emb.face_count() == 2,
              "V-E+F=" + std::to_string(emb.vertex_count() - emb.edge_count() +
                                        emb.face_count()));

    OrientationUniverse universe = enumerate_alpha_orientations(emb, alpha, budget);
    int n = universe.size();
    check.add("universe-nonempty", n > 0, std::to_string(n) + " orientations");
    if (n == 0) return report;

    // independent completeness check: scan the whole direction space
    if (emb.edge_count() <= 20) {
        std::set<uint64_t> brute;
        for (uint64_t code = 0; code < (uint64_t{1} << emb.edge_count()); ++code) {
            std::vector<uint8_t> bits(emb.edge_count());
            for (int i = 0; i < emb.edge_count(); ++i) bits[i] = (code >> i) & 1;
            Orientation d(emb, bits);
            if (is_alpha_orientation(d, alpha)) brute.insert(code);
        }
        std::set<uint64_t> enumerated;
        for (const Orientation& d : universe.all) enumerated.insert(d.bit_code());
        check.add("universe-complete", brute == enumerated,
                  std::to_string(brute.size()) + " by scan, " +
                      std::to_string(enumerated.size()) + " enumerated");
    }

    // rigid edges: same answer from every witness, and matching the
    // definition (one direction across the whole universe)
    {
        std::vector<EdgeId> expected;
        for (const auto& e : emb.edges()) {
            bool fwd = false, rev = false;
            for (const Orientation& d : universe.all)
                (d.tail(e.id) == e.u ? fwd : rev) = true;
            if (!(fwd && rev)) expected.push_back(e.id);
        }
        bool ok = true;
        std::string detail = std::to_string(expected.size()) + " rigid edges";
        for (int i = 0; i < n && ok; ++i) {
            if (rigid_edges(emb, alpha, universe.all[i]) != expected) {
                ok = false;
                detail = "witness " + std::to_string(i) + " disagrees";
            }
        }
        check.add("rigid-edges", ok, detail);
    }

    // every ordered pair has a balanced difference
    {
        bool ok = true;
        std::string detail;
        for (int i = 0; i < n && ok; ++i)
            for (int j = 0; j < n && ok; ++j) {
                try {
                    difference(universe.all[i], universe.all[j]);
                } catch (const std::exception& ex) {
                    ok = false;
                    detail = pair_tag(i, j) + ": " + ex.what();
                }
            }
        check.add("differences-balanced", ok, detail);
    }

    std::vector<char> sc(n, 0);
    int sc_count = 0;
    for (int i = 0; i < n; ++i) {
        sc[i] = is_strongly_connected(universe.all[i]);
        sc_count += sc[i];
    }

    FlipGraph graph = build_flip_graph(universe, emb.mode(), std::nullopt);
    std::vector<std::vector<std::optional<int>>> dist(n);
    for (int i = 0; i < n; ++i) dist[i] = bfs_distances(graph, i);

    if (emb.mode() == SurfaceMode::plane) {
        // order structure: only meaningful when every orientation is strongly
        // connected (otherwise facial flips do not capture the full order)
        if (sc_count == n) {
            bool acyclic = true;
            std::string detail;
            for (int i = 0; i < n && acyclic; ++i)
                for (const auto& arc : graph.arcs[i])
                    if (dist[arc.to][i]) {
                        acyclic = false;
                        detail = "cycle through " + pair_tag(i, arc.to);
                    }
            check.add("flip-graph-acyclic", acyclic, detail);

            int sinks = 0, sources = 0;
            std::vector<int> indeg(n, 0);
            for (int i = 0; i < n; ++i)
                for (const auto& arc : graph.arcs[i]) indeg[arc.to]++;
            for (int i = 0; i < n; ++i) {
                if (graph.arcs[i].empty()) ++sinks;
                if (indeg[i] == 0) ++sources;
            }
            check.add("unique-sink-and-source", sinks == 1 && sources == 1,
                      std::to_string(sinks) + " sinks, " + std::to_string(sources) +
                          " sources");
        } else {
            check.add("flip-graph-acyclic", true,
                      "skipped: " + std::to_string(n - sc_count) +
                          " orientations are not strongly connected");
        }

        bool order_ok = true, dist_ok = true, corollary_ok = true;
        bool replay_ok = true, greedy_ok = true;
        std::string order_d, dist_d, corollary_d, replay_d, greedy_d;
        for (int i = 0; i < n; ++i) {
            if (!sc[i]) continue;
            for (int j = 0; j < n; ++j) {
                if (!sc[j]) continue;
                bool cmp = comparable(universe.all[i], universe.all[j]);
                bool reach = dist[i][j].has_value();
                if (cmp != reach && order_ok) {
                    order_ok = false;
                    order_d = pair_tag(i, j) + (cmp ? " comparable but unreachable"
                                                    : " reachable but incomparable");
                }
                std::optional<int> formula =
                    plane_distance(universe.all[i], universe.all[j]);
                if (formula.has_value() != cmp && dist_ok) {
                    dist_ok = false;
                    dist_d = pair_tag(i, j) + " distance/comparable mismatch";
                }
                if (!cmp || !reach) continue;
                if (*formula != *dist[i][j] && dist_ok) {
                    dist_ok = false;
                    dist_d = pair_tag(i, j) + " formula " + std::to_string(*formula) +
                             " vs bfs " + std::to_string(*dist[i][j]);
                }
                int by_cycles = cycle_count_distance(universe.all[i], universe.all[j]);
                if (by_cycles != *formula && corollary_ok) {
                    corollary_ok = false;
                    corollary_d = pair_tag(i, j) + " cycle count " +
                                  std::to_string(by_cycles) + " vs " +
                                  std::to_string(*formula);
                }
                // certificate: replay the sequence with the oracle's own flips
                DistanceCertificate cert =
                    distance_certificate(universe.all[i], universe.all[j]);
                Orientation replay = universe.all[i];
                bool valid = cert.distance && *cert.distance == *formula &&
                             cert.sequence.size() == *formula;
                for (FaceId g : cert.sequence.flips) {
                    if (!valid) break;
                    const Face& face = emb.face(g);
                    if (face.id == emb.outer_face() ||
                        !oracle_flippable(replay, face)) {
                        valid = false;
                        break;
                    }
                    replay = oracle_flip(replay, face);
                }
                if (valid) valid = replay == universe.all[j];
                if (valid)
                    for (const Face& face : emb.faces()) {
                        int t = cert.per_face_counts.count(face.id)
                                    ? cert.per_face_counts.at(face.id)
                                    : 0;
                        if (t != cert.potential.at(face.id)) valid = false;
                    }
                if (!valid && replay_ok) {
                    replay_ok = false;
                    replay_d = pair_tag(i, j);
                }
                try {
                    FlipSequence greedy =
                        greedy_sequence(universe.all[i], universe.all[j]);
                    if (greedy.size() != *formula && greedy_ok) {
                        greedy_ok = false;
                        greedy_d = pair_tag(i, j) + " greedy length " +
                                   std::to_string(greedy.size());
                    }
                } catch (const std::exception& ex) {
                    if (greedy_ok) {
                        greedy_ok = false;
                        greedy_d = pair_tag(i, j) + " stalled: " + ex.what();
                    }
                }
            }
        }
        check.add("comparable-iff-reachable", order_ok, order_d);
        check.add("formula-equals-bfs", dist_ok, dist_d);
        check.add("cycle-count-distance", corollary_ok, corollary_d);
        check.add("certificates-replay", replay_ok, replay_d);
        check.add("greedy-agrees", greedy_ok, greedy_d);
    } else {
        check.add("all-strongly-connected", sc_count == n,
                  std::to_string(sc_count) + "/" + std::to_string(n));

        bool connected = true;
        std::string conn_d;
        for (int i = 0; i < n && connected; ++i)
            for (int j = 0; j < n && connected; ++j)
                if (!dist[i][j]) {
                    connected = false;
                    conn_d = pair_tag(i, j) + " unreachable";
                }
        check.add("flip-graph-strongly-connected", connected, conn_d);

        bool dist_ok = true, ref_ok = true, replay_ok = true, greedy_ok = true;
        std::string dist_d, ref_d, replay_d, greedy_d;
        for (int i = 0; i < n; ++i) {
            if (!sc[i]) continue;
            for (int j = 0; j < n; ++j) {
                if (!sc[j]) continue;
                int formula = -1;
                for (const Face& face : emb.faces()) {
                    int value =
                        sphere_distance(universe.all[i], universe.all[j], face.id);
                    if (formula == -1) formula = value;
                    if (value != formula && ref_ok) {
                        ref_ok = false;
                        ref_d = pair_tag(i, j) + " depends on the reference face";
                    }
                }
                if ((!dist[i][j] || formula != *dist[i][j]) && dist_ok) {
                    dist_ok = false;
                    dist_d = pair_tag(i, j) + " formula " + std::to_string(formula) +
                             " vs bfs " +
                             (dist[i][j] ? std::to_string(*dist[i][j]) : "unreachable");
                }
                DistanceCertificate cert =
                    distance_certificate(universe.all[i], universe.all[j]);
                Orientation replay = universe.all[i];
                bool valid = cert.distance && *cert.distance == formula &&
                             cert.sequence.size() == formula;
                for (FaceId g : cert.sequence.flips) {
                    if (!valid) break;
                    const Face& face = emb.face(g);
                    if (!oracle_flippable(replay, face)) {
                        valid = false;
                        break;
                    }
                    replay = oracle_flip(replay, face);
                }
                if (valid) valid = replay == universe.all[j];
                if (valid) {
                    int base = cert.potential.min_value();
                    for (const Face& face : emb.faces()) {
                        int t = cert.per_face_counts.count(face.id)
                                    ? cert.per_face_counts.at(face.id)
                                    : 0;
                        if (t != cert.potential.at(face.id) - base) valid = false;
                    }
                }
                if (!valid && replay_ok) {
                    replay_ok = false;
                    replay_d = pair_tag(i, j);
                }
                try {
                    FlipSequence greedy =
                        greedy_sequence(universe.all[i], universe.all[j]);
                    if (greedy.size() != formula && greedy_ok) {
                        greedy_ok = false;
                        greedy_d = pair_tag(i, j) + " greedy length " +
                                   std::to_string(greedy.size());
                    }
                } catch (const std::exception& ex) {
                    if (greedy_ok) {
                        greedy_ok = false;
                        greedy_d = pair_tag(i, j) + " stalled: " + ex.what();
                    }
                }
            }
        }
        check.add("reference-face-independent", ref_ok, ref_d);
        check.add("formula-equals-bfs", dist_ok, dist_d);
        check.add("certificates-replay", replay_ok, replay_d);
        check.add("greedy-agrees", greedy_ok, greedy_d);
    }
    return report;
}

}  // namespace flipdist
