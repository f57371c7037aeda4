// Acceptance suite: drives every formula, sequence builder and structural
// property against brute force on the bundled fixtures and prints one
// pass/fail line per criterion. Exits nonzero if anything fails.

#include <chrono>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "flipdist/fixture.hpp"

using namespace flipdist;
using Clock = std::chrono::steady_clock;

namespace {

struct Criterion {
    std::string name;
    bool pass = true;
    std::vector<std::string> failures;
    std::string stats;
    double seconds = -1, limit = -1;

    void fail(const std::string& detail) {
        pass = false;
        if (failures.size() < 8) failures.push_back(detail);
    }
};

std::string fixture_file(const std::string& name) {
    return std::string(FLIPDIST_FIXTURE_DIR) + "/" + name + ".json";
}

// All feasible out-degree vectors of a fixture, with their complete
// orientation classes, found by scanning the entire direction space.
struct AlphaClass {
    AlphaSpec alpha;
    std::vector<Orientation> all;
    bool all_strongly_connected = true;
};

std::vector<AlphaClass> scan_alpha_classes(const Embedding& emb) {
    int ne = emb.edge_count();
    std::map<std::vector<int>, AlphaClass> classes;
    for (uint64_t code = 0; code < (uint64_t{1} << ne); ++code) {
        std::vector<uint8_t> bits(ne);
        for (int i = 0; i < ne; ++i) bits[i] = (code >> i) & 1;
        Orientation d(emb, bits);
        std::vector<int> degs = d.out_degrees();
        AlphaClass& cls = classes[degs];
        if (cls.all.empty())
            for (int i = 0; i < emb.vertex_count(); ++i)
                cls.alpha.out_degree[emb.vertex_id(i)] = degs[i];
        cls.all_strongly_connected =
            cls.all_strongly_connected && is_strongly_connected(d);
        cls.all.push_back(std::move(d));
    }
    std::vector<AlphaClass> out;
    for (auto& [k, v] : classes) out.push_back(std::move(v));
    return out;
}

// Simple directed cycles of an orientation: anchored depth-first search,
// each cycle reported once from its smallest vertex.
std::vector<std::vector<EdgeId>> directed_simple_cycles(const Orientation& d,
                                                        size_t cap) {
    const Embedding& emb = d.embedding();
    int n = emb.vertex_count();
    std::vector<std::vector<std::pair<EdgeId, int>>> out(n);
    for (const auto& e : emb.edges())
        out[emb.vertex_index(d.tail(e.id))].push_back(
            {e.id, emb.vertex_index(d.head(e.id))});
    for (auto& list : out) std::sort(list.begin(), list.end());

    std::vector<std::vector<EdgeId>> cycles;
    for (int s = 0; s < n; ++s) {
        std::vector<EdgeId> path;
        std::vector<char> on_path(n, 0);
        std::function<void(int)> dfs = [&](int v) {
            if (cycles.size() >= cap) return;
            for (auto [e, w] : out[v]) {
                if (w == s) {
                    path.push_back(e);
                    cycles.push_back(path);
                    path.pop_back();
                } else if (w > s && !on_path[w]) {
                    on_path[w] = 1;
                    path.push_back(e);
                    dfs(w);
                    path.pop_back();
                    on_path[w] = 0;
                }
            }
        };
        on_path[s] = 1;
        dfs(s);
        on_path[s] = 0;
    }
    return cycles;
}

bool cycle_is_ccw(const Embedding& emb, const Orientation& d,
                  const std::vector<EdgeId>& cycle) {
    std::vector<FaceId> interior = emb.interior_faces(cycle);
    int inside = 0;
    for (EdgeId e : cycle)
        if (std::binary_search(interior.begin(), interior.end(),
                               emb.left_face(d.directed(e))))
            ++inside;
    return inside == static_cast<int>(cycle.size());
}

std::string tag(const std::string& fixture, const AlphaSpec& alpha) {
    std::ostringstream out;
    out << fixture << " alpha(";
    bool first = true;
    for (const auto& [v, a] : alpha.out_degree) {
        if (!first) out << ",";
        out << a;
        first = false;
    }
    out << ")";
    return out.str();
}

}  // namespace

int main() {
    std::map<int, Criterion> criteria;
    criteria[1].name = "formula-oracle equivalence (plane)";
    criteria[2].name = "formula-oracle equivalence (sphere)";
    criteria[3].name = "sequence soundness";
    criteria[4].name = "potential equals cycle counting under peel seeds";
    criteria[5].name = "cycle-count distance equals potential distance";
    criteria[6].name = "single-cycle reversal flip counts";
    criteria[7].name = "nested reversal flip counts on the annulus";
    criteria[8].name = "structural checks";
    criteria[9].name = "greedy agreement";
    criteria[1].limit = 60.0;
    criteria[2].limit = 120.0;

    auto route = [&](const VerifyReport& report, const std::string& instance,
                     bool plane) {
        std::map<std::string, int> to_criterion{
            {"comparable-iff-reachable", 1},
            {"formula-equals-bfs", plane ? 1 : 2},
            {"reference-face-independent", 2},
            {"cycle-count-distance", 5},
            {"certificates-replay", 3},
            {"greedy-agrees", 9},
        };
        for (const auto& check : report.checks) {
            auto it = to_criterion.find(check.name);
            int id = it != to_criterion.end() ? it->second : 8;
            if (!check.pass)
                criteria[id].fail(instance + ": " + check.name + " " + check.detail);
        }
    };

    // ---- plane fixtures: every feasible alpha whose orientations are all
    // strongly connected, every ordered pair (criteria 1, 3, 4, 5, 8, 9)
    int plane_alphas = 0;
    long plane_pairs = 0;
    auto plane_start = Clock::now();
    for (const std::string name : {"kite", "grid3", "wheel5", "annulus"}) {
        Fixture fx = load_fixture(fixture_file(name));
        const Embedding& emb = fx.embedding;
        if (emb.vertex_count() - emb.edge_count() + emb.face_count() != 2)
            criteria[8].fail(name + ": euler formula");

        std::vector<AlphaClass> classes = scan_alpha_classes(emb);
        int qualifying = 0;
        for (const AlphaClass& cls : classes) {
            // rigid edges take one direction across the whole class, and the
            // witness computation agrees no matter the witness (criterion 8)
            std::vector<EdgeId> expected;
            for (const auto& e : emb.edges()) {
                bool fwd = false, rev = false;
                for (const Orientation& d : cls.all)
                    (d.tail(e.id) == e.u ? fwd : rev) = true;
                if (!(fwd && rev)) expected.push_back(e.id);
            }
            for (const Orientation& d : cls.all)
                if (rigid_edges(emb, cls.alpha, d) != expected) {
                    criteria[8].fail(tag(name, cls.alpha) +
                                     ": rigid set differs between witnesses");
                    break;
                }

            if (!cls.all_strongly_connected) continue;
            ++qualifying;
            ++plane_alphas;
            plane_pairs += static_cast<long>(cls.all.size()) * cls.all.size();
            std::string instance = tag(name, cls.alpha);

            VerifyReport report = verify_instance(emb, cls.alpha);
            route(report, instance, true);

            // criterion 4: the crossing potential equals the cycle-counting
            // route on every face, under six different peeling tie-breaks
            OrientationUniverse uni = enumerate_alpha_orientations(emb, cls.alpha);
            for (int i = 0; i < uni.size(); ++i)
                for (int j = 0; j < uni.size(); ++j) {
                    if (i == j) continue;
                    EulerianDifference diff = difference(uni.all[i], uni.all[j]);
                    PotentialMap z = plane_potential(diff, emb);
                    for (uint64_t seed : {0u, 1u, 2u, 3u, 4u, 5u}) {
                        CycleSystem sys = classify_and_nest(
                            standard_cycle_system(diff, emb, seed), emb,
                            emb.mode(), emb.outer_face());
                        for (const Face& f : emb.faces())
                            if (potential_from_cycles(sys, emb, f.id) != z.at(f.id)) {
                                criteria[4].fail(instance + ": pair (" +
                                                 std::to_string(i) + "," +
                                                 std::to_string(j) + ") seed " +
                                                 std::to_string(seed) + " face " +
                                                 std::to_string(f.id));
                                break;
                            }
                    }
                }
        }
        if (qualifying == 0)
            criteria[1].fail(name + ": no alpha with all orientations strongly "
                                    "connected");
    }
    criteria[1].seconds =
        std::chrono::duration<double>(Clock::now() - plane_start).count();
    {
        std::ostringstream stats;
        stats << "4 fixtures, " << plane_alphas << " alphas, " << plane_pairs
              << " ordered pairs";
        criteria[1].stats = stats.str();
        criteria[4].stats = "6 peel seeds per pair";
        criteria[5].stats = "every comparable pair above";
    }

    // ---- sphere fixtures: every ordered pair, every reference face
    // (criteria 2, 3, 8, 9)
    long sphere_pairs = 0;
    auto sphere_start = Clock::now();
    for (const std::string name : {"cycle4", "kite_sphere", "octahedron"}) {
        Fixture fx = load_fixture(fixture_file(name));
        const Embedding& emb = fx.embedding;
        if (emb.vertex_count() - emb.edge_count() + emb.face_count() != 2)
            criteria[8].fail(name + ": euler formula");
        std::string instance = tag(name, *fx.alpha);
        OrientationUniverse uni = enumerate_alpha_orientations(emb, *fx.alpha);
        sphere_pairs += static_cast<long>(uni.size()) * uni.size();
        VerifyReport report = verify_instance(emb, *fx.alpha);
        route(report, instance, false);
    }
    criteria[2].seconds =
        std::chrono::duration<double>(Clock::now() - sphere_start).count();
    {
        std::ostringstream stats;
        stats << "3 fixtures, " << sphere_pairs
              << " ordered pairs, every reference face";
        criteria[2].stats = stats.str();
        criteria[3].stats = "certificates replayed for every pair above";
        criteria[9].stats = "greedy run for every pair above";
    }

    // ---- criterion 6: reversing a single ccw cycle flips exactly its
    // interior faces and nets out to exactly that cycle
    {
        int verified = 0;
        const std::pair<const char*, const char*> picks[] = {
            {"kite", "D1"},     {"kite", "D2"},     {"kite", "D3"},
            {"grid3", "G"},     {"wheel5", "W0"},   {"annulus", "Occ"},
            {"annulus", "Ocw"}, {"annulus", "Owc"}, {"annulus", "Oww"},
        };
        for (const auto& [fixture, orientation] : picks) {
            Fixture fx = load_fixture(fixture_file(fixture));
            const Embedding& emb = fx.embedding;
            Orientation d = fx.orientation(orientation);
            for (const auto& cycle : directed_simple_cycles(d, 200)) {
                if (!cycle_is_ccw(emb, d, cycle)) continue;
                std::vector<HalfEdge> walk;
                for (EdgeId e : cycle) walk.push_back(d.directed(e));
                std::string where = std::string(fixture) + "/" + orientation;
                try {
                    FlipSequence seq = reverse_ccw_cycle(d, walk);
                    size_t interior = emb.interior_faces(cycle).size();
                    if (seq.flips.size() != interior)
                        criteria[6].fail(where + ": flip count " +
                                         std::to_string(seq.flips.size()) +
                                         " for " + std::to_string(interior) +
                                         " interior faces");
                    if (apply_sequence(d, seq) != d.with_reversed(cycle))
                        criteria[6].fail(where + ": edges outside the cycle moved");
                    ++verified;
                } catch (const std::exception& ex) {
                    criteria[6].fail(where + ": " + ex.what());
                }
            }
        }
        criteria[6].stats = std::to_string(verified) + " ccw cycles";
        if (verified < 10)
            criteria[6].fail("fewer than 10 counterclockwise cycles exercised");
    }

    // ---- criterion 7: the annulus nested reversal hits exactly the ring
    {
        Fixture fx = load_fixture(fixture_file("annulus"));
        const Embedding& emb = fx.embedding;
        Orientation ocw = fx.orientation("Ocw");
        std::vector<HalfEdge> outer, inner;
        for (EdgeId e : {0, 1, 2, 3}) outer.push_back(ocw.directed(e));
        for (EdgeId e : {4, 5, 6, 7}) inner.push_back(ocw.directed(e));
        try {
            FlipSequence seq = reverse_nested(ocw, outer, {inner});
            std::vector<FaceId> big = emb.interior_faces({0, 1, 2, 3});
            std::vector<FaceId> hole = emb.interior_faces({4, 5, 6, 7});
            size_t ring = big.size() - hole.size();
            if (seq.flips.size() != ring)
                criteria[7].fail("flip count " + std::to_string(seq.flips.size()) +
                                 ", ring has " + std::to_string(ring) + " faces");
            std::map<FaceId, int> counts;
            for (FaceId g : seq.flips) counts[g]++;
            for (const Face& f : emb.faces()) {
                bool in_ring = std::binary_search(big.begin(), big.end(), f.id) &&
                               !std::binary_search(hole.begin(), hole.end(), f.id);
                if (counts[f.id] != (in_ring ? 1 : 0))
                    criteria[7].fail("face " + std::to_string(f.id) + " flipped " +
                                     std::to_string(counts[f.id]) + " times");
            }
            std::vector<EdgeId> both{0, 1, 2, 3, 4, 5, 6, 7};
            if (apply_sequence(ocw, seq) != ocw.with_reversed(both))
                criteria[7].fail("edges outside the two squares moved");
            criteria[7].stats = std::to_string(seq.flips.size()) + " flips over " +
                                std::to_string(ring) + " ring faces";
        } catch (const std::exception& ex) {
            criteria[7].fail(ex.what());
        }
    }

    criteria[8].stats = "euler, universes, differences, rigidity, order structure";

    bool all_pass = true;
    for (auto& [id, c] : criteria) {
        if (c.limit > 0 && c.seconds > c.limit) {
            c.fail("runtime " + std::to_string(c.seconds) + " s exceeds " +
                   std::to_string(c.limit) + " s");
        }
        std::cout << "[criterion " << id << "] " << (c.pass ? "PASS" : "FAIL")
                  << "  " << c.name;
        if (!c.stats.empty()) std::cout << ": " << c.stats;
        if (c.seconds >= 0) {
            std::cout << " (" << c.seconds << " s";
            if (c.limit > 0) std::cout << " < " << c.limit << " s";
            std::cout << ")";
        }
        std::cout << "\n";
        for (const std::string& f : c.failures) std::cout << "    " << f << "\n";
        all_pass = all_pass && c.pass;
    }
    std::cout << (all_pass ? "ACCEPTANCE PASSED" : "ACCEPTANCE FAILED") << "\n";
    return all_pass ? 0 : 1;
}
