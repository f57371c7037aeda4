#include <doctest.h>

#include <map>
#include <set>

#include "test_util.hpp"

using namespace flipdist;

namespace {

std::multiset<int> edge_multiset(const CycleSystem& sys) {
    std::multiset<int> out;
    for (const DirectedCycle& c : sys.cycles)
        for (const HalfEdge& h : c.walk) out.insert(h.edge);
    return out;
}

}  // namespace

TEST_CASE("empty difference gives an empty system") {
    Fixture fx = load("kite.json");
    Orientation d1 = fx.orientation("D1");
    CHECK(standard_cycle_system(difference(d1, d1), fx.embedding).cycles.empty());
}

TEST_CASE("kite differences decompose into single cycles") {
    Fixture fx = load("kite.json");
    Orientation d1 = fx.orientation("D1");

    CycleSystem square =
        standard_cycle_system(difference(d1, fx.orientation("D2")), fx.embedding);
    REQUIRE(square.cycles.size() == 1);
    CHECK(square.cycles[0].walk.size() == 4);

    CycleSystem triangle =
        standard_cycle_system(difference(d1, fx.orientation("D3")), fx.embedding);
    REQUIRE(triangle.cycles.size() == 1);
    CHECK(triangle.cycles[0].walk.size() == 3);

    triangle = classify_and_nest(std::move(triangle), fx.embedding,
                                 SurfaceMode::plane, std::nullopt);
    CHECK(triangle.cycles[0].turn == Turn::ccw);
    CHECK(triangle.cycles[0].interior == std::vector<FaceId>{4});
    CHECK(triangle.cycles[0].parent == -1);
}

TEST_CASE("vertex-disjoint octahedron triangles come out as two cycles") {
    Fixture fx = load("octahedron.json");
    OrientationUniverse uni = enumerate_alpha_orientations(fx.embedding, *fx.alpha);
    bool found = false;
    for (int i = 0; i < uni.size() && !found; ++i)
        for (int j = 0; j < uni.size() && !found; ++j) {
            EulerianDifference diff = difference(uni.all[i], uni.all[j]);
            if (diff.edges.size() != 6) continue;
            std::set<VertexId> heads, tails;
            for (const HalfEdge& h : diff.edges) {
                heads.insert(h.head);
                tails.insert(h.tail);
            }
            if (heads.size() != 6) continue;  // need six distinct vertices
            CycleSystem sys = standard_cycle_system(diff, fx.embedding);
            REQUIRE(sys.cycles.size() == 2);
            CHECK(sys.cycles[0].walk.size() == 3);
            CHECK(sys.cycles[1].walk.size() == 3);
            found = true;
        }
    CHECK(found);
}

TEST_CASE("nested squares of the annulus form a chain in the forest") {
    Fixture fx = load("annulus.json");
    EulerianDifference diff =
        difference(fx.orientation("Occ"), fx.orientation("Oww"));
    CHECK(diff.edges.size() == 8);
    CycleSystem sys = classify_and_nest(standard_cycle_system(diff, fx.embedding),
                                        fx.embedding, SurfaceMode::plane,
                                        std::nullopt);
    REQUIRE(sys.cycles.size() == 2);
    int outer = sys.cycles[0].interior.size() > sys.cycles[1].interior.size() ? 0 : 1;
    int inner = 1 - outer;
    CHECK(sys.cycles[outer].turn == Turn::ccw);
    CHECK(sys.cycles[inner].turn == Turn::ccw);
    CHECK(sys.cycles[outer].parent == -1);
    CHECK(sys.cycles[inner].parent == outer);
    CHECK(sys.cycles[outer].interior.size() == 5);
    CHECK(sys.cycles[inner].interior.size() == 1);
}

TEST_CASE("reassembling the system reproduces the difference exactly") {
    Fixture fx = load("annulus.json");
    for (const char* a : {"Occ", "Oww", "Ocw", "Owc"})
        for (const char* b : {"Occ", "Oww", "Ocw", "Owc"}) {
            EulerianDifference diff =
                difference(fx.orientation(a), fx.orientation(b));
            CycleSystem sys = standard_cycle_system(diff, fx.embedding);
            std::multiset<int> expected;
            for (const HalfEdge& h : diff.edges) expected.insert(h.edge);
            CHECK(edge_multiset(sys) == expected);
            for (const DirectedCycle& c : sys.cycles)
                for (const HalfEdge& h : c.walk)
                    CHECK(std::count(diff.edges.begin(), diff.edges.end(), h) == 1);
        }
}

TEST_CASE("per-face cycle balance is independent of the peeling order") {
    for (const char* name : {"kite.json", "annulus.json", "octahedron.json"}) {
        CAPTURE(name);
        Fixture fx = load(name);
        OrientationUniverse uni =
            enumerate_alpha_orientations(fx.embedding, *fx.alpha);
        const Embedding& emb = fx.embedding;
        FaceId reference = emb.mode() == SurfaceMode::plane ? emb.outer_face()
                                                            : emb.faces()[0].id;
        const Orientation& a = uni.all.front();
        const Orientation& b = uni.all.back();
        EulerianDifference diff = difference(a, b);
        std::map<FaceId, int> baseline;
        for (uint64_t seed : {0u, 1u, 2u, 3u, 4u, 5u}) {
            CycleSystem sys =
                classify_and_nest(standard_cycle_system(diff, emb, seed), emb,
                                  emb.mode(), reference);
            for (const Face& f : emb.faces()) {
                int balance = potential_from_cycles(sys, emb, f.id);
                if (seed == 0) baseline[f.id] = balance;
                else CHECK(baseline.at(f.id) == balance);
            }
        }
    }
}

TEST_CASE("nested cycles sharing a vertex split out of one pinched walk") {
    // The difference of P and Q is two triangles meeting at vertex 1, one
    // inside the other with opposite senses. The only fully directed facial
    // walk of that sub-embedding passes through vertex 1 twice; the peel has
    // to cut it into two simple cycles.
    Fixture fx = load("pinch.json");
    EulerianDifference diff = difference(fx.orientation("P"), fx.orientation("Q"));
    REQUIRE(diff.edges.size() == 6);
    CycleSystem sys = classify_and_nest(standard_cycle_system(diff, fx.embedding),
                                        fx.embedding, SurfaceMode::plane,
                                        std::nullopt);
    REQUIRE(sys.cycles.size() == 2);
    int outer = sys.cycles[0].interior.size() > sys.cycles[1].interior.size() ? 0 : 1;
    int inner = 1 - outer;
    CHECK(sys.cycles[outer].turn == Turn::ccw);
    CHECK(sys.cycles[outer].interior.size() == 4);
    CHECK(sys.cycles[inner].turn == Turn::cw);
    CHECK(sys.cycles[inner].interior.size() == 1);
    CHECK(sys.cycles[inner].parent == outer);
    // both triangles meet at vertex 1
    std::set<VertexId> shared;
    for (const HalfEdge& h : sys.cycles[outer].walk)
        for (const HalfEdge& g : sys.cycles[inner].walk)
            if (h.tail == g.tail) shared.insert(h.tail);
    CHECK(shared == std::set<VertexId>{1});
}

TEST_CASE("a lone directed edge cannot be decomposed") {
    Fixture fx = load("kite.json");
    EulerianDifference bogus;
    bogus.embedding = &fx.embedding;
    bogus.edges = {HalfEdge{0, 1, 2}};
    CHECK_THROWS_AS(standard_cycle_system(bogus, fx.embedding), invariant_error);
}
