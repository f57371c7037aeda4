#include <doctest.h>

#include <map>

#include "test_util.hpp"

using namespace flipdist;

namespace {

std::vector<HalfEdge> directed_cycle(const Orientation& d,
                                     const std::vector<EdgeId>& edges) {
    std::vector<HalfEdge> out;
    for (EdgeId e : edges) out.push_back(d.directed(e));
    return out;
}

std::map<FaceId, int> counts_of(const FlipSequence& seq) {
    std::map<FaceId, int> out;
    for (FaceId g : seq.flips) out[g]++;
    return out;
}

}  // namespace

TEST_CASE("flippable faces on the kite") {
    Fixture fx = load("kite.json");
    CHECK(flippable_faces(fx.orientation("D1")) == std::vector<FaceId>{4});
    CHECK(flippable_faces(fx.orientation("D3")) == std::vector<FaceId>{0});
    CHECK(flippable_faces(fx.orientation("D2")).empty());

    Fixture sphere = load("kite_sphere.json");
    CHECK(flippable_faces(sphere.orientation("D2")) == std::vector<FaceId>{1});

    Fixture c4 = load("cycle4.json");
    CHECK(flippable_faces(c4.orientation("R")).size() == 1);
    CHECK(flippable_faces(c4.orientation("L")).size() == 1);
    CHECK(flippable_faces(c4.orientation("R")) !=
          flippable_faces(c4.orientation("L")));
}

TEST_CASE("apply_flip reverses one face boundary and preserves out-degrees") {
    Fixture fx = load("kite.json");
    Orientation d1 = fx.orientation("D1");
    Orientation flipped = apply_flip(d1, 4);
    CHECK(flipped == fx.orientation("D3"));
    CHECK(flipped.out_degrees() == d1.out_degrees());
    CHECK(is_alpha_orientation(flipped, *fx.alpha));

    // the same face is clockwise now
    CHECK_THROWS_AS(apply_flip(flipped, 4), domain_error);
    // the outer face never flips in plane mode
    CHECK_THROWS_AS(apply_flip(d1, 1), domain_error);
}

TEST_CASE("comparability matches the sign of the potential") {
    Fixture fx = load("kite.json");
    Orientation d1 = fx.orientation("D1"), d3 = fx.orientation("D3");
    CHECK(comparable(d1, d1));
    CHECK(comparable(d1, d3));
    CHECK_FALSE(comparable(d3, d1));
    CHECK((comparable(d1, d3) && comparable(d3, d1)) == false);
}

TEST_CASE("plane distances on the kite chain") {
    Fixture fx = load("kite.json");
    Orientation d1 = fx.orientation("D1"), d2 = fx.orientation("D2"),
                d3 = fx.orientation("D3");
    CHECK(plane_distance(d1, d1) == 0);
    CHECK(plane_distance(d1, d3) == 1);
    CHECK(plane_distance(d1, d2) == 2);
    CHECK_FALSE(plane_distance(d3, d1).has_value());

    CHECK(cycle_count_distance(d1, d3) == 1);
    CHECK(cycle_count_distance(d1, d2) == 2);
    CHECK(cycle_count_distance(d1, d1) == 0);
    CHECK_THROWS_AS(cycle_count_distance(d3, d1), domain_error);
}

TEST_CASE("cycle counting distance on the annulus") {
    Fixture fx = load("annulus.json");
    Orientation ocw = fx.orientation("Ocw"), owc = fx.orientation("Owc");
    // one ccw cycle with five interior faces, one cw with a single one
    CHECK(cycle_count_distance(ocw, owc) == 5 - 1);
    CHECK(plane_distance(ocw, owc) == 4);
}

TEST_CASE("sphere distances") {
    Fixture fx = load("kite_sphere.json");
    Orientation d1 = fx.orientation("D1"), d3 = fx.orientation("D3");
    for (const Face& f : fx.embedding.faces()) {
        CHECK(sphere_distance(d1, d3, f.id) == 1);
        CHECK(sphere_distance(d3, d1, f.id) == 2);
        CHECK(sphere_distance(d1, d1, f.id) == 0);
    }
    Fixture c4 = load("cycle4.json");
    CHECK(sphere_distance(c4.orientation("R"), c4.orientation("L"), 0) == 1);
    CHECK(sphere_distance(c4.orientation("L"), c4.orientation("R"), 0) == 1);
}

TEST_CASE("reverse_ccw_cycle") {
    Fixture fx = load("kite.json");
    Orientation d1 = fx.orientation("D1"), d3 = fx.orientation("D3");

    SUBCASE("a facial cycle takes one flip") {
        FlipSequence seq = reverse_ccw_cycle(d3, directed_cycle(d3, {0, 1, 4}));
        CHECK(seq.flips == std::vector<FaceId>{0});
        CHECK(apply_sequence(d3, seq) == fx.orientation("D2"));
    }
    SUBCASE("the kite square reverses with one flip per enclosed face") {
        FlipSequence seq = reverse_ccw_cycle(d1, directed_cycle(d1, {0, 1, 2, 3}));
        CHECK(seq.size() == 2);
        std::map<FaceId, int> counts = counts_of(seq);
        CHECK(counts[0] == 1);
        CHECK(counts[4] == 1);
        CHECK(apply_sequence(d1, seq) == fx.orientation("D2"));
    }
    SUBCASE("the grid boundary takes one flip per inner square") {
        Fixture grid = load("grid3.json");
        Orientation g = grid.orientation("G");
        FlipSequence seq =
            reverse_ccw_cycle(g, directed_cycle(g, {0, 1, 8, 11, 5, 4, 9, 6}));
        CHECK(seq.size() == 4);
        for (const auto& [face, count] : counts_of(seq)) CHECK(count == 1);
        CHECK(apply_sequence(g, seq) == grid.orientation("Gb"));
    }
    SUBCASE("clockwise and undirected cycles are rejected") {
        Orientation d2 = fx.orientation("D2");
        CHECK_THROWS_AS(reverse_ccw_cycle(d2, directed_cycle(d2, {0, 1, 2, 3})),
                        domain_error);
        std::vector<HalfEdge> not_directed{{0, 1, 2}, {1, 2, 3}, {4, 1, 3}};
        CHECK_THROWS_AS(reverse_ccw_cycle(d1, not_directed), domain_error);
    }
}

TEST_CASE("reverse_nested") {
    Fixture fx = load("annulus.json");
    Orientation ocw = fx.orientation("Ocw");
    std::vector<HalfEdge> outer = directed_cycle(ocw, {0, 1, 2, 3});
    std::vector<HalfEdge> inner = directed_cycle(ocw, {4, 5, 6, 7});

    SUBCASE("annulus: one flip per ring face, nothing else") {
        FlipSequence seq = reverse_nested(ocw, outer, {inner});
        CHECK(seq.size() == 4);
        std::map<FaceId, int> counts = counts_of(seq);
        const Embedding& emb = fx.embedding;
        std::vector<FaceId> ring = emb.interior_faces({0, 1, 2, 3});
        std::vector<FaceId> hole = emb.interior_faces({4, 5, 6, 7});
        for (const Face& f : emb.faces()) {
            bool in_ring =
                std::binary_search(ring.begin(), ring.end(), f.id) &&
                !std::binary_search(hole.begin(), hole.end(), f.id);
            CHECK(counts[f.id] == (in_ring ? 1 : 0));
        }
        CHECK(apply_sequence(ocw, seq) == fx.orientation("Owc"));
    }
    SUBCASE("no inner cycles reduces to reverse_ccw_cycle") {
        Fixture kite = load("kite.json");
        Orientation d1 = kite.orientation("D1");
        FlipSequence nested =
            reverse_nested(d1, directed_cycle(d1, {0, 1, 2, 3}), {});
        FlipSequence plain =
            reverse_ccw_cycle(d1, directed_cycle(d1, {0, 1, 2, 3}));
        CHECK(nested.flips == plain.flips);
    }
    SUBCASE("containment violations are caught") {
        Fixture kite = load("kite.json");
        Orientation d1 = kite.orientation("D1");
        // triangle 3-4-1 is clockwise in D2's edge directions, but it is not
        // inside triangle 1-2-3
        Orientation d3 = kite.orientation("D3");
        std::vector<HalfEdge> ccw = directed_cycle(d3, {0, 1, 4});
        std::vector<HalfEdge> cw = directed_cycle(d3, {2, 3, 4});
        CHECK_THROWS_AS(reverse_nested(d3, ccw, {cw}), domain_error);
    }
}

TEST_CASE("flip_sequence transforms exactly and counts match the potential") {
    Fixture fx = load("kite.json");
    Orientation d1 = fx.orientation("D1"), d2 = fx.orientation("D2"),
                d3 = fx.orientation("D3");

    CHECK(flip_sequence(d1, d1).flips.empty());

    FlipSequence one = flip_sequence(d1, d3);
    CHECK(one.flips == std::vector<FaceId>{4});
    CHECK(apply_sequence(d1, one) == d3);

    FlipSequence two = flip_sequence(d1, d2);
    CHECK(two.size() == 2);
    CHECK(apply_sequence(d1, two) == d2);
    PotentialMap z = plane_potential(difference(d1, d2), fx.embedding);
    for (const auto& [face, count] : counts_of(two)) CHECK(count == z.at(face));

    CHECK_THROWS_WITH_AS(flip_sequence(d3, d1), doctest::Contains("incomparable"),
                         domain_error);
}

TEST_CASE("flip_sequence on the sphere is oracle-exact for sampled pairs") {
    Fixture fx = load("octahedron.json");
    for (const char* a : {"W", "X", "X2"})
        for (const char* b : {"W", "X", "X2"}) {
            CAPTURE(a);
            CAPTURE(b);
            Orientation from = fx.orientation(a), to = fx.orientation(b);
            FlipSequence seq = flip_sequence(from, to);
            CHECK(apply_sequence(from, seq) == to);
            CHECK(seq.size() == sphere_distance(from, to, fx.embedding.faces()[0].id));
        }
}

TEST_CASE("pinched regions: reversal around a shared vertex") {
    Fixture fx = load("pinch.json");
    Orientation p = fx.orientation("P"), q = fx.orientation("Q");
    CHECK(plane_distance(p, q) == 3);
    CHECK(cycle_count_distance(p, q) == 4 - 1);
    FlipSequence seq = flip_sequence(p, q);
    CHECK(seq.size() == 3);
    CHECK(apply_sequence(p, seq) == q);
    // both triangles counterclockwise: distances stack instead of cancelling
    Orientation a = fx.orientation("A"), b = fx.orientation("B");
    CHECK(plane_distance(a, b) == 4 + 1);
    CHECK(apply_sequence(a, flip_sequence(a, b)) == b);
}

TEST_CASE("three nested rings: distances stack by depth") {
    Fixture fx = load("annulus3.json");
    Orientation ccc = fx.orientation("Wccc"), www = fx.orientation("Wwww");
    Orientation cwc = fx.orientation("Wcwc"), wcw = fx.orientation("Wwcw");
    // all three rings counterclockwise: 4*1 + 4*2 + 1*3
    CHECK(plane_distance(ccc, www) == 15);
    // alternating senses: the middle ring cancels one level
    CHECK(plane_distance(cwc, wcw) == 5);
    CHECK(cycle_count_distance(cwc, wcw) == (9 - 5) + 1);
    for (auto [from, to] : {std::pair{ccc, www}, {cwc, wcw}, {www, ccc}}) {
        if (!comparable(from, to)) continue;
        FlipSequence seq = flip_sequence(from, to);
        CHECK(apply_sequence(from, seq) == to);
        CHECK(seq.size() == *plane_distance(from, to));
        CHECK(greedy_sequence(from, to).size() == seq.size());
    }
}

TEST_CASE("greedy agrees with the constructive sequence on the kite") {
    Fixture fx = load("kite.json");
    for (const char* a : {"D1", "D2", "D3"})
        for (const char* b : {"D1", "D2", "D3"}) {
            Orientation from = fx.orientation(a), to = fx.orientation(b);
            if (!comparable(from, to)) continue;
            FlipSequence greedy = greedy_sequence(from, to);
            CHECK(greedy.size() == flip_sequence(from, to).size());
            CHECK(apply_sequence(from, greedy) == to);
        }
}

TEST_CASE("operations insist on strong connectivity") {
    Fixture wheel = load("wheel5.json");
    AlphaSpec all_out{{{1, 1}, {2, 1}, {3, 1}, {4, 1}, {5, 1}, {6, 5}}};
    Orientation stuck = *find_alpha_orientation(wheel.embedding, all_out);
    REQUIRE_FALSE(is_strongly_connected(stuck));
    CHECK_THROWS_WITH_AS(flippable_faces(stuck),
                         doctest::Contains("strongly connected"), domain_error);
    CHECK_THROWS_AS(flip_sequence(stuck, stuck), domain_error);
    CHECK_THROWS_AS(greedy_sequence(stuck, stuck), domain_error);
    CHECK_THROWS_AS(comparable(stuck, stuck), domain_error);
}

TEST_CASE("alpha mismatches are a dedicated error") {
    Fixture fx = load("kite.json");
    Orientation d1 = fx.orientation("D1");
    Orientation other = Orientation::from_directions(
        fx.embedding,
        {{0, {2, 1}}, {1, {2, 3}}, {2, {3, 4}}, {3, {4, 1}}, {4, {1, 3}}});
    CHECK_THROWS_WITH_AS(plane_distance(d1, other),
                         doctest::Contains("out-degree"), domain_error);
}

TEST_CASE("distance certificates carry everything needed to re-check") {
    Fixture fx = load("kite.json");
    Orientation d1 = fx.orientation("D1"), d2 = fx.orientation("D2");

    DistanceCertificate cert = distance_certificate(d1, d2);
    REQUIRE(cert.distance.has_value());
    CHECK(*cert.distance == 2);
    CHECK(cert.sequence.size() == 2);
    CHECK(cert.per_face_counts == std::map<FaceId, int>{{0, 1}, {4, 1}});
    REQUIRE(cert.cycles.cycles.size() == 1);
    CHECK(cert.cycles.cycles[0].turn == Turn::ccw);
    CHECK(apply_sequence(d1, cert.sequence) == d2);

    DistanceCertificate incomparable_cert =
        distance_certificate(fx.orientation("D3"), d1);
    CHECK_FALSE(incomparable_cert.distance.has_value());
    CHECK(incomparable_cert.sequence.flips.empty());
    CHECK(incomparable_cert.potential.min_value() == -1);

    Fixture sphere = load("kite_sphere.json");
    DistanceCertificate across =
        distance_certificate(sphere.orientation("D3"), sphere.orientation("D1"));
    REQUIRE(across.distance.has_value());
    CHECK(*across.distance == 2);
    int base = across.potential.min_value();
    for (const Face& f : sphere.embedding.faces()) {
        int t = across.per_face_counts.count(f.id) ? across.per_face_counts.at(f.id)
                                                   : 0;
        CHECK(t == across.potential.at(f.id) - base);
    }
}
