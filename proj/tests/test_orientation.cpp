#include <doctest.h>

#include <set>

#include "test_util.hpp"

using namespace flipdist;

TEST_CASE("alpha membership counts out-degrees") {
    Fixture fx = load("kite.json");
    Orientation d1 = fx.orientation("D1");
    CHECK(is_alpha_orientation(d1, *fx.alpha));

    AlphaSpec other{{{1, 1}, {2, 1}, {3, 2}, {4, 1}}};
    CHECK_FALSE(is_alpha_orientation(d1, other));

    // reversing one edge moves exactly one unit of out-degree
    Orientation flipped = d1.with_reversed({0});
    CHECK_FALSE(is_alpha_orientation(flipped, *fx.alpha));
    CHECK(flipped.out_degree(1) == d1.out_degree(1) - 1);
    CHECK(flipped.out_degree(2) == d1.out_degree(2) + 1);

    AlphaSpec short_alpha{{{1, 2}, {2, 1}, {3, 1}}};
    CHECK_THROWS_AS(is_alpha_orientation(d1, short_alpha), domain_error);
}

TEST_CASE("find_alpha_orientation is deterministic and lands in the universe") {
    Fixture fx = load("kite.json");
    auto found = find_alpha_orientation(fx.embedding, *fx.alpha);
    REQUIRE(found.has_value());
    CHECK(is_alpha_orientation(*found, *fx.alpha));
    std::set<uint64_t> universe{fx.orientation("D1").bit_code(),
                                fx.orientation("D2").bit_code(),
                                fx.orientation("D3").bit_code()};
    CHECK(universe.count(found->bit_code()) == 1);
    auto again = find_alpha_orientation(fx.embedding, *fx.alpha);
    CHECK(again->bit_code() == found->bit_code());
}

TEST_CASE("find_alpha_orientation separates sum errors from infeasibility") {
    Fixture fx = load("kite.json");
    AlphaSpec bad_sum{{{1, 5}, {2, 1}, {3, 1}, {4, 1}}};
    CHECK_THROWS_WITH_AS(find_alpha_orientation(fx.embedding, bad_sum),
                         doctest::Contains("sum"), domain_error);

    // right sum, but vertex 2 cannot emit three edges
    AlphaSpec infeasible{{{1, 0}, {2, 3}, {3, 1}, {4, 1}}};
    CHECK_FALSE(find_alpha_orientation(fx.embedding, infeasible).has_value());
}

TEST_CASE("find_alpha_orientation handles the octahedron") {
    Fixture fx = load("octahedron.json");
    auto found = find_alpha_orientation(fx.embedding, *fx.alpha);
    REQUIRE(found.has_value());
    CHECK(is_alpha_orientation(*found, *fx.alpha));
}

TEST_CASE("strong connectivity") {
    Fixture kite = load("kite.json");
    CHECK(is_strongly_connected(kite.orientation("D1")));
    CHECK(is_strongly_connected(kite.orientation("D2")));

    Fixture c4 = load("cycle4.json");
    CHECK(is_strongly_connected(c4.orientation("R")));

    Orientation two_sources = Orientation::from_directions(
        c4.embedding, {{0, {1, 2}}, {1, {3, 2}}, {2, {3, 4}}, {3, {1, 4}}});
    CHECK_FALSE(is_strongly_connected(two_sources));
}

TEST_CASE("rigid edges") {
    SUBCASE("none on the kite or the four-cycle") {
        Fixture kite = load("kite.json");
        for (const char* name : {"D1", "D2", "D3"})
            CHECK(rigid_edges(kite.embedding, *kite.alpha,
                              kite.orientation(name)).empty());
        Fixture c4 = load("cycle4.json");
        CHECK(rigid_edges(c4.embedding, *c4.alpha, c4.orientation("R")).empty());
    }
    SUBCASE("all spokes rigid when the hub emits everything") {
        Fixture wheel = load("wheel5.json");
        AlphaSpec alpha{{{1, 1}, {2, 1}, {3, 1}, {4, 1}, {5, 1}, {6, 5}}};
        auto d = find_alpha_orientation(wheel.embedding, alpha);
        REQUIRE(d.has_value());
        CHECK(rigid_edges(wheel.embedding, alpha, *d) ==
              std::vector<EdgeId>{5, 6, 7, 8, 9});
    }
    SUBCASE("requires an alpha-orientation witness") {
        Fixture kite = load("kite.json");
        AlphaSpec wrong{{{1, 1}, {2, 2}, {3, 1}, {4, 1}}};
        CHECK_THROWS_AS(rigid_edges(kite.embedding, wrong, kite.orientation("D1")),
                        domain_error);
    }
}

TEST_CASE("difference of orientations") {
    Fixture fx = load("kite.json");
    Orientation d1 = fx.orientation("D1"), d2 = fx.orientation("D2"),
                d3 = fx.orientation("D3");

    CHECK(difference(d1, d1).empty());

    EulerianDifference square = difference(d1, d2);
    CHECK(square.edges == std::vector<HalfEdge>{{0, 1, 2}, {1, 2, 3}, {2, 3, 4},
                                                {3, 4, 1}});
    EulerianDifference triangle = difference(d1, d3);
    CHECK(triangle.edges == std::vector<HalfEdge>{{2, 3, 4}, {3, 4, 1}, {4, 1, 3}});

    SUBCASE("unbalanced differences are rejected") {
        Orientation skew = d1.with_reversed({0});
        CHECK_THROWS_WITH_AS(difference(d1, skew), doctest::Contains("balanced"),
                             domain_error);
    }
    SUBCASE("balanced for every enumerated pair") {
        OrientationUniverse uni =
            enumerate_alpha_orientations(fx.embedding, *fx.alpha);
        for (const Orientation& a : uni.all)
            for (const Orientation& b : uni.all)
                CHECK_NOTHROW(difference(a, b));
    }
}
