#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <stdexcept>

#include "ec/graph.hpp"

using namespace ec;

TEST_CASE("edges, degrees, stable ids") {
    Graph g(5, 4);
    EdgeId a = g.add_edge(0, 1);
    EdgeId b = g.add_edge(1, 2);
    EdgeId c = g.add_edge(2, 3);
    CHECK(a == 0);
    CHECK(b == 1);
    CHECK(c == 2);
    CHECK(g.edge_count() == 3);
    CHECK(g.degree(1) == 2);
    CHECK(g.max_degree() == 2);
    CHECK(g.find_edge(2, 1) == b);
    CHECK(g.find_edge(0, 3) == kNoEdge);
    CHECK_THROWS_AS(g.add_edge(1, 1), std::invalid_argument);
    CHECK_THROWS_AS(g.add_edge(0, 1), std::invalid_argument);

    g.remove_edge(b);
    CHECK(g.edge_count() == 2);
    CHECK(g.degree(1) == 1);
    CHECK(g.max_degree() == 1);
    CHECK_FALSE(g.alive(b));
    // ids are never reused
    EdgeId d = g.add_edge(1, 2);
    CHECK(d == 3);
    CHECK(g.other_end(d, 2) == 1);
}

TEST_CASE("colouring enforces properness and names the clash") {
    Graph g(4, 3);
    EdgeId a = g.add_edge(0, 1);
    EdgeId b = g.add_edge(1, 2);
    EdgeId c = g.add_edge(2, 3);
    CHECK(g.set_colour(a, 1).ok);
    auto r = g.set_colour(b, 1);
    CHECK_FALSE(r.ok);
    CHECK(r.conflict == a);
    CHECK(g.colour_of(b) == kBlank);
    CHECK(g.set_colour(b, 2).ok);
    auto r2 = g.set_colour(c, 2);
    CHECK_FALSE(r2.ok);
    CHECK(r2.conflict == b);
    CHECK(g.set_colour(c, 1).ok);
    CHECK(g.coloured_count() == 3);

    CHECK_THROWS_AS(g.set_colour(a, 2), std::logic_error);       // already coloured
    CHECK_THROWS_AS(g.set_colour(b, 0), std::invalid_argument);  // blank is not a colour
    CHECK_THROWS_AS(g.set_colour(b, 4), std::invalid_argument);  // outside palette
    CHECK_THROWS_AS(g.remove_edge(a), std::logic_error);         // coloured edges stay

    g.clear_colour(a);
    CHECK(g.colour_of(a) == kBlank);
    CHECK_THROWS_AS(g.clear_colour(a), std::logic_error);
    g.remove_edge(a);
    CHECK_FALSE(g.alive(a));
}

TEST_CASE("free-colour queries") {
    Graph g(4, 5);
    EdgeId a = g.add_edge(0, 1);
    EdgeId b = g.add_edge(0, 2);
    EdgeId c = g.add_edge(0, 3);
    g.set_colour(a, 1);
    g.set_colour(b, 3);
    CHECK(g.free_colours(0) == std::vector<Colour>{2, 4, 5});
    CHECK(g.min_free(0) == 2);
    CHECK(g.colour_free(0, 2));
    CHECK_FALSE(g.colour_free(0, 3));
    CHECK(g.edge_with_colour(0, 3) == b);
    CHECK(g.edge_with_colour(0, 2) == kNoEdge);

    g.set_colour(c, 2);
    CHECK(g.min_free(0) == 4);
    // vertex 1 has colour 1 used; common free with 0 skips {1,2,3}
    CHECK(g.min_common_free(0, 1) == 4);

    Graph full(2, 1);
    EdgeId e = full.add_edge(0, 1);
    full.set_colour(e, 1);
    CHECK(full.min_free(0) == 0);
    CHECK(full.min_common_free(0, 1) == 0);
    CHECK(full.free_colours(0).empty());
}

TEST_CASE("two blank edges may share an endpoint") {
    Graph g(3, 2);
    g.add_edge(0, 1);
    g.add_edge(1, 2);
    CHECK(g.edge_count() == 2);
    CHECK(g.coloured_count() == 0);
}
