#include <gtest/gtest.h>

#include <random>

#include "onetwo/density.hpp"
#include "onetwo/graph.hpp"
#include "onetwo/graph_io.hpp"
#include "onetwo/oracle.hpp"
#include "onetwo/rational.hpp"

using namespace onetwo;

TEST(Rational, NormalisesAndOrders) {
    Rational a(6, -4);
    EXPECT_EQ(a.num(), -3);
    EXPECT_EQ(a.den(), 2);
    EXPECT_EQ(a.str(), "-3/2");
    EXPECT_EQ(Rational(4, 2).str(), "2");
    EXPECT_LT(Rational(1, 3), Rational(1, 2));
    EXPECT_EQ(Rational(1, 3) + Rational(1, 6), Rational(1, 2));
    EXPECT_EQ(Rational(3, 4) * Rational(2), Rational(3, 2));
}

TEST(Graph, RejectsLoopsAndDuplicates) {
    EXPECT_THROW(Graph(2, {{0, 0}}), ValidationError);
    EXPECT_THROW(Graph(2, {{0, 1}, {1, 0}}), ValidationError);
    EXPECT_THROW(Graph(2, {{0, 2}}), ValidationError);
}

TEST(Graph, AdjacencyIsSymmetricAndSorted) {
    Graph g(4, {{3, 0}, {1, 0}, {2, 1}});
    EXPECT_EQ(g.neighbours(0), (std::vector<Vertex>{1, 3}));
    EXPECT_EQ(g.edge(0), (Edge{0, 1}));
    EXPECT_TRUE(g.adjacent(1, 2));
    EXPECT_TRUE(g.adjacent(2, 1));
    EXPECT_EQ(g.edge_id(3, 0), 1);
    EXPECT_EQ(g.edge_id(2, 3), -1);
    for (Vertex v = 0; v < g.order(); ++v)
        for (std::size_t i = 0; i < g.neighbours(v).size(); ++i)
            EXPECT_EQ(g.other(g.incident(v)[i], v), g.neighbours(v)[i]);
}

TEST(EdgeList, ParsesExamples) {
    Graph g = parse_edge_list("0 1\n1 2");
    EXPECT_EQ(g, Graph(3, {{0, 1}, {1, 2}}));
    EXPECT_EQ(parse_edge_list("").order(), 0);
    EXPECT_THROW(parse_edge_list("0 0"), ValidationError);
    EXPECT_THROW(parse_edge_list("0 1\n1 0"), ValidationError);
    EXPECT_THROW(parse_edge_list("0 1\nfoo"), ParseError);
    EXPECT_EQ(parse_edge_list("# c\nn 5\n0 1\n").order(), 5);
    EXPECT_THROW(parse_edge_list("n 2\n0 3\n"), ValidationError);
}

TEST(EdgeList, ErrorNamesLine) {
    try {
        parse_edge_list("0 1\n\n2 x\n");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
    }
}

TEST(Graph6, DecodesByHand) {
    EXPECT_EQ(parse_graph6("C~"), graphs::complete(4));
    // standard layout: '_' = 95 -> bits 100000, so one edge; '?' is the empty pair
    EXPECT_EQ(parse_graph6("A_"), graphs::complete(2));
    EXPECT_EQ(parse_graph6("A?"), Graph(2));
    EXPECT_EQ(to_graph6(graphs::complete(4)), "C~");
    EXPECT_EQ(to_graph6(Graph(2)), "A?");
    EXPECT_THROW(parse_graph6("A"), ParseError);
    EXPECT_THROW(parse_graph6("A_?"), ParseError);
    EXPECT_THROW(parse_graph6("A\x01"), ParseError);
}

TEST(Graph6, RoundTripsRandomGraphs) {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        RandomModel m;
        m.p = 0.3;
        Graph g = random_graph(m, static_cast<int>(seed % 70), seed);
        EXPECT_EQ(parse_graph6(to_graph6(g)), g);
        EXPECT_EQ(parse_edge_list(to_edge_list(g)), g);
    }
}

TEST(Density, Examples) {
    EXPECT_EQ(max_density(graphs::complete(4)), Rational(3, 2));
    EXPECT_EQ(max_density(graphs::path(4)), Rational(3, 4));
    EXPECT_EQ(max_density(graphs::petersen()), Rational(3, 2));
    EXPECT_EQ(mad(graphs::cycle(5)), Rational(2));
    EXPECT_EQ(mad(graphs::complete(4)), Rational(3));
    EXPECT_EQ(mad(graphs::star(3)), Rational(3, 2));
    EXPECT_THROW(max_density(Graph(0)), PreconditionError);
    EXPECT_EQ(mad(Graph(3)), Rational(0));
}

TEST(Density, DenseCoreInsideSparseGraph) {
    // K4 plus a long pendant path: the K4 decides
    auto g = graphs::disjoint_union(graphs::complete(4), graphs::path(9));
    std::vector<Edge> e = g.edges();
    e.push_back({3, 4});
    Graph h(g.order(), e);
    EXPECT_EQ(mad(h), Rational(3));
    EXPECT_TRUE(mad_at_most(h, Rational(3)));
    EXPECT_FALSE(mad_at_most(h, Rational(29, 10)));
}

TEST(Density, RegularGraphsHaveMadEqualToDegree) {
    for (int d = 2; d <= 4; ++d)
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            RandomModel m;
            m.kind = RandomModel::Kind::Regular;
            m.degree = d;
            Graph g = random_graph(m, 12, seed);
            EXPECT_EQ(mad(g), Rational(d));
        }
}

TEST(Density, MonotoneUnderEdgeDeletionAndAboveAverage) {
    std::mt19937_64 rng(5);
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        RandomModel m;
        m.p = 0.35;
        Graph g = random_graph(m, 11, seed);
        if (g.size() == 0) continue;
        Rational full = mad(g);
        EXPECT_GE(full, Rational(2 * g.size(), g.order()));
        Graph h = remove_edges(g, {static_cast<EdgeId>(rng() % g.size())});
        EXPECT_LE(mad(h), full);
    }
}

TEST(Components, OrderedBySmallestMember) {
    EXPECT_EQ(components(graphs::path(3)), (std::vector<std::vector<Vertex>>{{0, 1, 2}}));
    EXPECT_EQ(components(Graph(4, {{0, 1}, {2, 3}})), (std::vector<std::vector<Vertex>>{{0, 1}, {2, 3}}));
    EXPECT_EQ(components(Graph(1)), (std::vector<std::vector<Vertex>>{{0}}));
    EXPECT_EQ(components(Graph(4, {{1, 3}})), (std::vector<std::vector<Vertex>>{{0}, {1, 3}, {2}}));
}

TEST(Induced, MapsIds) {
    auto s = induced(graphs::complete(3), {0, 2});
    EXPECT_EQ(s.graph, graphs::complete(2));
    EXPECT_EQ(s.to_parent, (std::vector<Vertex>{0, 2}));
    EXPECT_EQ(s.from_parent, (std::vector<Vertex>{0, -1, 1}));
    EXPECT_EQ(induced(graphs::petersen(), {}).graph.order(), 0);
    auto all = induced(graphs::petersen(), {0, 1, 2, 3, 4, 5, 6, 7, 8, 9});
    EXPECT_EQ(all.graph, graphs::petersen());
    EXPECT_THROW(induced(graphs::complete(3), {5}), ValidationError);
}
