#include <gtest/gtest.h>

#include <set>

#include "onetwo/graph_io.hpp"
#include "onetwo/hall.hpp"
#include "onetwo/oracle.hpp"

using namespace onetwo;

namespace {

bool vertex_disjoint(const Matching& m) {
    std::set<Vertex> seen;
    for (auto [l, r] : m.pairs)
        if (!seen.insert(l).second || !seen.insert(r).second) return false;
    return true;
}

}  // namespace

TEST(MaxMatching, Examples) {
    Bipartition c4{{0, 2}, {1, 3}, {{0, 1}, {0, 3}, {2, 1}, {2, 3}}};
    EXPECT_EQ(max_matching(c4).size(), 2u);
    Bipartition star{{0}, {1, 2, 3}, {{0, 1}, {0, 2}, {0, 3}}};
    EXPECT_EQ(max_matching(star).size(), 1u);
    Bipartition k23{{0, 1}, {2, 3, 4}, {}};
    for (Vertex l : {0, 1})
        for (Vertex r : {2, 3, 4}) k23.edges.emplace_back(l, r);
    auto m = max_matching(k23);
    EXPECT_EQ(m.size(), 2u);
    EXPECT_TRUE(vertex_disjoint(m));
}

TEST(MaxMatching, RejectsMalformedBipartitions) {
    EXPECT_THROW(max_matching(Bipartition{{0}, {0}, {}}), ValidationError);
    EXPECT_THROW(max_matching(Bipartition{{0}, {1}, {{1, 0}}}), ValidationError);
}

TEST(SaturatingMatching, Examples) {
    Bipartition c6{{0, 2, 4}, {1, 3, 5}, {{0, 1}, {2, 1}, {2, 3}, {4, 3}, {4, 5}, {0, 5}}};
    auto r = saturating_matching(c6);
    ASSERT_TRUE(std::holds_alternative<Matching>(r));
    EXPECT_EQ(std::get<Matching>(r).size(), 3u);

    Bipartition pinch{{0, 1}, {2}, {{0, 2}, {1, 2}}};
    auto v = saturating_matching(pinch);
    ASSERT_TRUE(std::holds_alternative<HallViolation>(v));
    EXPECT_EQ(std::get<HallViolation>(v).left_set, (std::vector<Vertex>{0, 1}));
    EXPECT_EQ(std::get<HallViolation>(v).neighbours, (std::vector<Vertex>{2}));

    auto e = saturating_matching(Bipartition{{}, {1, 2}, {}});
    ASSERT_TRUE(std::holds_alternative<Matching>(e));
    EXPECT_EQ(std::get<Matching>(e).size(), 0u);
}

TEST(SaturatingMatching, WitnessIsMinimalCounterexampleShape) {
    // left 0,1,2 all see only 5,6; left 3 sees 7
    Bipartition b{{0, 1, 2, 3}, {5, 6, 7}, {{0, 5}, {1, 5}, {1, 6}, {2, 6}, {3, 7}}};
    auto r = saturating_matching(b);
    ASSERT_TRUE(std::holds_alternative<HallViolation>(r));
    const auto& hv = std::get<HallViolation>(r);
    EXPECT_GT(hv.left_set.size(), hv.neighbours.size());
    EXPECT_EQ(hv.neighbours, (std::vector<Vertex>{5, 6}));
}

TEST(BuildXY, Examples) {
    auto k2 = build_XY(graphs::complete(2));
    EXPECT_EQ(k2.X(), (std::vector<Vertex>{0}));
    EXPECT_EQ(k2.Y(), (std::vector<Vertex>{1}));
    EXPECT_TRUE(k2.R().empty());

    auto c4 = build_XY(graphs::cycle(4));
    EXPECT_EQ(c4.X(), (std::vector<Vertex>{0, 2}));
    EXPECT_EQ(c4.Y(), (std::vector<Vertex>{1, 3}));
    EXPECT_TRUE(c4.R().empty());

    auto c5 = build_XY(graphs::cycle(5));
    EXPECT_EQ(c5.X().size(), 2u);
    EXPECT_EQ(c5.Y().size(), 2u);
    ASSERT_EQ(c5.R().size(), 1u);
    EXPECT_EQ(check_pair(c5), "");
}

TEST(BuildXY, InvariantsOnAllSmallGraphs) {
    for (int n = 1; n <= 7; ++n)
        for (const auto& g : enumerate_graphs(n, false)) EXPECT_EQ(check_pair(build_XY(g)), "") << to_edge_list(g);
}

TEST(CertifyHall, Examples) {
    auto c5 = build_XY(graphs::cycle(5));
    auto none = certify_hall(c5, {});
    EXPECT_FALSE(none.restart);
    EXPECT_EQ(none.matching.size(), 0u);

    auto one = certify_hall(c5, c5.R());
    EXPECT_FALSE(one.restart);
    EXPECT_EQ(one.matching.size(), 1u);
}

TEST(CertifyHall, ExchangeEnlargesY) {
    // y=0 is the only Y-neighbour of a=1 and b=2; X = {3} sees everything
    Graph g(4, {{0, 1}, {0, 2}, {0, 3}, {1, 3}, {2, 3}});
    IndependentSetPair p;
    p.host = g;
    p.in_x = {0, 0, 0, 1};
    p.in_y = {1, 0, 0, 0};
    auto r = certify_hall(p, {1, 2});
    EXPECT_TRUE(r.restart);
    EXPECT_EQ(p.Y(), (std::vector<Vertex>{1, 2}));
    EXPECT_EQ(p.exchanges, 1);
    EXPECT_EQ(check_pair(p), "");
}

TEST(CertifyHall, RejectsSetsOutsideR) {
    auto c5 = build_XY(graphs::cycle(5));
    EXPECT_THROW(certify_hall(c5, {c5.X().front()}), PreconditionError);
}
