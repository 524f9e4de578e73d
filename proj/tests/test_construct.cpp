#include <gtest/gtest.h>

#include <set>

#include "onetwo/construct.hpp"
#include "onetwo/graph_io.hpp"
#include "onetwo/label_auto.hpp"
#include "onetwo/oracle.hpp"

using namespace onetwo;

namespace {

// Each vertex r of H gets a private X vertex and a private Y vertex, so that R
// is exactly H. Ids: X = 0..h-1, Y = h..2h-1, R = 2h..3h-1.
Graph embed(const Graph& H) {
    const int h = H.order();
    std::vector<Edge> out;
    for (int r = 0; r < h; ++r) {
        out.push_back({r, 2 * h + r});
        out.push_back({h + r, 2 * h + r});
        out.push_back({r, h + r});
    }
    for (const auto& e : H.edges()) out.push_back({2 * h + e.u, 2 * h + e.v});
    return Graph(3 * h, out);
}

Graph disjoint_union(const Graph& a, const Graph& b) {
    std::vector<Edge> es(a.edges().begin(), a.edges().end());
    for (const auto& e : b.edges()) es.push_back({a.order() + e.u, a.order() + e.v});
    return Graph(a.order() + b.order(), es);
}

// Exponent ranges of X, Y and R under the product.
void expect_classes(const AlgState& st, const TotalLabelling& l, int r_lo, int r_hi) {
    auto pe = product_exponents(st.host, l);
    for (Vertex v : st.pair.X()) EXPECT_EQ(pe[v], 0) << "X vertex " << v;
    for (Vertex v : st.pair.Y()) EXPECT_EQ(pe[v], 1) << "Y vertex " << v;
    for (Vertex v : st.pair.R()) {
        EXPECT_GE(pe[v], r_lo) << "R vertex " << v;
        EXPECT_LE(pe[v], r_hi) << "R vertex " << v;
    }
}

struct Outcome {
    TotalLabelling l;
    AlgState st;
};

Outcome run(const Graph& g, int alg, ConstructOptions o = {}) {
    Outcome r;
    o.debug = true;
    if (alg == 4) r.l = label_deg4_state(g, r.st, o);
    else if (alg == 5) r.l = label_deg5_state(g, r.st, o);
    else r.l = label_deg6_state(g, r.st, o);
    return r;
}

// Small builder for R-side gadgets: add(side) returns the new vertex.
struct Gadget {
    std::vector<Edge> es;
    std::vector<int> side;
    int add(int s) {
        side.push_back(s);
        return static_cast<int>(side.size()) - 1;
    }
    void e(int a, int b) { es.push_back({std::min(a, b), std::max(a, b)}); }
    Graph graph() const { return Graph(static_cast<int>(side.size()), es); }
};

// Runs deg6 with R = the gadget and the gadget's own partition as the cut.
Outcome run_gadget(const Gadget& b) {
    Graph H = b.graph();
    EXPECT_TRUE(verify_cut_contract(Cut(H, b.side), CutLevel::Deg4).ok);
    ConstructOptions o;
    o.dispatch = false;
    o.cut_start = b.side;
    Outcome r = run(embed(H), 6, o);
    EXPECT_TRUE(is_proper(r.st.host, r.l, Metric::Product));
    return r;
}

}  // namespace

TEST(Deg4, Examples) {
    Outcome k2 = run(graphs::complete(2), 4);
    auto pe = product_exponents(k2.st.host, k2.l);
    EXPECT_EQ(std::multiset<int>(pe.begin(), pe.end()), (std::multiset<int>{0, 1}));

    Outcome c5 = run(graphs::cycle(5), 4);
    EXPECT_TRUE(is_proper(c5.st.host, c5.l, Metric::Product));
    expect_classes(c5.st, c5.l, 2, 4);

    Graph k5 = graphs::complete(5);
    Outcome r = run(k5, 4);
    EXPECT_TRUE(is_proper(k5, r.l, Metric::Product));
    EXPECT_TRUE(is_proper(k5, r.l, Metric::Sum));
    expect_classes(r.st, r.l, 2, 4);

    EXPECT_THROW(label_deg4(graphs::complete(6)), PreconditionError);
}

TEST(Deg5, Examples) {
    Graph k6 = graphs::complete(6);
    Outcome r = run(k6, 5);
    EXPECT_TRUE(is_proper(k6, r.l, Metric::Product));
    EXPECT_TRUE(is_proper(k6, r.l, Metric::Sum));
    expect_classes(r.st, r.l, 2, 5);

    Outcome p = run(graphs::petersen(), 5);
    EXPECT_EQ(p.st.algorithm, "deg4");
    EXPECT_TRUE(is_proper(graphs::petersen(), p.l, Metric::Product));

    Graph g = random_graph(parse_random_model("max_degree:5"), 30, 11);
    Outcome q = run(g, 5);
    EXPECT_TRUE(is_proper(g, q.l, Metric::Product));
    expect_classes(q.st, q.l, 2, 5);

    EXPECT_THROW(label_deg5(graphs::complete(7)), PreconditionError);
}

TEST(Deg6, Examples) {
    Graph k7 = graphs::complete(7);
    Outcome r = run(k7, 6);
    EXPECT_TRUE(is_proper(k7, r.l, Metric::Product));
    EXPECT_TRUE(is_proper(k7, r.l, Metric::Sum));
    expect_classes(r.st, r.l, 2, 6);

    Graph g = random_graph(parse_random_model("max_degree:6"), 40, 3);
    Outcome q = run(g, 6);
    EXPECT_TRUE(is_proper(g, q.l, Metric::Product));
    expect_classes(q.st, q.l, 2, 6);

    Outcome c = run(graphs::cycle(9), 6);
    EXPECT_EQ(c.st.algorithm, "deg4");
    EXPECT_TRUE(is_proper(graphs::cycle(9), c.l, Metric::Product));

    EXPECT_THROW(label_deg6(graphs::complete(8)), PreconditionError);
}

TEST(Construct, AllSmallGraphsWithoutDispatch) {
    ConstructOptions o;
    o.dispatch = false;
    int runs = 0;
    for (int n = 1; n <= 7; ++n)
        for (const auto& g : enumerate_graphs(n, false)) {
            for (int alg : {4, 5, 6}) {
                if (g.max_degree() > alg) continue;
                Outcome r = run(g, alg, o);
                ++runs;
                EXPECT_TRUE(is_proper(g, r.l, Metric::Product)) << alg << " " << to_graph6(g);
                EXPECT_TRUE(is_proper(g, r.l, Metric::Multiset)) << alg << " " << to_graph6(g);
                EXPECT_LE(r.st.restarts, n) << to_graph6(g);
                expect_classes(r.st, r.l, 2, alg);
            }
        }
    EXPECT_EQ(runs, 3032);
}

TEST(Construct, RegularGraphsAreSumProper) {
    for (int d : {4, 5, 6})
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            int n = 12 + static_cast<int>(seed);
            if (n * d % 2) ++n;
            Graph g = random_graph(parse_random_model("regular:" + std::to_string(d)), n, seed);
            Outcome r = run(g, d);
            auto h = hierarchy_check(g, r.l);
            EXPECT_TRUE(h.product && h.sum && h.multiset) << d << " " << to_graph6(g);
        }
}

TEST(Construct, RandomGraphs) {
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        int n = 10 + static_cast<int>(seed % 51);
        for (int d : {4, 5, 6}) {
            Graph g = random_graph(parse_random_model("max_degree:" + std::to_string(d)), n, seed);
            ConstructOptions o;
            o.dispatch = false;
            Outcome r = run(g, d, o);
            EXPECT_TRUE(is_proper(g, r.l, Metric::Product)) << d << " " << to_graph6(g);
            EXPECT_LE(r.st.restarts, n);
        }
    }
}

TEST(Deg6, RandomCutsOverEmbeddedGraphs) {
    // R = H exactly, so every cut of H reachable by local search gets exercised
    for (int n = 5; n <= 7; ++n)
        for (const auto& H : enumerate_graphs(n, true)) {
            if (H.max_degree() > 4) continue;
            for (std::uint64_t k = 1; k <= 3; ++k) {
                ConstructOptions o;
                o.dispatch = false;
                o.cut_seed = k * 7919;
                Graph g = embed(H);
                Outcome r = run(g, 6, o);
                EXPECT_TRUE(is_proper(g, r.l, Metric::Product)) << to_graph6(H) << " seed " << o.cut_seed;
            }
        }
}

TEST(Deg6, BadGraphCycleGadget) {
    // G_B is a 4-cycle: R1 edges a1b1, a2b2 alternate with R2 edges p1q1, p2q2
    Gadget b;
    int a1 = b.add(1), b1 = b.add(1), a2 = b.add(1), b2 = b.add(1);
    int p1 = b.add(2), q1 = b.add(2), p2 = b.add(2), q2 = b.add(2);
    b.e(a1, b1), b.e(a2, b2), b.e(p1, q1), b.e(p2, q2);
    b.e(a1, p1), b.e(q1, a2), b.e(b2, p2), b.e(q2, b1);
    for (int v : {a1, b1, a2, b2}) b.e(v, b.add(2));
    for (int u : {p1, q1, p2, q2}) b.e(u, b.add(1)), b.e(u, b.add(1));
    Outcome r = run_gadget(b);
    EXPECT_EQ(r.st.hits["step14"], 1);
}

TEST(Deg6, BadGraphPathGadgets) {
    {
        // order 3: R1 ends whose endpoints both see the middle R2 edge
        Gadget b;
        int v1 = b.add(1), v2 = b.add(1), v3 = b.add(1), v4 = b.add(1), u1 = b.add(2), u2 = b.add(2);
        b.e(v1, v2), b.e(v3, v4), b.e(u1, u2);
        b.e(v1, u1), b.e(v2, u1), b.e(v3, u2), b.e(v4, u2);
        for (int v : {v1, v2, v3, v4}) b.e(v, b.add(2));
        b.e(u1, b.add(1)), b.e(u2, b.add(1));
        Outcome r = run_gadget(b);
        EXPECT_EQ(r.st.hits["step16"], 1);
    }
    {
        // order 5 with two non-good ends
        Gadget b;
        int v1 = b.add(1), v2 = b.add(1), v3 = b.add(1), v4 = b.add(1), v5 = b.add(1), v6 = b.add(1);
        int u1 = b.add(2), u2 = b.add(2), u3 = b.add(2), u4 = b.add(2);
        b.e(v1, v2), b.e(v3, v4), b.e(v5, v6), b.e(u1, u2), b.e(u3, u4);
        b.e(v1, u1), b.e(v2, u1), b.e(u2, v3), b.e(v4, u3), b.e(u4, v5), b.e(u4, v6);
        for (int v : {v1, v2, v3, v4, v5, v6}) b.e(v, b.add(2));
        for (int u : {u1, u4}) b.e(u, b.add(1));
        for (int u : {u2, u3}) b.e(u, b.add(1)), b.e(u, b.add(1));
        Outcome r = run_gadget(b);
        EXPECT_EQ(r.st.hits["step17"], 1);
    }
}

TEST(Deg6, T4FlexibilityGadget) {
    // the cycle gadget, with every R2 filler of an R1 vertex turned into a T4 vertex
    Gadget b;
    int a1 = b.add(1), b1 = b.add(1), a2 = b.add(1), b2 = b.add(1);
    int p1 = b.add(2), q1 = b.add(2), p2 = b.add(2), q2 = b.add(2);
    b.e(a1, b1), b.e(a2, b2), b.e(p1, q1), b.e(p2, q2);
    b.e(a1, p1), b.e(q1, a2), b.e(b2, p2), b.e(q2, b1);
    for (int v : {a1, b1, a2, b2}) {
        int t = b.add(2);
        b.e(v, t);
        for (int i = 0; i < 3; ++i) b.e(t, b.add(1));
    }
    for (int u : {p1, q1, p2, q2}) b.e(u, b.add(1)), b.e(u, b.add(1));
    Outcome r = run_gadget(b);
    EXPECT_EQ(r.st.hits["step14"], 1);
    EXPECT_EQ(r.st.hits["step18.e42"], 2);
}

namespace {

AlgState bad_state(const Graph& g, const std::vector<int>& side) {
    AlgState st;
    st.init(g, "deg6");
    st.side = side;
    return st;
}

}  // namespace

TEST(BuildBadGraph, Examples) {
    AlgState none = bad_state(graphs::path(2), {1, 1});
    auto empty = build_bad_graph(none, {});
    EXPECT_TRUE(empty.nodes.empty());

    // R1 edge 0-1, R2 edge 2-3, one origin edge 0-2
    Graph g(4, {{0, 1}, {2, 3}, {0, 2}});
    AlgState st = bad_state(g, {1, 1, 2, 2});
    auto gb = build_bad_graph(st, {g.edge_id(0, 1), g.edge_id(2, 3)});
    ASSERT_EQ(gb.nodes.size(), 2u);
    EXPECT_EQ(gb.adj[0], (std::vector<int>{1}));
    EXPECT_EQ(gb.adj[1], (std::vector<int>{0}));
    EXPECT_EQ(gb.origins(0, 1), (std::vector<EdgeId>{g.edge_id(0, 2)}));
}

TEST(BuildBadGraph, PathOfOrderThree) {
    // R1 edges 0-1 and 2-3 around R2 edge 4-5
    Graph g(6, {{0, 1}, {2, 3}, {4, 5}, {0, 4}, {1, 4}, {2, 5}, {3, 5}});
    AlgState st = bad_state(g, {1, 1, 1, 1, 2, 2});
    auto gb = build_bad_graph(st, {g.edge_id(0, 1), g.edge_id(2, 3), g.edge_id(4, 5)});
    int mid = gb.index_of(g.edge_id(4, 5));
    ASSERT_GE(mid, 0);
    EXPECT_EQ(gb.adj[mid].size(), 2u);
    EXPECT_EQ(gb.node_side[mid], 2);
    for (int j : gb.adj[mid]) {
        EXPECT_EQ(gb.adj[j].size(), 1u);
        EXPECT_EQ(gb.node_side[j], 1);
    }
}

TEST(BuildBadGraph, RejectsViolations) {
    // both endpoints of the R2 node touch the R1 node
    Graph g(4, {{0, 1}, {2, 3}, {0, 2}, {1, 3}});
    AlgState st = bad_state(g, {1, 1, 2, 2});
    EXPECT_THROW(build_bad_graph(st, {g.edge_id(0, 1), g.edge_id(2, 3)}), InternalError);

    // two R1 nodes joined directly
    Graph h(4, {{0, 1}, {2, 3}, {1, 2}});
    AlgState s2 = bad_state(h, {1, 1, 1, 1});
    EXPECT_THROW(build_bad_graph(s2, {h.edge_id(0, 1), h.edge_id(2, 3)}), InternalError);
}

TEST(Construct, DebugDumpOnFailure) {
    AlgState st;
    st.init(graphs::path(3), "deg4");
    st.phase = "unit";
    try {
        st.reach(0, 5, "unit test");
        FAIL() << "reach should throw";
    } catch (const InternalError& e) {
        auto j = nlohmann::json::parse(e.dump());
        EXPECT_EQ(j.at("phase"), "unit");
    }
}

TEST(LabelAuto, Examples) {
    Graph u = disjoint_union(graphs::cycle(5), graphs::complete(6));
    auto res = label_auto_report(u, Metric::Product);
    EXPECT_EQ(res.methods, (std::vector<std::string>{"deg4", "deg5"}));
    EXPECT_TRUE(is_proper(u, res.labelling, Metric::Product));

    Graph tree(7, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {0, 5}, {0, 6}});
    Graph big = disjoint_union(tree, graphs::star(8));
    auto t = label_auto_report(big, Metric::Multiset);
    EXPECT_EQ(t.methods, (std::vector<std::string>{"deg6", "mad3"}));
    EXPECT_TRUE(is_proper(big, t.labelling, Metric::Multiset));

    // non-regular sum instance falls back to the oracle
    auto s = label_auto_report(graphs::path(4), Metric::Sum);
    EXPECT_EQ(s.methods, (std::vector<std::string>{"oracle"}));
    EXPECT_TRUE(is_proper(graphs::path(4), s.labelling, Metric::Sum));

    EXPECT_THROW(label_auto(graphs::complete(8), Metric::Product), NoMethodError);
}
