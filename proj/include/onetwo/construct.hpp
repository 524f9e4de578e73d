#pragma once

#include <algorithm>
#include <array>
#include <cstdlib>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "onetwo/cut.hpp"
#include "onetwo/errors.hpp"
#include "onetwo/graph.hpp"
#include "onetwo/hall.hpp"
#include "onetwo/labelling.hpp"

namespace onetwo {

struct ConstructOptions {
    bool debug = false;       // phase checks after every phase
    bool dispatch = true;     // hand lower maximum degrees to the simpler algorithm
    // deg6 only: start partition of the cut search over R (R-local ids in
    // ascending host order), or a seed for a random one when nonzero
    std::vector<int> cut_start;
    std::uint64_t cut_seed = 0;
};

inline bool debug_from_env() {
    const char* s = std::getenv("ONETWO_DEBUG");
    return s && std::string(s) == "1";
}

// Flexible edges at T4 vertices. For an E4^1 edge, v keeps 2^4 unless the edge
// is flipped (then 2^3). For an E4^2 group, v ends at 2^2 once any member is
// flipped and never at 2^3.
struct Flex41 {
    EdgeId edge;
    Vertex v;
};

struct Flex42 {
    std::vector<EdgeId> edges;
    Vertex v;
};

// Working state of one constructive run, in host vertex ids.
struct AlgState {
    std::string algorithm;
    std::string phase;
    Graph host;
    IndependentSetPair pair;
    std::vector<int> side;   // 0 outside R, otherwise 1 or 2
    std::vector<int> d1;     // neighbours in R1
    std::vector<int> d2;     // neighbours in R2
    std::vector<char> in_I;
    std::vector<int> mlab;   // label the M edge at v will get (members of I)
    Matching M;
    bool materialised = false;
    TotalLabelling lab;
    std::array<std::vector<char>, 6> T;  // T[1..5]
    std::vector<char> special;           // outside every class on purpose
    std::vector<Flex41> E41;
    std::vector<Flex42> E42;
    std::vector<EdgeId> B;               // remaining bad edges
    std::vector<std::pair<Vertex, EdgeId>> t2_flex;  // flexible edge, -1 for the M edge
    std::vector<Vertex> deferred;        // isolated R1 vertices with one R2 neighbour
    int restarts = 0;
    std::map<std::string, int> hits;  // how often each case ran

    void init(const Graph& g, std::string alg) {
        algorithm = std::move(alg);
        host = g;
        side.assign(g.order(), 0);
        d1.assign(g.order(), 0);
        d2.assign(g.order(), 0);
        in_I.assign(g.order(), 0);
        mlab.assign(g.order(), 0);
        M = {};
        materialised = false;
        lab = TotalLabelling(g, 2);
        for (auto& t : T) t.assign(g.order(), 0);
        special.assign(g.order(), 0);
        E41.clear();
        E42.clear();
        B.clear();
        t2_flex.clear();
        deferred.clear();
        hits.clear();
    }

    void hit(const std::string& what) { ++hits[what]; }

    bool in_r(Vertex v) const { return side[v] != 0; }
    int dR(Vertex v) const { return d1[v] + d2[v]; }

    EdgeId eid(Vertex a, Vertex b) const {
        EdgeId e = host.edge_id(a, b);
        if (e < 0) throw InternalError("no edge " + std::to_string(a) + "-" + std::to_string(b), dump());
        return e;
    }
    int edge_label(Vertex a, Vertex b) const { return lab.edge_labels[eid(a, b)]; }
    void set_edge(Vertex a, Vertex b, int x) { lab.edge_labels[eid(a, b)] = x; }

    void add_to_I(Vertex v) {
        in_I[v] = 1;
        mlab[v] = 2;
    }

    // Exponent of 2 in the product, counting the pending M edge of members of I.
    int pi(Vertex v) const {
        int e = lab.vertex_labels[v] == 2;
        for (EdgeId id : host.incident(v)) e += lab.edge_labels[id] == 2;
        if (!materialised && in_I[v] && mlab[v] == 2) ++e;
        return e;
    }

    // Chooses v's own label so that its product becomes 2^target.
    void reach(Vertex v, int target, const char* where) {
        lab.vertex_labels[v] = 1;
        int base = pi(v);
        if (target == base) return;
        if (target == base + 1) {
            lab.vertex_labels[v] = 2;
            return;
        }
        throw InternalError(std::string(where) + ": vertex " + std::to_string(v) + " cannot reach 2^" +
                                std::to_string(target) + " (base 2^" + std::to_string(base) + ")",
                            dump());
    }

    std::vector<Vertex> members(const std::vector<char>& f) const {
        std::vector<Vertex> s;
        for (Vertex v = 0; v < static_cast<Vertex>(f.size()); ++v)
            if (f[v]) s.push_back(v);
        return s;
    }

    std::vector<Vertex> part(int s) const {
        std::vector<Vertex> out;
        for (Vertex v = 0; v < host.order(); ++v)
            if (side[v] == s) out.push_back(v);
        return out;
    }

    std::string dump() const {
        nlohmann::json j;
        j["algorithm"] = algorithm;
        j["phase"] = phase;
        j["n"] = host.order();
        auto edges = nlohmann::json::array();
        for (const auto& e : host.edges()) edges.push_back({e.u, e.v});
        j["edges"] = std::move(edges);
        if (!pair.in_x.empty()) {
            j["X"] = pair.X();
            j["Y"] = pair.Y();
        }
        j["R1"] = part(1);
        j["R2"] = part(2);
        j["I"] = members(in_I);
        for (int t = 1; t <= 5; ++t) j["T" + std::to_string(t)] = members(T[t]);
        auto e41 = nlohmann::json::array();
        for (const auto& f : E41) e41.push_back({{"edge", f.edge}, {"v", f.v}});
        j["E4_1"] = std::move(e41);
        auto e42 = nlohmann::json::array();
        for (const auto& f : E42) e42.push_back({{"edges", f.edges}, {"v", f.v}});
        j["E4_2"] = std::move(e42);
        j["bad_remaining"] = B;
        j["vertex_labels"] = lab.vertex_labels;
        j["edge_labels"] = lab.edge_labels;
        j["restarts"] = restarts;
        return j.dump();
    }
};

namespace detail {

inline void require(bool ok, const AlgState& st, const std::string& what) {
    if (!ok) throw InternalError(st.algorithm + " [" + st.phase + "]: " + what, st.dump());
}

// X -> 2^0, Y -> 2^1 with the M edges labelled, R classes per `allowed`.
inline void finish_xy(AlgState& st) {
    st.phase = "finalize";
    for (auto [v, y] : st.M.pairs) st.set_edge(v, y, st.mlab[v] == 0 ? 2 : st.mlab[v]);
    st.materialised = true;
    for (Vertex y : st.pair.Y()) {
        st.lab.vertex_labels[y] = 1;
        st.reach(y, 1, "finalize Y");
    }
    for (Vertex x : st.pair.X()) require(st.pi(x) == 0, st, "X vertex " + std::to_string(x) + " lost product 1");
}

inline void verify_product(const AlgState& st) {
    auto r = is_proper(st.host, st.lab, Metric::Product);
    if (!r.proper) {
        const Edge& e = st.host.edge(r.conflicts.front());
        require(false, st,
                "final labelling not product-proper: conflict on " + std::to_string(e.u) + "-" + std::to_string(e.v) +
                    " at 2^" + std::to_string(st.pi(e.u)));
    }
}

// Independent set I is settled: get M or restart.
inline bool settle_matching(AlgState& st) {
    auto cert = certify_hall(st.pair, st.members(st.in_I));
    if (cert.restart) {
        ++st.restarts;
        return false;
    }
    st.M = cert.matching;
    require(st.M.size() == st.members(st.in_I).size(), st, "matching does not saturate I");
    return true;
}

inline void check_classes(const AlgState& st, int lo_r, int hi_r) {
    for (Vertex v = 0; v < st.host.order(); ++v) {
        int p = st.pi(v);
        if (st.pair.in_x[v]) require(p == 0, st, "X class");
        else if (st.pair.in_y[v]) require(p == 1, st, "Y class");
        else require(p >= lo_r && p <= hi_r, st, "R vertex " + std::to_string(v) + " outside its class at 2^" + std::to_string(p));
    }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// maximum degree 4

inline TotalLabelling label_deg4_state(const Graph& g, AlgState& st, const ConstructOptions& = {}) {
    if (g.max_degree() > 4) throw PreconditionError("label_deg4 needs maximum degree at most 4");
    IndependentSetPair pair = build_XY(g);
    for (;;) {
        st.init(g, "deg4");
        st.pair = pair;
        st.phase = "structure";
        for (Vertex v = 0; v < g.order(); ++v)
            if (pair.in_r(v)) st.side[v] = 1;
        auto rs = induced(g, pair.R());
        const Graph& R = rs.graph;
        detail::require(R.max_degree() <= 2, st, "R has a vertex of degree above 2");
        struct Piece {
            std::vector<Vertex> walk;  // host ids in order
            bool cycle;
        };
        std::vector<Piece> pieces;
        for (const auto& comp : components(R)) {
            Piece p{{}, false};
            if (comp.size() == 1) {
                p.walk = {rs.to_parent[comp[0]]};
                st.add_to_I(p.walk[0]);
                pieces.push_back(p);
                continue;
            }
            Vertex start = comp.front();
            p.cycle = std::all_of(comp.begin(), comp.end(), [&](Vertex v) { return R.degree(v) == 2; });
            if (!p.cycle)
                for (Vertex v : comp)
                    if (R.degree(v) == 1) {
                        start = v;
                        break;
                    }
            // walk from the start, first towards its smaller neighbour
            Vertex prev = -1, cur = start;
            for (std::size_t i = 0; i < comp.size(); ++i) {
                p.walk.push_back(rs.to_parent[cur]);
                Vertex next = -1;
                for (Vertex w : R.neighbours(cur))
                    if (w != prev) {
                        next = w;
                        break;
                    }
                prev = cur;
                cur = next;
            }
            st.add_to_I(p.walk.front());  // v_C, or the end v_P with the smaller id
            pieces.push_back(std::move(p));
        }
        if (!detail::settle_matching(st)) {
            pair = st.pair;
            continue;
        }
        st.phase = "label";
        for (const auto& e : g.edges())
            if (pair.in_r(e.u) && pair.in_r(e.v)) st.set_edge(e.u, e.v, 2);
        for (const auto& p : pieces) {
            if (p.walk.size() == 1) {
                st.reach(p.walk[0], 2, "isolated R vertex");
                continue;
            }
            if (p.cycle) {
                st.reach(p.walk[0], 4, "cycle anchor");
                for (std::size_t i = 1; i < p.walk.size(); ++i) st.reach(p.walk[i], i % 2 ? 2 : 3, "cycle");
            } else {
                // from the far end v^_P: 2^2, 2^3, 2^2, ...
                const std::size_t L = p.walk.size();
                for (std::size_t i = 0; i < L; ++i) st.reach(p.walk[L - 1 - i], i % 2 ? 3 : 2, "path");
            }
        }
        detail::finish_xy(st);
        detail::check_classes(st, 2, 4);
        detail::verify_product(st);
        return st.lab;
    }
}

inline TotalLabelling label_deg4(const Graph& g, const ConstructOptions& opt = {}) {
    AlgState st;
    return label_deg4_state(g, st, opt);
}

// ---------------------------------------------------------------------------
// maximum degree 5

inline TotalLabelling label_deg5_state(const Graph& g, AlgState& st, const ConstructOptions& opt = {}) {
    if (g.max_degree() > 5) throw PreconditionError("label_deg5 needs maximum degree at most 5");
    if (opt.dispatch && g.max_degree() <= 4) return label_deg4_state(g, st, opt);
    IndependentSetPair pair = build_XY(g);
    for (;;) {
        st.init(g, "deg5");
        st.pair = pair;
        st.phase = "cut";
        auto rs = induced(g, pair.R());
        detail::require(rs.graph.max_degree() <= 3, st, "R has a vertex of degree above 3");
        Cut cut = stable_cut_deg3(rs.graph);
        auto rep = verify_cut_contract(cut, CutLevel::Deg3);
        detail::require(rep.ok, st, rep.ok ? "" : rep.violations.front());
        for (Vertex r = 0; r < rs.graph.order(); ++r) {
            Vertex v = rs.to_parent[r];
            st.side[v] = cut.side(r);
            st.d1[v] = cut.d1(r);
            st.d2[v] = cut.d2(r);
        }
        std::vector<char> i1(g.order(), 0), j2(g.order(), 0), isolated(g.order(), 0);
        std::vector<Edge> r1_edges, r2_edges;
        for (const auto& e : g.edges()) {
            if (!st.in_r(e.u) || !st.in_r(e.v) || st.side[e.u] != st.side[e.v]) continue;
            (st.side[e.u] == 1 ? r1_edges : r2_edges).push_back(e);
        }
        for (Vertex v = 0; v < g.order(); ++v) {
            if (!st.in_r(v)) continue;
            if (st.dR(v) == 0) {
                isolated[v] = 1;
                st.add_to_I(v);
            } else if (st.side[v] == 1 && st.d1[v] == 0) {
                st.add_to_I(v);  // I1 or I2
                i1[v] = st.dR(v) == 1;
            }
        }
        for (const auto& e : r1_edges) st.add_to_I(e.u);  // I3: smaller endpoint
        if (!detail::settle_matching(st)) {
            pair = st.pair;
            continue;
        }
        st.phase = "label";
        for (const auto& e : g.edges())
            if (st.in_r(e.u) && st.in_r(e.v) && (st.side[e.u] != st.side[e.v] || st.side[e.u] == 1))
                st.set_edge(e.u, e.v, 2);
        for (Vertex v = 0; v < g.order(); ++v)
            if (st.side[v] == 1 && !i1[v] && !isolated[v]) st.lab.vertex_labels[v] = 2;
        for (Vertex v = 0; v < g.order(); ++v)
            if (st.side[v] == 1 && !i1[v] && !isolated[v])
                detail::require(st.pi(v) == 4 || st.pi(v) == 5, st, "R1 vertex outside {2^4,2^5}");
        // J1
        for (Vertex v = 0; v < g.order(); ++v)
            if (st.side[v] == 2 && st.d2[v] == 0 && !isolated[v]) st.reach(v, st.d1[v] == 3 ? 3 : 2, "J1");
        // F, J2, J3
        for (const auto& e : r2_edges) {
            bool in_f = st.dR(e.u) <= 2 && st.dR(e.v) <= 2;
            Vertex pick = e.u;
            if (in_f) {
                st.set_edge(e.u, e.v, 2);
            } else if (st.dR(e.u) != 3) {
                pick = e.v;
            }
            j2[pick] = 1;
            st.reach(pick, 3, "J2");
            st.reach(pick == e.u ? e.v : e.u, 2, "J3");
        }
        for (Vertex v = 0; v < g.order(); ++v) {
            if (isolated[v]) st.reach(v, 2, "isolated R vertex");
            if (!i1[v]) continue;
            Vertex w = -1;
            for (Vertex x : g.neighbours(v))
                if (st.in_r(x)) w = x;
            st.reach(v, st.pi(w) == 2 ? 3 : 2, "I1");
        }
        detail::finish_xy(st);
        detail::check_classes(st, 2, 5);
        for (Vertex v = 0; v < g.order(); ++v) {
            if (st.side[v] == 1 && !i1[v] && !isolated[v])
                detail::require(st.pi(v) >= 4, st, "R1 class");
            if (st.side[v] == 2 && !isolated[v]) detail::require(st.pi(v) <= 3, st, "R2 class");
        }
        detail::verify_product(st);
        return st.lab;
    }
}

inline TotalLabelling label_deg5(const Graph& g, const ConstructOptions& opt = {}) {
    AlgState st;
    return label_deg5_state(g, st, opt);
}

// ---------------------------------------------------------------------------
// maximum degree 6

// Adjacency graph of the remaining bad edges.
struct BadAdjacencyGraph {
    std::vector<EdgeId> nodes;                 // host edge ids
    std::vector<int> node_side;                // 1 or 2
    std::vector<std::vector<int>> adj;         // node indices, ascending
    std::map<std::pair<int, int>, std::vector<EdgeId>> origin;  // (i < j) -> host cross edges

    int index_of(EdgeId e) const {
        auto it = std::find(nodes.begin(), nodes.end(), e);
        return it == nodes.end() ? -1 : static_cast<int>(it - nodes.begin());
    }
    const std::vector<EdgeId>& origins(int a, int b) const { return origin.at({std::min(a, b), std::max(a, b)}); }
};

inline BadAdjacencyGraph build_bad_graph(const AlgState& st, const std::vector<EdgeId>& B) {
    const Graph& g = st.host;
    BadAdjacencyGraph gb;
    gb.nodes = B;
    std::sort(gb.nodes.begin(), gb.nodes.end());
    std::vector<int> node_of(g.order(), -1);
    for (std::size_t i = 0; i < gb.nodes.size(); ++i) {
        const Edge& e = g.edge(gb.nodes[i]);
        detail::require(st.side[e.u] == st.side[e.v] && st.side[e.u] != 0, st, "bad edge not inside R1 or R2");
        gb.node_side.push_back(st.side[e.u]);
        detail::require(node_of[e.u] < 0 && node_of[e.v] < 0, st, "bad edges share a vertex");
        node_of[e.u] = node_of[e.v] = static_cast<int>(i);
    }
    gb.adj.assign(gb.nodes.size(), {});
    for (EdgeId id = 0; id < g.size(); ++id) {
        const Edge& e = g.edge(id);
        int a = node_of[e.u], b = node_of[e.v];
        if (a < 0 || b < 0 || a == b) continue;
        detail::require(gb.node_side[a] != gb.node_side[b], st, "bad-edge graph is not bipartite");
        auto key = std::make_pair(std::min(a, b), std::max(a, b));
        if (!gb.origin.count(key)) {
            gb.adj[a].push_back(b);
            gb.adj[b].push_back(a);
        }
        gb.origin[key].push_back(id);
    }
    for (auto& a : gb.adj) std::sort(a.begin(), a.end());
    for (std::size_t i = 0; i < gb.nodes.size(); ++i)
        detail::require(gb.adj[i].size() <= 2, st, "bad-edge graph has a vertex of degree " + std::to_string(gb.adj[i].size()));

    // endpoints of node i that see some vertex of node j
    auto touching = [&](int i, int j) {
        const Edge& e = g.edge(gb.nodes[i]);
        std::vector<Vertex> out;
        for (Vertex x : {e.u, e.v})
            for (Vertex w : g.neighbours(x))
                if (node_of[w] == j) {
                    out.push_back(x);
                    break;
                }
        return out;
    };
    for (std::size_t i = 0; i < gb.nodes.size(); ++i) {
        const Edge& e = g.edge(gb.nodes[i]);
        if (gb.adj[i].size() == 1) {
            int j = gb.adj[i][0];
            auto t = touching(static_cast<int>(i), j);
            if (gb.node_side[i] == 2) {
                detail::require(t.size() == 1, st, "bad-edge graph item 1 fails at a degree-1 R2 node");
            } else if (t.size() == 2) {
                // both endpoints see exactly one and the same bad vertex
                std::vector<Vertex> seen;
                for (Vertex x : {e.u, e.v})
                    for (Vertex w : g.neighbours(x))
                        if (node_of[w] >= 0 && st.side[w] == 2) seen.push_back(w);
                detail::require(seen.size() == 2 && seen[0] == seen[1], st, "bad-edge graph item 2 fails");
            }
        }
        if (gb.adj[i].size() == 2) {
            auto ta = touching(static_cast<int>(i), gb.adj[i][0]);
            auto tb = touching(static_cast<int>(i), gb.adj[i][1]);
            detail::require(ta.size() == 1 && tb.size() == 1 && ta[0] != tb[0], st, "bad-edge graph item 3 fails");
            for (int j : gb.adj[i])
                if (gb.adj[j].size() == 2)
                    detail::require(gb.origins(static_cast<int>(i), j).size() == 1, st,
                                    "bad-edge graph item 3: several origin edges between degree-2 nodes");
        }
    }
    return gb;
}

namespace detail {

class Deg6 {
  public:
    Deg6(AlgState& st, const ConstructOptions& opt) : st_(st), g_(st.host), opt_(opt) {}

    // Runs every phase; false when a Hall exchange forced a restart.
    bool run() {
        setup();
        phase_cross();
        phase_r2_nonbad();
        phase_r1_nonbad();
        phase_t1();
        for (Vertex v = 0; v < g_.order(); ++v)
            if (st_.T[1][v]) phase_check("T1 vertex off 2^2..2^4", st_.pi(v) >= 2 && st_.pi(v) <= 4);
        st_.phase = "t2_defer";  // T2 vertices are settled in finalize
        phase_bad_local();
        check_settled(false);
        st_.phase = "build_bad_graph";
        gb_ = build_bad_graph(st_, st_.B);
        st_.hits["gb.nodes"] += static_cast<int>(gb_.nodes.size());
        phase_gb();
        check_settled(false);
        phase_t4();
        check_settled(true);
        st_.phase = "matching";
        if (!settle_matching(st_)) return false;
        finalize();
        return true;
    }

  private:
    void check(bool ok, const std::string& what) const { require(ok, st_, what); }

    void setup() {
        st_.phase = "cut";
        auto rs = induced(g_, st_.pair.R());
        check(rs.graph.max_degree() <= 4, "R has a vertex of degree above 4");
        std::vector<int> start = opt_.cut_start;
        if (!start.empty() && static_cast<int>(start.size()) != rs.graph.order())
            throw PreconditionError("cut_start does not match the size of R");
        if (start.empty() && opt_.cut_seed != 0) {
            std::mt19937_64 rng(opt_.cut_seed);
            for (Vertex r = 0; r < rs.graph.order(); ++r) start.push_back(1 + static_cast<int>(rng() >> 63));
        }
        Cut cut = stable_cut_deg4(rs.graph, start);
        auto rep = verify_cut_contract(cut, CutLevel::Deg4);
        check(rep.ok, rep.ok ? "" : rep.violations.front());
        for (Vertex r = 0; r < rs.graph.order(); ++r) {
            Vertex v = rs.to_parent[r];
            st_.side[v] = cut.side(r);
            st_.d1[v] = cut.d1(r);
            st_.d2[v] = cut.d2(r);
        }
        auto bad = bad_edges(cut);
        bad_.assign(g_.order(), -1);
        for (auto* list : {&bad.bad1, &bad.bad2})
            for (EdgeId id : *list) {
                const Edge& e = rs.graph.edge(id);
                EdgeId h = st_.eid(rs.to_parent[e.u], rs.to_parent[e.v]);
                st_.B.push_back(h);
                bad_[rs.to_parent[e.u]] = bad_[rs.to_parent[e.v]] = h;
            }
        std::sort(st_.B.begin(), st_.B.end());
    }

    bool in_B(EdgeId e) const { return std::find(st_.B.begin(), st_.B.end(), e) != st_.B.end(); }
    void drop_B(EdgeId e) { st_.B.erase(std::remove(st_.B.begin(), st_.B.end(), e), st_.B.end()); }
    // Remaining bad edge containing v, or -1.
    EdgeId bad_at(Vertex v) const { return bad_[v] >= 0 && in_B(bad_[v]) ? bad_[v] : -1; }
    Vertex mate(EdgeId e, Vertex v) const { return g_.other(e, v); }

    std::vector<Vertex> r_nbrs(Vertex v, int s) const {
        std::vector<Vertex> out;
        for (Vertex w : g_.neighbours(v))
            if (st_.side[w] == s) out.push_back(w);
        return out;
    }

    void phase_check(const std::string& what, bool ok) const {
        if (opt_.debug) check(ok, "phase check: " + what);
    }

    // No clash between R vertices whose products are already binding.
    void check_settled(bool t4_done) const {
        if (!opt_.debug) return;
        auto settled = [&](Vertex v) {
            return st_.in_r(v) && !st_.T[2][v] && (t4_done || !st_.T[4][v]) && bad_at(v) < 0 &&
                   std::find(st_.deferred.begin(), st_.deferred.end(), v) == st_.deferred.end();
        };
        for (const auto& e : g_.edges())
            if (settled(e.u) && settled(e.v))
                phase_check("settled vertices " + std::to_string(e.u) + " and " + std::to_string(e.v) + " clash",
                            st_.pi(e.u) != st_.pi(e.v));
    }

    // step 1
    void phase_cross() {
        st_.phase = "cross";
        for (const auto& e : g_.edges())
            if (st_.in_r(e.u) && st_.in_r(e.v) && st_.side[e.u] != st_.side[e.v]) st_.set_edge(e.u, e.v, 2);
    }

    // steps 2-3
    void phase_r2_nonbad() {
        st_.phase = "r2_nonbad";
        for (const auto& e : g_.edges()) {
            if (st_.side[e.u] != 2 || st_.side[e.v] != 2 || bad_[e.u] >= 0) continue;
            Vertex u = e.u, v = e.v;
            if (st_.d1[u] > st_.d1[v]) std::swap(u, v);
            check(st_.d1[u] >= 1 && st_.d1[u] <= 2, "non-bad R2 edge with unexpected R1-degrees");
            if (st_.d1[v] <= 1) st_.set_edge(u, v, 2);
            st_.reach(u, 2, "step 2");
            st_.reach(v, 3, "step 2");
        }
        for (Vertex v = 0; v < g_.order(); ++v) {
            if (st_.side[v] != 2 || st_.d2[v] != 0) continue;
            switch (st_.d1[v]) {
                case 0: isolated(v); break;
                case 1: case 2: st_.reach(v, st_.d1[v] + 1, "step 3"); break;
                case 3: st_.reach(v, 3, "step 3"); break;
                default: st_.T[4][v] = 1; break;
            }
        }
        bool ok = true;
        for (Vertex v = 0; v < g_.order(); ++v)
            if (st_.side[v] == 2 && bad_[v] < 0 && !st_.T[4][v] && st_.dR(v) > 0) ok = ok && (st_.pi(v) == 2 || st_.pi(v) == 3);
        phase_check("R2 vertices off bad edges and T4 have 2^2 or 2^3", ok);
    }

    void isolated(Vertex v) {
        st_.add_to_I(v);
        st_.special[v] = 1;
        st_.reach(v, 2, "isolated R vertex");
    }

    // steps 4-9
    void phase_r1_nonbad() {
        st_.phase = "r1_nonbad";
        for (const auto& e : g_.edges())
            if (st_.side[e.u] == 1 && st_.side[e.v] == 1) st_.set_edge(e.u, e.v, 2);
        std::vector<Vertex> r1 = st_.part(1);
        auto rs = induced(g_, r1);
        const Graph& H = rs.graph;
        for (const auto& comp : components(H)) {
            std::vector<Vertex> walk;
            bool cycle = std::all_of(comp.begin(), comp.end(), [&](Vertex v) { return H.degree(v) == 2; });
            if (comp.size() == 1) {
                step9(rs.to_parent[comp[0]]);
                continue;
            }
            Vertex start = comp.front();
            if (!cycle)
                for (Vertex v : comp)
                    if (H.degree(v) == 1) {
                        start = v;
                        break;
                    }
            Vertex prev = -1, cur = start;
            for (std::size_t i = 0; i < comp.size(); ++i) {
                walk.push_back(rs.to_parent[cur]);
                Vertex next = -1;
                for (Vertex w : H.neighbours(cur))
                    if (w != prev) {
                        next = w;
                        break;
                    }
                prev = cur;
                cur = next;
            }
            if (cycle && walk.size() % 2 == 0) step5(walk);
            else if (cycle) step6(walk);
            else if (walk.size() % 2 == 1) step7(walk);
            else if (walk.size() >= 4) step8_long(walk);
            else if (bad_[walk[0]] < 0) step8_pair(walk);
        }
        bool ok = true;
        for (Vertex v = 0; v < g_.order(); ++v) {
            if (st_.side[v] != 1 || bad_[v] >= 0 || st_.special[v]) continue;
            int p = st_.pi(v);
            if (st_.T[1][v]) ok = ok && p == 4;
            else if (!st_.T[2][v] && std::find(st_.deferred.begin(), st_.deferred.end(), v) == st_.deferred.end())
                ok = ok && (p == 5 || p == 6);
        }
        phase_check("R1 vertices off bad edges: T1 at 2^4, intended at 2^5 or 2^6", ok);
    }

    void step5(const std::vector<Vertex>& c) {
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (i % 2 == 0) st_.add_to_I(c[i]);
            st_.reach(c[i], i % 2 == 0 ? 6 : 5, "step 5");
        }
    }

    void step6(const std::vector<Vertex>& c) {
        // c[0] is the smallest id; the rest is a path starting at its smaller neighbour
        st_.T[1][c[0]] = 1;
        st_.reach(c[0], 4, "step 6");
        for (std::size_t i = 1; i < c.size(); ++i) {
            bool in = (i - 1) % 2 == 0;
            if (in) st_.add_to_I(c[i]);
            st_.reach(c[i], in ? 6 : 5, "step 6");
        }
    }

    void step7(const std::vector<Vertex>& p) {
        for (std::size_t i = 0; i < p.size(); ++i) {
            bool end = i == 0 || i + 1 == p.size();
            if (i % 2 == 0) {
                st_.add_to_I(p[i]);
                st_.reach(p[i], end ? 5 : 6, "step 7");
            } else {
                st_.T[1][p[i]] = 1;
                st_.reach(p[i], 4, "step 7");
            }
        }
    }

    void step8_long(std::vector<Vertex> p) {
        // v_P: an end with three R2 neighbours if there is one, else the first end
        if (st_.d2[p.back()] == 3 && st_.d2[p.front()] != 3) std::reverse(p.begin(), p.end());
        const Vertex vP = p[0], uP = p[1];
        for (std::size_t i = 1; i < p.size(); i += 2) st_.add_to_I(p[i]);
        for (std::size_t i = 3; i < p.size(); i += 2) st_.reach(p[i], 5, "step 8");
        st_.reach(uP, 6, "step 8");
        for (std::size_t i = 2; i < p.size(); i += 2) {
            st_.T[1][p[i]] = 1;
            st_.reach(p[i], 4, "step 8");
        }
        if (st_.d2[vP] == 3) {
            st_.reach(vP, 5, "step 8");
        } else {
            st_.T[2][vP] = 1;
            st_.t2_flex.emplace_back(vP, st_.eid(vP, uP));
        }
    }

    void step8_pair(const std::vector<Vertex>& p) {
        Vertex v1 = p[0], v2 = p[1];
        if (st_.d2[v1] != 3 || (st_.d2[v2] == 3 && v2 < v1)) std::swap(v1, v2);
        check(st_.d2[v1] == 3, "non-bad R1 edge without a 3-neighbour endpoint");
        st_.add_to_I(v1);
        st_.reach(v1, 6, "step 8");
        st_.lab.vertex_labels[v2] = 2;
        if (st_.pi(v2) == 5) return;
        check(st_.pi(v2) == 4, "step 8: second endpoint off {2^4,2^5}");
        st_.T[2][v2] = 1;
        st_.t2_flex.emplace_back(v2, st_.eid(v1, v2));
    }

    void step9(Vertex v) {
        const int c = st_.d2[v];
        if (c == 0) return isolated(v);
        st_.add_to_I(v);
        if (c >= 3) {
            st_.hit("step9");
            st_.reach(v, c + 2, "step 9");
        } else if (c == 2) {
            st_.T[2][v] = 1;
            st_.t2_flex.emplace_back(v, -1);
        } else {
            st_.special[v] = 1;
            st_.deferred.push_back(v);
        }
    }

    // step 10
    void phase_t1() {
        st_.phase = "t1";
        // E1^2: per bad R2 edge touching T1, one endpoint u_e and one T1 neighbour v_e
        std::map<Vertex, std::vector<std::pair<Vertex, EdgeId>>> e12;  // v_e -> (u_e, bad edge)
        for (EdgeId b : std::vector<EdgeId>(st_.B)) {
            const Edge& e = g_.edge(b);
            if (st_.side[e.u] != 2) continue;
            for (Vertex u : {e.u, e.v}) {
                Vertex t = -1;
                for (Vertex w : g_.neighbours(u))
                    if (st_.T[1][w]) {
                        t = w;
                        break;
                    }
                if (t >= 0) {
                    e12[t].emplace_back(u, b);
                    break;
                }
            }
        }
        for (Vertex v = 0; v < g_.order(); ++v) {
            if (!st_.T[1][v]) continue;
            std::vector<Vertex> a;  // E1^1, current T4 neighbours
            for (Vertex w : r_nbrs(v, 2))
                if (st_.T[4][w]) a.push_back(w);
            std::vector<std::pair<Vertex, EdgeId>> b = e12.count(v) ? e12[v] : std::vector<std::pair<Vertex, EdgeId>>{};
            check(a.size() + b.size() <= 2, "T1 vertex with more than two R2 neighbours");
            if (a.size() + b.size() == 0) continue;
            if (a.size() + b.size() == 1) {
                st_.hit(a.empty() ? "step10.bad" : "step10.t4");
                Vertex u = a.empty() ? b[0].first : a[0];
                st_.set_edge(v, u, 1);
                st_.reach(v, 4, "step 10");
                if (a.empty()) {
                    drop_B(b[0].second);
                    st_.reach(u, 2, "step 10");
                    st_.reach(mate(b[0].second, u), 3, "step 10");
                } else {
                    st_.T[4][u] = 0;
                    st_.reach(u, 3, "step 10");
                }
            } else if (b.empty()) {
                st_.hit("step10.t4_t4");
                for (Vertex u : a) {
                    st_.set_edge(v, u, 1);
                    st_.T[4][u] = 0;
                }
                st_.reach(v, 2, "step 10");
                for (Vertex u : a) check(st_.pi(u) == 2 || st_.pi(u) == 3, "step 10: T4 vertex not at 2^2 or 2^3");
            } else if (a.empty()) {
                st_.hit("step10.bad_bad");
                for (auto [u, be] : b) {
                    st_.set_edge(v, u, 1);
                    drop_B(be);
                    st_.reach(u, 2, "step 10");
                    st_.reach(mate(be, u), 3, "step 10");
                }
                st_.reach(v, 3, "step 10");
            } else {
                st_.hit("step10.mixed");
                auto [u2, be] = b[0];
                st_.set_edge(v, u2, 1);
                drop_B(be);
                st_.reach(v, 4, "step 10");
                st_.reach(u2, 2, "step 10");
                st_.reach(mate(be, u2), 3, "step 10");
                st_.E41.push_back({st_.eid(v, a[0]), v});
            }
        }
    }

    // steps 12-13
    void phase_bad_local() {
        st_.phase = "bad_local";
        for (bool again = true; again;) {
            again = false;
            for (EdgeId b : std::vector<EdgeId>(st_.B)) {
                if (!in_B(b) || st_.side[g_.edge(b).u] != 1) continue;
                for (Vertex v1 : {g_.edge(b).u, g_.edge(b).v}) {
                    std::vector<Vertex> us;
                    for (Vertex w : r_nbrs(v1, 2))
                        if (bad_at(w) >= 0) us.push_back(w);
                    if (us.size() < 2) continue;
                    step12(b, v1, us[0], us[1]);
                    again = true;
                    break;
                }
            }
        }
        for (bool again = true; again;) {
            again = false;
            for (EdgeId f : std::vector<EdgeId>(st_.B)) {
                if (!in_B(f) || st_.side[g_.edge(f).u] != 2) continue;
                if (try_step13(f)) again = true;
            }
        }
    }

    void step12(EdgeId b, Vertex v1, Vertex u, Vertex u2) {
        Vertex v2 = mate(b, v1);
        st_.add_to_I(v2);
        st_.reach(v2, 5, "step 12");
        EdgeId fu = bad_at(u), fu2 = bad_at(u2);
        st_.hit(fu == fu2 ? "step12.same" : "step12.distinct");
        if (fu == fu2) {
            st_.lab.vertex_labels[u] = 2;
            st_.set_edge(v1, u2, 1);
            st_.reach(v1, 3, "step 12");
            check(st_.pi(u) == 4 && st_.pi(u2) == 2, "step 12 case 1 products");
        } else {
            st_.reach(u, 4, "step 12");
            st_.reach(u2, 4, "step 12");
            st_.reach(v1, 3, "step 12");
            check(st_.pi(mate(fu, u)) == 3 && st_.pi(mate(fu2, u2)) == 3, "step 12 case 2 products");
        }
        for (Vertex x : {v1, v2, u, u2, mate(fu, u), mate(fu2, u2)}) st_.special[x] = 1;
        drop_B(b);
        drop_B(fu);
        drop_B(fu2);
    }

    bool try_step13(EdgeId f) {
        const Edge& fe = g_.edge(f);
        for (EdgeId b : std::vector<EdgeId>(st_.B)) {
            const Edge& be = g_.edge(b);
            if (st_.side[be.u] != 1) continue;
            auto sees = [&](Vertex x, Vertex y) { return g_.adjacent(x, y); };
            bool u_touch = sees(fe.u, be.u) || sees(fe.u, be.v);
            bool v_touch = sees(fe.v, be.u) || sees(fe.v, be.v);
            if (!u_touch || !v_touch) continue;
            // v1: smaller endpoint of b, u1 its neighbour on f
            Vertex v1 = be.u, v2 = be.v;
            Vertex u1 = sees(v1, fe.u) ? fe.u : fe.v;
            check(sees(v1, u1) && !sees(v1, mate(f, u1)), "step 13: v1 sees both ends of the bad edge");
            Vertex u2 = mate(f, u1);
            check(sees(v2, u2) && !sees(v2, u1), "step 13: unexpected adjacency");
            Vertex u3 = -1;
            for (Vertex w : r_nbrs(v1, 2))
                if (w != u1) u3 = w;
            check(u3 >= 0, "step 13: v1 lacks a second R2 neighbour");
            st_.hit(st_.T[4][u3] ? "step13.t4" : "step13.plain");
            if (st_.T[4][u3]) {
                st_.add_to_I(v2);
                st_.lab.vertex_labels[u2] = 2;
                st_.lab.vertex_labels[u1] = 2;
                st_.set_edge(v1, u1, 1);
                st_.reach(v2, 5, "step 13");
                st_.reach(v1, 2, "step 13");
                check(st_.pi(u1) == 3 && st_.pi(u2) == 4, "step 13 case 1 products");
                st_.E42.push_back({{st_.eid(v1, u3)}, v1});
            } else {
                st_.add_to_I(v1);
                st_.lab.vertex_labels[u2] = 2;
                st_.set_edge(u1, u2, 2);
                st_.set_edge(v1, u1, 1);
                st_.set_edge(v2, u2, 1);
                st_.reach(v1, 4, "step 13");
                check(st_.pi(u1) == 3 && st_.pi(u2) == 4, "step 13 case 2 products");
                Vertex u4 = -1;
                for (Vertex w : r_nbrs(v2, 2))
                    if (w != u2) u4 = w;
                check(u4 >= 0, "step 13: v2 lacks a second R2 neighbour");
                settle_low(v2, u4, "step 13");
            }
            for (Vertex x : {v1, v2, u1, u2}) st_.special[x] = 1;
            drop_B(f);
            drop_B(b);
            return true;
        }
        return false;
    }

    // v ends at 2^2 or 2^3, away from its R2 neighbour w; a T4 neighbour is
    // met with 2^2 and an E4^2 entry.
    void settle_low(Vertex v, Vertex w, const char* where) {
        if (st_.T[4][w]) {
            st_.reach(v, 2, where);
            st_.E42.push_back({{st_.eid(v, w)}, v});
            return;
        }
        st_.reach(v, st_.pi(w) == 2 ? 3 : 2, where);
    }

    // steps 14-17
    void phase_gb() {
        const int N = static_cast<int>(gb_.nodes.size());
        std::vector<char> done(N, 0);
        for (int s = 0; s < N; ++s) {
            if (done[s]) continue;
            // collect the component as a walk
            std::vector<int> comp{s};
            done[s] = 1;
            for (std::size_t i = 0; i < comp.size(); ++i)
                for (int t : gb_.adj[comp[i]])
                    if (!done[t]) {
                        done[t] = 1;
                        comp.push_back(t);
                    }
            bool cycle = true;
            for (int x : comp) cycle = cycle && gb_.adj[x].size() == 2;
            if (cycle) {
                st_.phase = "gb_cycles";
                step14(order_walk(comp, comp.front(), true));
                continue;
            }
            std::vector<int> ends;
            for (int x : comp)
                if (gb_.adj[x].size() <= 1) ends.push_back(x);
            std::sort(ends.begin(), ends.end());
            int good = -1;
            for (int x : ends)
                if (good < 0 && free_vertex(x) >= 0) good = x;
            if (good >= 0) {
                st_.phase = "gb_good_paths";
                step15(order_walk(comp, good, false));
                continue;
            }
            check(comp.size() % 2 == 1 && comp.size() >= 3 && gb_.node_side[ends[0]] == 1, "path of bad edges without a good end");
            auto walk = order_walk(comp, ends[0], false);
            st_.phase = walk.size() == 3 ? "gb_p3" : "gb_long_paths";
            step16_17(walk);
        }
        st_.B.clear();
    }

    std::vector<int> order_walk(const std::vector<int>& comp, int start, bool cycle) const {
        std::vector<int> w{start};
        int prev = -1, cur = start;
        while (w.size() < comp.size()) {
            int next = -1;
            for (int t : gb_.adj[cur])
                if (t != prev && (w.size() < 2 || t != w.front() || !cycle)) {
                    next = t;
                    break;
                }
            prev = cur;
            cur = next;
            w.push_back(cur);
        }
        if (cycle && gb_.node_side[w[0]] != 1) std::rotate(w.begin(), w.begin() + 1, w.end());
        return w;
    }

    // An endpoint of node x whose cross neighbours avoid the remaining bad edges.
    Vertex free_vertex(int x) const {
        const Edge& e = g_.edge(gb_.nodes[x]);
        for (Vertex v : {e.u, e.v}) {
            bool ok = true;
            for (Vertex w : g_.neighbours(v))
                if (st_.side[w] != 0 && st_.side[w] != st_.side[v] && bad_at(w) >= 0) ok = false;
            if (ok) return v;
        }
        return -1;
    }

    // Endpoint of node a adjacent to some endpoint of node b (smallest id).
    Vertex link(int a, int b) const {
        const Edge& e = g_.edge(gb_.nodes[a]);
        const Edge& f = g_.edge(gb_.nodes[b]);
        for (Vertex x : {e.u, e.v})
            if (g_.adjacent(x, f.u) || g_.adjacent(x, f.v)) return x;
        throw InternalError("bad-edge graph nodes without a link", st_.dump());
    }

    Vertex other_r2(Vertex v, Vertex not_this) const {
        for (Vertex w : r_nbrs(v, 2))
            if (w != not_this) return w;
        return -1;
    }

    void flex_t4(Vertex v, Vertex w) {
        if (w >= 0 && st_.T[4][w]) st_.E42.push_back({{st_.eid(v, w)}, v});
    }

    void step14(const std::vector<int>& c) {
        st_.hit("step14");
        const int L = static_cast<int>(c.size());
        for (int i = 0; i < L; i += 2) {
            int e = c[i], f = c[(i + 1) % L];
            Vertex a = link(e, f);               // v_i -> T3
            Vertex dprime = mate(gb_.nodes[e], a);  // v'_i -> I
            Vertex cvx = link(f, c[(i + 2) % L]);   // u_i -> T5
            Vertex b = mate(gb_.nodes[f], cvx);     // u'_i
            st_.T[3][a] = 1;
            st_.T[5][cvx] = 1;
            st_.add_to_I(dprime);
            st_.reach(dprime, 5, "step 14");
            st_.reach(a, 4, "step 14");
            st_.reach(cvx, 4, "step 14");
            st_.reach(b, 3, "step 14");
            check(g_.adjacent(a, b), "step 14: T3 vertex not adjacent to its partner");
            flex_t4(a, other_r2(a, b));
        }
    }

    void step15(const std::vector<int>& p) {
        st_.hit("step15");
        const int k = static_cast<int>(p.size());
        Vertex prev_link = -1;  // v'_{i-1}
        for (int i = 0; i < k; ++i) {
            EdgeId e = gb_.nodes[p[i]];
            Vertex v;
            if (i == 0) {
                v = free_vertex(p[0]);
            } else {
                v = -1;
                for (Vertex x : {g_.edge(e).u, g_.edge(e).v})
                    if (v < 0 && g_.adjacent(x, prev_link)) v = x;
                check(v >= 0, "step 15: broken link");
            }
            Vertex vp = mate(e, v);
            if (gb_.node_side[p[i]] == 1) {
                st_.add_to_I(vp);
                st_.reach(v, 4, "step 15");
                st_.reach(vp, 5, "step 15");
                if (i == 0) {
                    auto ws = r_nbrs(v, 2);
                    std::vector<EdgeId> t4;
                    for (Vertex w : ws)
                        if (st_.T[4][w]) t4.push_back(st_.eid(v, w));
                    if (!t4.empty()) st_.E42.push_back({t4, v});
                } else {
                    flex_t4(v, other_r2(v, prev_link));
                }
            } else {
                st_.reach(v, 4, "step 15");
                st_.reach(vp, 3, "step 15");
            }
            if (i + 1 < k) check(g_.adjacent(vp, link(p[i + 1], p[i])), "step 15: link not from v'_i");
            prev_link = vp;
        }
    }

    void step16_17(const std::vector<int>& p) {
        const int L = static_cast<int>(p.size());
        st_.hit(L == 3 ? "step16" : "step17");
        // e1 = v1v2, e2 = u1u2, e3 = v3v4
        EdgeId e1 = gb_.nodes[p[0]], e2 = gb_.nodes[p[1]], e3 = gb_.nodes[p[2]];
        Vertex u1 = link(p[1], p[0]), u2 = mate(e2, u1);
        Vertex v2 = std::min(g_.edge(e1).u, g_.edge(e1).v), v1 = mate(e1, v2);
        check(g_.adjacent(v2, u1) && g_.adjacent(v1, u1), "step 16: ends not both attached to u1");
        Vertex v3 = -1;
        for (Vertex x : {g_.edge(e3).u, g_.edge(e3).v})
            if (v3 < 0 && g_.adjacent(x, u2)) v3 = x;
        check(v3 >= 0, "step 16: e3 not attached to u2");
        if (L == 3) {
            Vertex other = mate(e3, v3);
            if (g_.adjacent(other, u2) && other < v3) v3 = other;
        }
        Vertex v4 = mate(e3, v3);
        // right part
        st_.add_to_I(v4);
        st_.set_edge(u2, v3, 1);
        st_.lab.vertex_labels[u2] = 2;
        st_.set_edge(u1, u2, 2);
        st_.reach(v4, 5, "step 16");
        check(st_.pi(u2) == 4, "step 16: u2 not at 2^4");
        settle_low(v3, other_r2(v3, u2), "step 16");
        // left part
        Vertex w1 = other_r2(v1, u1);
        if (w1 >= 0 && st_.T[4][w1]) {
            st_.hit("step16.t4");
            st_.add_to_I(v2);
            st_.reach(v2, 5, "step 16");
            st_.set_edge(v1, u1, 1);
            st_.reach(v1, 2, "step 16");
            st_.reach(u1, 3, "step 16");
            st_.E42.push_back({{st_.eid(v1, w1)}, v1});
        } else {
            st_.add_to_I(v1);
            st_.set_edge(v1, u1, 1);
            st_.set_edge(v2, u1, 1);
            st_.reach(v1, 4, "step 16");
            settle_low(v2, other_r2(v2, u1), "step 16");
            st_.reach(u1, st_.pi(v2) == 2 ? 3 : 2, "step 16");
        }
        for (Vertex x : {v1, v2, v3, v4, u1, u2}) st_.special[x] = 1;
        // longer paths: T3 / I on R1 nodes, T5 / intended on R2 nodes
        Vertex prev = v4;
        for (int i = 3; i < L; i += 2) {
            EdgeId f = gb_.nodes[p[i]], e = gb_.nodes[p[i + 1]];
            Vertex ua = -1;  // u_{2i+1}: attached to the previous R1 node
            for (Vertex x : {g_.edge(f).u, g_.edge(f).v})
                if (ua < 0 && g_.adjacent(x, prev)) ua = x;
            check(ua >= 0, "step 17: broken link");
            Vertex ub = mate(f, ua);
            Vertex t3 = -1;
            for (Vertex x : {g_.edge(e).u, g_.edge(e).v})
                if (t3 < 0 && g_.adjacent(x, ub)) t3 = x;
            check(t3 >= 0, "step 17: broken link");
            if (i + 2 == L) {
                Vertex o = mate(e, t3);
                if (g_.adjacent(o, ub) && o < t3) t3 = o;
            }
            Vertex iv = mate(e, t3);
            st_.T[5][ua] = 1;
            st_.T[3][t3] = 1;
            st_.add_to_I(iv);
            st_.reach(ua, 4, "step 17");
            st_.reach(ub, 3, "step 17");
            st_.reach(t3, 4, "step 17");
            st_.reach(iv, 5, "step 17");
            flex_t4(t3, other_r2(t3, ub));
            prev = iv;
        }
    }

    // step 18
    void phase_t4() {
        st_.phase = "t4";
        std::vector<char> settled(g_.order(), 0);
        for (Vertex u = 0; u < g_.order(); ++u) {
            if (!st_.T[4][u]) continue;
            const auto saved_v = st_.lab.vertex_labels;
            const auto saved_e = st_.lab.edge_labels;
            if (!(rule_t4(u) && t4_local_ok(u, settled))) {
                st_.lab.vertex_labels = saved_v;
                st_.lab.edge_labels = saved_e;
                search_t4(u, settled);
            }
            settled[u] = 1;
        }
    }

    // Flexible edges at a T4 vertex with their non-T4 endpoints.
    std::vector<std::pair<EdgeId, Vertex>> flex_at(Vertex u) const {
        std::vector<std::pair<EdgeId, Vertex>> out;
        for (const auto& f : st_.E41)
            if (g_.other(f.edge, f.v) == u) out.emplace_back(f.edge, f.v);
        for (const auto& f : st_.E42)
            for (EdgeId e : f.edges)
                if (g_.other(e, f.v) == u) out.emplace_back(e, f.v);
        return out;
    }

    // The rule as stated: one E4^2 flip, else one or two E4^1 flips.
    bool rule_t4(Vertex u) {
        for (auto& f : st_.E42)
            for (EdgeId e : f.edges) {
                if (g_.other(e, f.v) != u || st_.lab.edge_labels[e] != 2) continue;
                st_.lab.edge_labels[e] = 1;
                st_.hit(f.edges.size() == 2 ? "step18.e42_pair" : "step18.e42");
                st_.lab.vertex_labels[f.v] = 1;
                if (st_.pi(f.v) != 2) st_.lab.vertex_labels[f.v] = 2;
                return st_.pi(f.v) == 2 && st_.pi(u) == 3;
            }
        std::vector<const Flex41*> mine;
        for (const auto& f : st_.E41)
            if (g_.other(f.edge, f.v) == u) mine.push_back(&f);
        if (mine.empty()) return true;
        st_.hit(mine.size() == 1 ? "step18.e41" : "step18.e41_two");
        const std::size_t flips = std::min<std::size_t>(mine.size(), 2);
        for (std::size_t i = 0; i < flips; ++i) {
            st_.lab.edge_labels[mine[i]->edge] = 1;
            if (st_.pi(mine[i]->v) != 3) return false;
        }
        if (flips == 1) st_.lab.vertex_labels[u] = 2;
        return st_.pi(u) == (flips == 1 ? 4 : 2);
    }

    // Products the class of v admits.
    bool admissible(Vertex v, int p) const {
        if (st_.T[4][v] || st_.T[1][v] || st_.T[2][v]) return p >= 2 && p <= 4;
        if (st_.T[3][v]) return p == 2 || p == 4;
        if (st_.T[5][v]) return p == 4;
        if (st_.special[v] || bad_[v] >= 0) return p >= 2 && p <= 6;
        return st_.side[v] == 1 ? p >= 5 : (p == 2 || p == 3);
    }

    // Vertices still adjusted later, whose products are not yet binding.
    bool pending(Vertex w, const std::vector<char>& settled) const {
        if (st_.T[2][w]) return true;
        if (std::find(st_.deferred.begin(), st_.deferred.end(), w) != st_.deferred.end()) return true;
        return st_.T[4][w] && !settled[w];
    }

    bool t4_local_ok(Vertex u, const std::vector<char>& settled) const {
        std::vector<Vertex> touched{u};
        for (auto [e, v] : flex_at(u)) touched.push_back(v);
        for (Vertex x : touched) {
            const int p = st_.pi(x);
            if (!admissible(x, p)) return false;
            for (Vertex w : g_.neighbours(x))
                if (!pending(w, settled) && st_.pi(w) == p) return false;
        }
        return true;
    }

    // Exhaustive over: flips of the flexible edges at u, own label of u, own
    // labels of their other endpoints. Fewest changes first.
    void search_t4(Vertex u, const std::vector<char>& settled) {
        st_.hit("step18.search");
        auto flex = flex_at(u);
        std::vector<Vertex> partners;
        for (auto [e, v] : flex)
            if (std::find(partners.begin(), partners.end(), v) == partners.end()) partners.push_back(v);
        const int nf = static_cast<int>(flex.size()), np = static_cast<int>(partners.size());
        const int bits = nf + 1 + np;
        const auto saved_v = st_.lab.vertex_labels;
        const auto saved_e = st_.lab.edge_labels;
        std::vector<unsigned> masks(1u << bits);
        for (unsigned m = 0; m < masks.size(); ++m) masks[m] = m;
        std::stable_sort(masks.begin(), masks.end(),
                         [](unsigned a, unsigned b) { return __builtin_popcount(a) < __builtin_popcount(b); });
        for (unsigned m : masks) {
            st_.lab.vertex_labels = saved_v;
            st_.lab.edge_labels = saved_e;
            for (int i = 0; i < nf; ++i)
                if (m >> i & 1) st_.lab.edge_labels[flex[i].first] = 3 - st_.lab.edge_labels[flex[i].first];
            if (m >> nf & 1) st_.lab.vertex_labels[u] = 3 - st_.lab.vertex_labels[u];
            for (int i = 0; i < np; ++i)
                if (m >> (nf + 1 + i) & 1) st_.lab.vertex_labels[partners[i]] = 3 - st_.lab.vertex_labels[partners[i]];
            if (t4_local_ok(u, settled)) return;
        }
        st_.lab.vertex_labels = saved_v;
        st_.lab.edge_labels = saved_e;
        check(false, "step 18: no admissible choice at T4 vertex " + std::to_string(u));
    }

    void finalize() {
        st_.phase = "t2";
        for (auto [v, e] : st_.t2_flex) {
            bool placed = false;
            for (int f : {2, 1}) {
                for (int own : {1, 2}) {
                    if (e >= 0) st_.lab.edge_labels[e] = f;
                    else st_.mlab[v] = f;
                    st_.lab.vertex_labels[v] = own;
                    int p = st_.pi(v);
                    if (p < 2 || p > 4) continue;
                    bool clash = false;
                    for (Vertex w : g_.neighbours(v)) clash = clash || st_.pi(w) == p;
                    if (e >= 0) {
                        Vertex o = g_.other(e, v);
                        for (Vertex w : g_.neighbours(o)) clash = clash || (w != v && st_.pi(w) == st_.pi(o));
                    }
                    if (!clash) {
                        st_.hit(f == 1 ? "t2.flipped" : "t2.kept");
                        placed = true;
                        break;
                    }
                }
                if (placed) break;
            }
            check(placed, "T2 vertex " + std::to_string(v) + " has no admissible product");
        }
        st_.phase = "deferred";
        for (Vertex v : st_.deferred) {
            st_.hit("deferred");
            Vertex w = r_nbrs(v, 2).at(0);
            st_.reach(v, st_.pi(w) == 2 ? 3 : 2, "deferred isolated R1 vertex");
        }
        finish_xy(st_);
        // classes
        for (Vertex v = 0; v < g_.order(); ++v) {
            if (!st_.in_r(v)) continue;
            int p = st_.pi(v);
            check(p >= 2 && p <= 6, "R vertex outside 2^2..2^6");
            if (st_.T[1][v] || st_.T[2][v] || st_.T[4][v]) check(p >= 2 && p <= 4, "T1/T2/T4 class");
            else if (st_.T[3][v]) check(p == 2 || p == 4, "T3 class");
            else if (st_.T[5][v]) check(p == 4, "T5 class");
            else if (st_.special[v] || bad_[v] >= 0) continue;
            else if (st_.side[v] == 1) check(p == 5 || p == 6, "R1 intended class at vertex " + std::to_string(v));
            else check(p == 2 || p == 3, "R2 intended class at vertex " + std::to_string(v));
        }
        verify_product(st_);
    }

    AlgState& st_;
    const Graph& g_;
    ConstructOptions opt_;
    std::vector<EdgeId> bad_;  // bad edge through v at setup, or -1
    BadAdjacencyGraph gb_;
};

}  // namespace detail

inline TotalLabelling label_deg6_state(const Graph& g, AlgState& st, const ConstructOptions& opt = {}) {
    if (g.max_degree() > 6) throw PreconditionError("label_deg6 needs maximum degree at most 6");
    if (opt.dispatch && g.max_degree() <= 5) return label_deg5_state(g, st, opt);
    IndependentSetPair pair = build_XY(g);
    int restarts = 0;
    for (;;) {
        st.init(g, "deg6");
        st.pair = pair;
        st.restarts = restarts;
        detail::Deg6 run(st, opt);
        if (run.run()) return st.lab;
        pair = st.pair;
        restarts = st.restarts;
    }
}

inline TotalLabelling label_deg6(const Graph& g, const ConstructOptions& opt = {}) {
    AlgState st;
    return label_deg6_state(g, st, opt);
}

}  // namespace onetwo
