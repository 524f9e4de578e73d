#pragma once

#include <array>
#include <string>
#include <tuple>
#include <vector>

#include "onetwo/errors.hpp"
#include "onetwo/graph.hpp"

namespace onetwo {

// Bipartition (V1, V2) of a graph with per-vertex side degrees kept current.
class Cut {
  public:
    Cut() = default;
    // side[v] is 1 or 2.
    Cut(Graph g, std::vector<int> side) : g_(std::move(g)), side_(std::move(side)) {
        if (static_cast<int>(side_.size()) != g_.order()) throw ValidationError("cut side table has wrong length");
        for (int s : side_)
            if (s != 1 && s != 2) throw ValidationError("cut sides are 1 and 2");
        rebuild();
    }

    const Graph& host() const { return g_; }
    int side(Vertex v) const { return side_.at(v); }
    bool in_v1(Vertex v) const { return side_.at(v) == 1; }
    const std::vector<int>& sides() const { return side_; }

    int weight() const { return weight_; }
    int d1(Vertex v) const { return d_[v][0]; }  // neighbours in V1
    int d2(Vertex v) const { return d_[v][1]; }  // neighbours in V2
    int same(Vertex v) const { return d_[v][side_[v] - 1]; }
    int cross(Vertex v) const { return d_[v][2 - side_[v]]; }
    bool crossing(EdgeId e) const { return side_[g_.edge(e).u] != side_[g_.edge(e).v]; }

    std::vector<Vertex> part(int s) const {
        std::vector<Vertex> out;
        for (Vertex v = 0; v < g_.order(); ++v)
            if (side_[v] == s) out.push_back(v);
        return out;
    }

    void move(Vertex v) {
        const int from = side_[v], to = 3 - from;
        weight_ += same(v) - cross(v);
        for (Vertex w : g_.neighbours(v)) {
            --d_[w][from - 1];
            ++d_[w][to - 1];
        }
        side_[v] = to;
    }

  private:
    void rebuild() {
        d_.assign(g_.order(), {0, 0});
        weight_ = 0;
        for (const auto& e : g_.edges()) {
            ++d_[e.u][side_[e.v] - 1];
            ++d_[e.v][side_[e.u] - 1];
            weight_ += side_[e.u] != side_[e.v];
        }
    }

    Graph g_;
    std::vector<int> side_;
    std::vector<std::array<int, 2>> d_;
    int weight_ = 0;
};

struct BadEdgeSet {
    std::vector<EdgeId> bad1;  // inside V1
    std::vector<EdgeId> bad2;  // inside V2
};

inline bool is_bad(const Cut& c, EdgeId id) {
    const Edge& e = c.host().edge(id);
    if (c.side(e.u) != c.side(e.v)) return false;
    if (c.in_v1(e.u))
        return c.d1(e.u) == 1 && c.d1(e.v) == 1 && c.d2(e.u) == 2 && c.d2(e.v) == 2;
    return c.d2(e.u) == 1 && c.d2(e.v) == 1 && c.d1(e.u) == 3 && c.d1(e.v) == 3;
}

inline BadEdgeSet bad_edges(const Cut& c) {
    BadEdgeSet b;
    for (EdgeId id = 0; id < c.host().size(); ++id)
        if (is_bad(c, id)) (c.in_v1(c.host().edge(id).u) ? b.bad1 : b.bad2).push_back(id);
    return b;
}

enum class CutLevel { Deg3, Deg4 };

struct CutReport {
    bool ok = true;
    std::vector<std::string> violations;  // each starts with "item N"

    explicit operator bool() const { return ok; }
};

inline CutReport verify_cut_contract(const Cut& c, CutLevel level) {
    CutReport r;
    const Graph& g = c.host();
    auto fail = [&](std::string s) {
        r.ok = false;
        r.violations.push_back(std::move(s));
    };
    auto vs = [](Vertex v) { return std::to_string(v); };
    for (Vertex v = 0; v < g.order(); ++v)
        if (c.cross(v) < c.same(v)) fail("item 0: moving vertex " + vs(v) + " enlarges the cut");
    if (level == CutLevel::Deg3) {
        for (Vertex v = 0; v < g.order(); ++v)
            if (c.same(v) > 1) fail("item 1: vertex " + vs(v) + " has " + std::to_string(c.same(v)) + " same-side neighbours");
        for (const auto& e : g.edges()) {
            if (c.side(e.u) != c.side(e.v)) continue;
            for (Vertex x : {e.u, e.v}) {
                if (g.degree(x) < 2) fail("item 2: induced edge endpoint " + vs(x) + " has degree " + std::to_string(g.degree(x)));
                if (c.in_v1(x) && g.degree(x) != 3) fail("item 3: V1 edge endpoint " + vs(x) + " has degree " + std::to_string(g.degree(x)));
            }
        }
        return r;
    }
    for (Vertex v = 0; v < g.order(); ++v) {
        if (c.in_v1(v) && c.d1(v) > 2) fail("item 1: V1 vertex " + vs(v) + " has V1-degree " + std::to_string(c.d1(v)));
        if (!c.in_v1(v) && c.d2(v) > 1) fail("item 1: V2 vertex " + vs(v) + " has V2-degree " + std::to_string(c.d2(v)));
        if (c.in_v1(v) && c.d1(v) == 2 && g.degree(v) != 4) fail("item 2: V1 vertex " + vs(v) + " of V1-degree 2 has degree " + std::to_string(g.degree(v)));
        if (c.in_v1(v) && c.d1(v) == 1 && g.degree(v) < 3) fail("item 3: V1 vertex " + vs(v) + " of V1-degree 1 has degree " + std::to_string(g.degree(v)));
    }
    std::vector<int> bad_of(g.order(), -1);  // id of the bad edge containing v
    auto bad = bad_edges(c);
    for (auto* list : {&bad.bad1, &bad.bad2})
        for (EdgeId id : *list) bad_of[g.edge(id).u] = bad_of[g.edge(id).v] = id;
    for (EdgeId id : bad.bad2)
        for (Vertex u : {g.edge(id).u, g.edge(id).v}) {
            std::vector<int> seen;
            for (Vertex w : g.neighbours(u))
                if (c.in_v1(w) && bad_of[w] >= 0 && std::find(seen.begin(), seen.end(), bad_of[w]) == seen.end())
                    seen.push_back(bad_of[w]);
            if (seen.size() >= 2) fail("item 4: V2 bad-edge vertex " + vs(u) + " sees two distinct V1 bad edges");
        }
    return r;
}

namespace detail {

inline Cut greedy_cut(const Graph& g) {
    std::vector<int> side(g.order(), 0);
    for (Vertex v = 0; v < g.order(); ++v) {
        int a = 0, b = 0;
        for (Vertex w : g.neighbours(v)) {
            a += side[w] == 1;
            b += side[w] == 2;
        }
        side[v] = a < b ? 1 : 2;
    }
    return Cut(g, std::move(side));
}

inline long long iteration_cap(const Graph& g) {
    long long n1 = g.order() + 1;
    return 10LL * std::max(g.size(), 1) * n1 * n1;
}

}  // namespace detail

// Local search closed under single-vertex moves; potential (weight, -|V1|).
inline Cut stable_cut_deg3(const Graph& g) {
    if (g.max_degree() > 3) throw PreconditionError("stable_cut_deg3 needs maximum degree at most 3");
    Cut c = detail::greedy_cut(g);
    const long long cap = detail::iteration_cap(g);
    long long steps = 0;
    for (bool moved = true; moved;) {
        moved = false;
        for (Vertex v = 0; v < g.order() && !moved; ++v) {
            if (c.cross(v) < c.same(v) || (c.in_v1(v) && c.cross(v) == c.same(v))) {
                c.move(v);
                moved = true;
            }
        }
        if (moved && ++steps > cap) throw InternalError("stable_cut_deg3 exceeded its iteration cap");
    }
    return c;
}

namespace detail {

// (weight, -#V2 vertices of V2-degree >= 2, -#V1 vertices of degree 2, -#bad edges)
using Potential41 = std::tuple<int, int, int, int>;

inline Potential41 potential41(const Cut& c) {
    const Graph& g = c.host();
    int v2_heavy = 0, v1_deg2 = 0;
    for (Vertex v = 0; v < g.order(); ++v) {
        if (!c.in_v1(v) && c.d2(v) >= 2) ++v2_heavy;
        if (c.in_v1(v) && g.degree(v) == 2) ++v1_deg2;
    }
    auto b = bad_edges(c);
    return {c.weight(), -v2_heavy, -v1_deg2, -static_cast<int>(b.bad1.size() + b.bad2.size())};
}

// Applies the moves, keeps them if the potential strictly rises.
inline bool try_moves(Cut& c, const std::vector<Vertex>& vs, const Potential41& before) {
    for (Vertex v : vs) c.move(v);
    if (potential41(c) > before) return true;
    for (auto it = vs.rbegin(); it != vs.rend(); ++it) c.move(*it);
    return false;
}

inline bool improve41(Cut& c) {
    const Graph& g = c.host();
    const auto pot = potential41(c);
    // single moves
    for (Vertex v = 0; v < g.order(); ++v) {
        if (c.cross(v) > c.same(v)) continue;
        if (try_moves(c, {v}, pot)) return true;
    }
    // V1 vertex of degree 2 with one neighbour on each side, swapped with its V2 neighbour
    for (Vertex v = 0; v < g.order(); ++v) {
        if (!c.in_v1(v) || g.degree(v) != 2 || c.d1(v) != 1) continue;
        for (Vertex w : g.neighbours(v))
            if (!c.in_v1(w) && try_moves(c, {v, w}, pot)) return true;
    }
    // V2 bad edge endpoint u1 seeing two distinct V1 bad edges through v1, v1'
    auto bad = bad_edges(c);
    std::vector<int> bad_of(g.order(), -1);
    for (EdgeId id : bad.bad1) bad_of[g.edge(id).u] = bad_of[g.edge(id).v] = id;
    for (EdgeId id : bad.bad2)
        for (Vertex u1 : {g.edge(id).u, g.edge(id).v}) {
            const auto& nb = g.neighbours(u1);
            for (std::size_t i = 0; i < nb.size(); ++i)
                for (std::size_t j = i + 1; j < nb.size(); ++j) {
                    Vertex a = nb[i], b = nb[j];
                    if (bad_of[a] < 0 || bad_of[b] < 0 || bad_of[a] == bad_of[b]) continue;
                    std::vector<Vertex> seq{a, b, u1};
                    for (Vertex x : seq) c.move(x);
                    // follow-up: V2 vertices that became V2-degree 2 go to V1
                    for (Vertex x : {a, b})
                        for (Vertex w : g.neighbours(x))
                            if (!c.in_v1(w) && c.d2(w) >= 2) {
                                c.move(w);
                                seq.push_back(w);
                            }
                    if (potential41(c) > pot) return true;
                    for (auto it = seq.rbegin(); it != seq.rend(); ++it) c.move(*it);
                }
        }
    return false;
}

}  // namespace detail

// Local search closed under single moves, the degree-2 pair swap and the
// bad-edge triple move; each accepted move strictly raises potential41.
// An explicit start partition replaces the greedy one.
inline Cut stable_cut_deg4(const Graph& g, const std::vector<int>& start = {}) {
    if (g.max_degree() > 4) throw PreconditionError("stable_cut_deg4 needs maximum degree at most 4");
    Cut c = start.empty() ? detail::greedy_cut(g) : Cut(g, start);
    const long long cap = detail::iteration_cap(g);
    long long steps = 0;
    while (detail::improve41(c))
        if (++steps > cap) throw InternalError("stable_cut_deg4 exceeded its iteration cap");
    return c;
}

}  // namespace onetwo
