#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "onetwo/errors.hpp"
#include "onetwo/graph.hpp"

namespace onetwo {

// Bipartite graph on two disjoint lists of (host) vertex ids.
struct Bipartition {
    std::vector<Vertex> left;
    std::vector<Vertex> right;
    std::vector<std::pair<Vertex, Vertex>> edges;  // (left, right)
};

struct Matching {
    std::vector<std::pair<Vertex, Vertex>> pairs;  // (left, right), sorted by left id

    std::size_t size() const { return pairs.size(); }
};

// |left_set| > |neighbours|: no matching can saturate the left side.
struct HallViolation {
    std::vector<Vertex> left_set;
    std::vector<Vertex> neighbours;
};

namespace detail {

struct IndexedBipartite {
    std::vector<std::vector<int>> adj;  // left index -> right indices, ascending
    int nl = 0;
    int nr = 0;
};

inline IndexedBipartite index_bipartition(const Bipartition& b) {
    std::vector<Vertex> ls = b.left, rs = b.right;
    std::sort(ls.begin(), ls.end());
    std::sort(rs.begin(), rs.end());
    if (std::adjacent_find(ls.begin(), ls.end()) != ls.end() || std::adjacent_find(rs.begin(), rs.end()) != rs.end())
        throw ValidationError("bipartition lists a vertex twice");
    for (Vertex v : ls)
        if (std::binary_search(rs.begin(), rs.end(), v)) throw ValidationError("bipartition sides overlap");
    IndexedBipartite ib;
    ib.nl = static_cast<int>(b.left.size());
    ib.nr = static_cast<int>(b.right.size());
    ib.adj.assign(ib.nl, {});
    auto pos = [](const std::vector<Vertex>& side, Vertex v) {
        auto it = std::find(side.begin(), side.end(), v);
        return it == side.end() ? -1 : static_cast<int>(it - side.begin());
    };
    for (auto [l, r] : b.edges) {
        int i = pos(b.left, l), j = pos(b.right, r);
        if (i < 0 || j < 0) throw ValidationError("bipartition edge does not cross the sides");
        ib.adj[i].push_back(j);
    }
    for (auto& a : ib.adj) {
        std::sort(a.begin(), a.end());
        a.erase(std::unique(a.begin(), a.end()), a.end());
    }
    return ib;
}

// Augmenting-path matching; left vertices and their neighbours in list order.
inline std::vector<int> kuhn(const IndexedBipartite& ib, std::vector<int>& match_right) {
    std::vector<int> match_left(ib.nl, -1);
    match_right.assign(ib.nr, -1);
    std::vector<int> seen(ib.nr, -1);
    auto augment = [&](auto&& self, int u, int stamp) -> bool {
        for (int r : ib.adj[u]) {
            if (seen[r] == stamp) continue;
            seen[r] = stamp;
            if (match_right[r] < 0 || self(self, match_right[r], stamp)) {
                match_right[r] = u;
                match_left[u] = r;
                return true;
            }
        }
        return false;
    };
    for (int u = 0; u < ib.nl; ++u) augment(augment, u, u);
    return match_left;
}

inline Matching to_matching(const Bipartition& b, const std::vector<int>& match_left) {
    Matching m;
    for (std::size_t i = 0; i < match_left.size(); ++i)
        if (match_left[i] >= 0) m.pairs.emplace_back(b.left[i], b.right[match_left[i]]);
    std::sort(m.pairs.begin(), m.pairs.end());
    return m;
}

}  // namespace detail

inline Matching max_matching(const Bipartition& b) {
    auto ib = detail::index_bipartition(b);
    std::vector<int> mr;
    return detail::to_matching(b, detail::kuhn(ib, mr));
}

// A matching saturating the left side, or a set violating Hall's condition:
// the left vertices reachable by alternating paths from an unmatched one.
inline std::variant<Matching, HallViolation> saturating_matching(const Bipartition& b) {
    auto ib = detail::index_bipartition(b);
    std::vector<int> mr;
    auto ml = detail::kuhn(ib, mr);
    int root = -1;
    for (int u = 0; u < ib.nl && root < 0; ++u)
        if (ml[u] < 0) root = u;
    if (root < 0) return detail::to_matching(b, ml);
    std::vector<char> lseen(ib.nl, 0), rseen(ib.nr, 0);
    std::vector<int> stack{root};
    lseen[root] = 1;
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        for (int r : ib.adj[u]) {
            if (rseen[r]) continue;
            rseen[r] = 1;
            int w = mr[r];  // every reached right vertex is matched, else the matching was not maximum
            if (w >= 0 && !lseen[w]) {
                lseen[w] = 1;
                stack.push_back(w);
            }
        }
    }
    HallViolation hv;
    for (int u = 0; u < ib.nl; ++u)
        if (lseen[u]) hv.left_set.push_back(b.left[u]);
    for (int r = 0; r < ib.nr; ++r)
        if (rseen[r]) hv.neighbours.push_back(b.right[r]);
    std::sort(hv.left_set.begin(), hv.left_set.end());
    std::sort(hv.neighbours.begin(), hv.neighbours.end());
    if (hv.left_set.size() <= hv.neighbours.size()) throw InternalError("Hall witness is not violating");
    return hv;
}

// X maximal independent in the host, Y maximal independent in host - X.
// Everything else forms R.
struct IndependentSetPair {
    Graph host;
    std::vector<char> in_x;
    std::vector<char> in_y;
    int exchanges = 0;

    std::vector<Vertex> X() const { return collect(in_x); }
    std::vector<Vertex> Y() const { return collect(in_y); }
    std::vector<Vertex> R() const {
        std::vector<Vertex> r;
        for (Vertex v = 0; v < host.order(); ++v)
            if (!in_x[v] && !in_y[v]) r.push_back(v);
        return r;
    }
    bool in_r(Vertex v) const { return !in_x[v] && !in_y[v]; }

  private:
    static std::vector<Vertex> collect(const std::vector<char>& f) {
        std::vector<Vertex> s;
        for (Vertex v = 0; v < static_cast<Vertex>(f.size()); ++v)
            if (f[v]) s.push_back(v);
        return s;
    }
};

namespace detail {

// Adds, in id order, every vertex outside `blocked` with no neighbour in `set`.
inline void grow_maximal(const Graph& g, std::vector<char>& set, const std::vector<char>& blocked) {
    for (Vertex v = 0; v < g.order(); ++v) {
        if (set[v] || blocked[v]) continue;
        bool free = true;
        for (Vertex w : g.neighbours(v))
            if (set[w]) free = false;
        if (free) set[v] = 1;
    }
}

}  // namespace detail

inline IndependentSetPair build_XY(const Graph& g) {
    IndependentSetPair p;
    p.host = g;
    p.in_x.assign(g.order(), 0);
    p.in_y.assign(g.order(), 0);
    std::vector<char> none(g.order(), 0);
    detail::grow_maximal(g, p.in_x, none);
    detail::grow_maximal(g, p.in_y, p.in_x);
    return p;
}

// Mechanical check of the pair's invariants; empty string when they hold.
inline std::string check_pair(const IndependentSetPair& p) {
    const Graph& g = p.host;
    for (const auto& e : g.edges()) {
        if (p.in_x[e.u] && p.in_x[e.v]) return "X not independent";
        if (p.in_y[e.u] && p.in_y[e.v]) return "Y not independent";
    }
    for (Vertex v = 0; v < g.order(); ++v) {
        if (p.in_x[v] && p.in_y[v]) return "X and Y intersect";
        bool sees_x = false, sees_y = false;
        for (Vertex w : g.neighbours(v)) {
            sees_x = sees_x || p.in_x[w];
            sees_y = sees_y || p.in_y[w];
        }
        if (!p.in_x[v] && !sees_x) return "X not maximal at " + std::to_string(v);
        if (p.in_r(v) && !sees_y) return "Y not maximal at " + std::to_string(v);
    }
    return {};
}

struct HallCertificate {
    Matching matching;        // I -> Y, saturating I, when !restart
    bool restart = false;     // Y was enlarged; everything built on Y is stale
};

// Saturating matching from the independent set I (inside R) into Y. When Hall's
// condition fails for some I'' the exchange Y <- (Y \ N_Y(I'')) + I'' enlarges Y,
// Y is made maximal again and the caller must start over.
inline HallCertificate certify_hall(IndependentSetPair& p, const std::vector<Vertex>& I) {
    const Graph& g = p.host;
    for (Vertex v : I) {
        if (v < 0 || v >= g.order() || !p.in_r(v)) throw PreconditionError("certify_hall: I must lie in R");
        for (Vertex w : g.neighbours(v))
            if (std::find(I.begin(), I.end(), w) != I.end()) throw PreconditionError("certify_hall: I not independent");
    }
    Bipartition b;
    b.left = I;
    std::sort(b.left.begin(), b.left.end());
    std::vector<char> in_right(g.order(), 0);
    for (Vertex v : b.left)
        for (Vertex w : g.neighbours(v))
            if (p.in_y[w]) {
                b.edges.emplace_back(v, w);
                if (!in_right[w]) {
                    in_right[w] = 1;
                    b.right.push_back(w);
                }
            }
    std::sort(b.right.begin(), b.right.end());
    auto r = saturating_matching(b);
    if (auto* m = std::get_if<Matching>(&r)) return {*m, false};
    const auto& hv = std::get<HallViolation>(r);
    const auto before = p.Y().size();
    for (Vertex y : hv.neighbours) p.in_y[y] = 0;
    for (Vertex v : hv.left_set) p.in_y[v] = 1;
    detail::grow_maximal(g, p.in_y, p.in_x);
    if (p.Y().size() <= before) throw InternalError("Hall exchange did not enlarge Y");
    if (++p.exchanges > g.order()) throw InternalError("more Hall exchanges than vertices");
    if (auto why = check_pair(p); !why.empty()) throw InternalError("after Hall exchange: " + why);
    return {{}, true};
}

}  // namespace onetwo
