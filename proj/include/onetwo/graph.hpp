#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "onetwo/errors.hpp"

namespace onetwo {

using Vertex = int;
using EdgeId = int;

struct Edge {
    Vertex u = 0;
    Vertex v = 0;

    friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Immutable simple undirected graph on vertices 0..n-1. Edges are stored with
// u < v, sorted lexicographically; an edge's id is its index in that order.
class Graph {
  public:
    Graph() = default;
    explicit Graph(int n) : Graph(n, {}) {}

    Graph(int n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
        if (n < 0) throw ValidationError("negative vertex count");
        for (auto& e : edges_) {
            if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n)
                throw ValidationError("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                                      ") out of range for n=" + std::to_string(n));
            if (e.u == e.v) throw ValidationError("self-loop at vertex " + std::to_string(e.u));
            if (e.u > e.v) std::swap(e.u, e.v);
        }
        std::sort(edges_.begin(), edges_.end());
        for (std::size_t i = 1; i < edges_.size(); ++i)
            if (edges_[i] == edges_[i - 1])
                throw ValidationError("duplicate edge (" + std::to_string(edges_[i].u) + "," +
                                      std::to_string(edges_[i].v) + ")");
        adj_.assign(n_, {});
        inc_.assign(n_, {});
        for (EdgeId id = 0; id < static_cast<EdgeId>(edges_.size()); ++id) {
            adj_[edges_[id].u].push_back(edges_[id].v);
            adj_[edges_[id].v].push_back(edges_[id].u);
        }
        for (Vertex v = 0; v < n_; ++v) {
            std::sort(adj_[v].begin(), adj_[v].end());
            inc_[v].reserve(adj_[v].size());
        }
        for (Vertex v = 0; v < n_; ++v)
            for (Vertex w : adj_[v]) inc_[v].push_back(find_edge(v, w));
    }

    int order() const { return n_; }
    int size() const { return static_cast<int>(edges_.size()); }
    const std::vector<Edge>& edges() const { return edges_; }
    const Edge& edge(EdgeId id) const { return edges_.at(id); }

    const std::vector<Vertex>& neighbours(Vertex v) const { return adj_.at(v); }
    // Edge ids parallel to neighbours(v).
    const std::vector<EdgeId>& incident(Vertex v) const { return inc_.at(v); }
    int degree(Vertex v) const { return static_cast<int>(adj_.at(v).size()); }

    int max_degree() const {
        int d = 0;
        for (const auto& a : adj_) d = std::max(d, static_cast<int>(a.size()));
        return d;
    }

    int min_degree() const {
        if (n_ == 0) return 0;
        int d = n_;
        for (const auto& a : adj_) d = std::min(d, static_cast<int>(a.size()));
        return d;
    }

    bool adjacent(Vertex u, Vertex v) const {
        const auto& a = adj_.at(u);
        return std::binary_search(a.begin(), a.end(), v);
    }

    // -1 when u and v are not adjacent.
    EdgeId edge_id(Vertex u, Vertex v) const {
        const auto& a = adj_.at(u);
        auto it = std::lower_bound(a.begin(), a.end(), v);
        if (it == a.end() || *it != v) return -1;
        return inc_[u][static_cast<std::size_t>(it - a.begin())];
    }

    Vertex other(EdgeId id, Vertex v) const {
        const auto& e = edges_.at(id);
        return e.u == v ? e.v : e.u;
    }

    friend bool operator==(const Graph& a, const Graph& b) {
        return a.n_ == b.n_ && a.edges_ == b.edges_;
    }

  private:
    EdgeId find_edge(Vertex u, Vertex v) const {
        Edge key{std::min(u, v), std::max(u, v)};
        auto it = std::lower_bound(edges_.begin(), edges_.end(), key);
        return static_cast<EdgeId>(it - edges_.begin());
    }

    int n_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::vector<Vertex>> adj_;
    std::vector<std::vector<EdgeId>> inc_;
};

// A derived graph together with the correspondence to its parent's vertex ids.
struct Subgraph {
    Graph graph;
    std::vector<Vertex> to_parent;    // new id -> parent id
    std::vector<Vertex> from_parent;  // parent id -> new id, or -1
};

inline Subgraph induced(const Graph& g, const std::vector<Vertex>& vertices) {
    Subgraph s;
    s.from_parent.assign(g.order(), -1);
    for (Vertex v : vertices) {
        if (v < 0 || v >= g.order()) throw ValidationError("vertex " + std::to_string(v) + " out of range");
        if (s.from_parent[v] != -1) throw ValidationError("vertex " + std::to_string(v) + " listed twice");
        s.from_parent[v] = static_cast<Vertex>(s.to_parent.size());
        s.to_parent.push_back(v);
    }
    std::vector<Edge> edges;
    for (const auto& e : g.edges())
        if (s.from_parent[e.u] != -1 && s.from_parent[e.v] != -1)
            edges.push_back({s.from_parent[e.u], s.from_parent[e.v]});
    s.graph = Graph(static_cast<int>(s.to_parent.size()), std::move(edges));
    return s;
}

// Same vertex set, without the listed edges.
inline Graph remove_edges(const Graph& g, const std::vector<EdgeId>& drop) {
    std::vector<char> gone(g.size(), 0);
    for (EdgeId id : drop) gone.at(id) = 1;
    std::vector<Edge> kept;
    for (EdgeId id = 0; id < g.size(); ++id)
        if (!gone[id]) kept.push_back(g.edge(id));
    return Graph(g.order(), std::move(kept));
}

// Connected components, each sorted, ordered by smallest member.
inline std::vector<std::vector<Vertex>> components(const Graph& g) {
    std::vector<std::vector<Vertex>> out;
    std::vector<char> seen(g.order(), 0);
    for (Vertex s = 0; s < g.order(); ++s) {
        if (seen[s]) continue;
        std::vector<Vertex> comp;
        std::queue<Vertex> q;
        q.push(s);
        seen[s] = 1;
        while (!q.empty()) {
            Vertex v = q.front();
            q.pop();
            comp.push_back(v);
            for (Vertex w : g.neighbours(v))
                if (!seen[w]) {
                    seen[w] = 1;
                    q.push(w);
                }
        }
        std::sort(comp.begin(), comp.end());
        out.push_back(std::move(comp));
    }
    return out;
}

inline bool is_connected(const Graph& g) { return g.order() <= 1 || components(g).size() == 1; }

// Connected and 2-regular.
inline bool is_cycle(const Graph& g) {
    if (g.order() < 3) return false;
    for (Vertex v = 0; v < g.order(); ++v)
        if (g.degree(v) != 2) return false;
    return is_connected(g);
}

inline bool is_independent(const Graph& g, const std::vector<Vertex>& s) {
    std::vector<char> in(g.order(), 0);
    for (Vertex v : s) in.at(v) = 1;
    for (const auto& e : g.edges())
        if (in[e.u] && in[e.v]) return false;
    return true;
}

namespace graphs {

inline Graph complete(int n) {
    std::vector<Edge> e;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) e.push_back({i, j});
    return Graph(n, std::move(e));
}

inline Graph path(int n) {
    std::vector<Edge> e;
    for (int i = 0; i + 1 < n; ++i) e.push_back({i, i + 1});
    return Graph(n, std::move(e));
}

inline Graph cycle(int n) {
    if (n < 3) throw PreconditionError("cycle needs at least 3 vertices");
    std::vector<Edge> e;
    for (int i = 0; i < n; ++i) e.push_back({i, (i + 1) % n});
    return Graph(n, std::move(e));
}

inline Graph star(int leaves) {
    std::vector<Edge> e;
    for (int i = 1; i <= leaves; ++i) e.push_back({0, i});
    return Graph(leaves + 1, std::move(e));
}

inline Graph complete_bipartite(int a, int b) {
    std::vector<Edge> e;
    for (int i = 0; i < a; ++i)
        for (int j = 0; j < b; ++j) e.push_back({i, a + j});
    return Graph(a + b, std::move(e));
}

inline Graph petersen() {
    std::vector<Edge> e;
    for (int i = 0; i < 5; ++i) {
        e.push_back({i, (i + 1) % 5});
        e.push_back({i, i + 5});
        e.push_back({5 + i, 5 + (i + 2) % 5});
    }
    return Graph(10, std::move(e));
}

// Circulant graph C_n(offsets).
inline Graph circulant(int n, const std::vector<int>& offsets) {
    std::vector<Edge> e;
    for (int i = 0; i < n; ++i)
        for (int d : offsets) {
            int j = (i + d) % n;
            Edge x{std::min(i, j), std::max(i, j)};
            if (x.u != x.v && std::find(e.begin(), e.end(), x) == e.end()) e.push_back(x);
        }
    return Graph(n, std::move(e));
}

inline Graph disjoint_union(const Graph& a, const Graph& b) {
    std::vector<Edge> e = a.edges();
    for (const auto& x : b.edges()) e.push_back({x.u + a.order(), x.v + a.order()});
    return Graph(a.order() + b.order(), std::move(e));
}

}  // namespace graphs

}  // namespace onetwo
