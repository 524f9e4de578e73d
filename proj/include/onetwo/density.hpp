#pragma once

#include <cstdint>
#include <limits>
#include <queue>
#include <vector>

#include "onetwo/errors.hpp"
#include "onetwo/graph.hpp"
#include "onetwo/rational.hpp"

namespace onetwo {

namespace detail {

class Dinic {
  public:
    explicit Dinic(int n) : head_(n, -1), level_(n), it_(n) {}

    void add_edge(int a, int b, std::int64_t cap) {
        arcs_.push_back({b, head_[a], cap});
        head_[a] = static_cast<int>(arcs_.size()) - 1;
        arcs_.push_back({a, head_[b], 0});
        head_[b] = static_cast<int>(arcs_.size()) - 1;
    }

    std::int64_t max_flow(int s, int t) {
        std::int64_t flow = 0;
        while (bfs(s, t)) {
            it_ = head_;
            while (std::int64_t f = dfs(s, t, std::numeric_limits<std::int64_t>::max())) flow += f;
        }
        return flow;
    }

  private:
    struct Arc {
        int to;
        int next;
        std::int64_t cap;
    };

    bool bfs(int s, int t) {
        std::fill(level_.begin(), level_.end(), -1);
        std::queue<int> q;
        level_[s] = 0;
        q.push(s);
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            for (int a = head_[v]; a != -1; a = arcs_[a].next)
                if (arcs_[a].cap > 0 && level_[arcs_[a].to] < 0) {
                    level_[arcs_[a].to] = level_[v] + 1;
                    q.push(arcs_[a].to);
                }
        }
        return level_[t] >= 0;
    }

    std::int64_t dfs(int v, int t, std::int64_t pushed) {
        if (v == t) return pushed;
        for (int& a = it_[v]; a != -1; a = arcs_[a].next) {
            auto& arc = arcs_[a];
            if (arc.cap <= 0 || level_[arc.to] != level_[v] + 1) continue;
            if (std::int64_t d = dfs(arc.to, t, std::min(pushed, arc.cap))) {
                arc.cap -= d;
                arcs_[a ^ 1].cap += d;
                return d;
            }
        }
        return 0;
    }

    std::vector<int> head_;
    std::vector<int> level_;
    std::vector<int> it_;
    std::vector<Arc> arcs_;
};

}  // namespace detail

// True iff some non-empty subgraph H has |E(H)|/|V(H)| > p/q (p >= 0, q > 0).
// Edge-vertex closure network: source -> edge (q), edge -> endpoints (inf),
// vertex -> sink (p). The min cut falls below q|E| exactly when such H exists.
inline bool has_denser_subgraph(const Graph& g, std::int64_t p, std::int64_t q) {
    const int m = g.size();
    const int n = g.order();
    if (m == 0) return false;
    const int s = m + n;
    const int t = s + 1;
    detail::Dinic net(m + n + 2);
    constexpr auto inf = std::numeric_limits<std::int64_t>::max() / 4;
    for (EdgeId e = 0; e < m; ++e) {
        net.add_edge(s, e, q);
        net.add_edge(e, m + g.edge(e).u, inf);
        net.add_edge(e, m + g.edge(e).v, inf);
    }
    for (Vertex v = 0; v < n; ++v) net.add_edge(m + v, t, p);
    return net.max_flow(s, t) < q * static_cast<std::int64_t>(m);
}

inline bool has_denser_subgraph(const Graph& g, const Rational& r) {
    if (r.num() < 0) return g.order() > 0;
    return has_denser_subgraph(g, r.num(), r.den());
}

// Maximum of |E(H)|/|V(H)| over non-empty subgraphs H.
inline Rational max_density(const Graph& g) {
    const std::int64_t n = g.order();
    if (n == 0) throw PreconditionError("maximum density of the empty graph is undefined");
    if (g.size() == 0) return Rational(0);
    // Distinct candidate values a/b with b <= n differ by more than 1/n^2, so
    // once hi - lo <= 1/n^2 the interval (lo, hi] holds exactly one of them.
    // Search over a/D with D = n^2 to keep every intermediate integral.
    const std::int64_t D = n * n;
    std::int64_t a = 0, b = static_cast<std::int64_t>(g.size()) * D;
    while (b - a > 1) {
        std::int64_t mid = a + (b - a) / 2;
        if (has_denser_subgraph(g, mid, D))
            a = mid;
        else
            b = mid;
    }
    const Rational lo(a, D), hi(b, D);
    for (std::int64_t b = 1; b <= n; ++b) {
        // largest a with a/b <= hi
        std::int64_t a = static_cast<std::int64_t>((static_cast<__int128>(hi.num()) * b) / hi.den());
        Rational c(a, b);
        if (c > lo) return c;
    }
    throw InternalError("max_density: no candidate in the final interval");
}

inline Rational mad(const Graph& g) { return Rational(2) * max_density(g); }

// mad(g) <= bound, decided with a single flow.
inline bool mad_at_most(const Graph& g, const Rational& bound) {
    return !has_denser_subgraph(g, bound / Rational(2));
}

}  // namespace onetwo
