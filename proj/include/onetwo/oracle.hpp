#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "onetwo/density.hpp"
#include "onetwo/errors.hpp"
#include "onetwo/graph.hpp"
#include "onetwo/labelling.hpp"
#include "onetwo/rational.hpp"

namespace onetwo {

struct OracleOptions {
    int max_elements = 26;                  // n + m
    long long max_nodes = 400'000'000;      // search-tree nodes before giving up
};

// No labelling exists within the requested label bound.
class NotFoundError : public Error {
  public:
    using Error::Error;
};

namespace detail {

class ProperSearch {
  public:
    ProperSearch(const Graph& g, int k, Metric m, const OracleOptions& opt)
        : g_(g), k_(k), m_(m), opt_(opt), counts_(g.order(), std::vector<int>(k + 1, 0)),
          open_(g.order(), 0), key_(g.order(), 0), l_(g, k, 1) {
        for (Vertex v = 0; v < g.order(); ++v) open_[v] = g.degree(v) + 1;
        primes_ = primes_up_to(std::max(k, 2));
    }

    std::optional<TotalLabelling> run() {
        if (assign(0)) return l_;
        return std::nullopt;
    }

  private:
    // Packed comparison key; counts never exceed 255 within the element budget.
    std::int64_t key_of(Vertex v) const {
        const auto& c = counts_[v];
        std::int64_t key = 0;
        switch (m_) {
            case Metric::Sum:
                for (int x = 1; x <= k_; ++x) key += static_cast<std::int64_t>(x) * c[x];
                break;
            case Metric::Multiset:
                for (int x = 1; x <= k_; ++x) key = key * 256 + c[x];
                break;
            case Metric::Product:
                for (int p : primes_) {
                    std::int64_t e = 0;
                    for (int x = 2; x <= k_; ++x)
                        for (int y = x; y % p == 0; y /= p) e += c[x];
                    key = key * 4096 + e;
                }
                break;
        }
        return key;
    }

    // Marks one more element of v as decided; false if v just became decided
    // and clashes with an already decided neighbour.
    bool close(Vertex v) {
        if (--open_[v] != 0) return true;
        key_[v] = key_of(v);
        for (Vertex w : g_.neighbours(v))
            if (open_[w] == 0 && key_[w] == key_[v]) return false;
        return true;
    }

    void reopen(Vertex v) { ++open_[v]; }

    bool assign(int pos) {
        if (++nodes_ > opt_.max_nodes)
            throw ResourceError("oracle search exceeded " + std::to_string(opt_.max_nodes) + " nodes");
        const int m = g_.size();
        if (pos == m + g_.order()) return true;
        if (pos < m) {
            const Edge& e = g_.edge(pos);
            for (int x = 1; x <= k_; ++x) {
                l_.edge_labels[pos] = x;
                ++counts_[e.u][x];
                ++counts_[e.v][x];
                bool ok = close(e.u);
                ok = close(e.v) && ok;
                if (ok && assign(pos + 1)) return true;
                reopen(e.u);
                reopen(e.v);
                --counts_[e.u][x];
                --counts_[e.v][x];
            }
            return false;
        }
        Vertex v = pos - m;
        for (int x = 1; x <= k_; ++x) {
            l_.vertex_labels[v] = x;
            ++counts_[v][x];
            if (close(v) && assign(pos + 1)) return true;
            reopen(v);
            --counts_[v][x];
        }
        return false;
    }

    const Graph& g_;
    int k_;
    Metric m_;
    OracleOptions opt_;
    std::vector<std::vector<int>> counts_;
    std::vector<int> open_;
    std::vector<std::int64_t> key_;
    std::vector<int> primes_;
    TotalLabelling l_;
    long long nodes_ = 0;
};

}  // namespace detail

// Exhaustive backtracking: edges in id order, then vertices; a branch dies as
// soon as two adjacent fully labelled vertices share a value.
inline std::optional<TotalLabelling> find_proper(const Graph& g, int k, Metric m, const OracleOptions& opt = {}) {
    if (k < 1) throw PreconditionError("label bound must be at least 1");
    if (g.order() + g.size() > opt.max_elements)
        throw ResourceError("graph has " + std::to_string(g.order() + g.size()) + " elements, oracle budget is " +
                            std::to_string(opt.max_elements));
    auto l = detail::ProperSearch(g, k, m, opt).run();
    if (l && !is_proper(g, *l, m)) throw InternalError("oracle returned an improper witness");
    return l;
}

struct ChiResult {
    Metric metric = Metric::Sum;
    int chi = 0;
    TotalLabelling witness;
};

inline ChiResult chi_total(const Graph& g, Metric m, int k_max = 3, const OracleOptions& opt = {}) {
    for (int k = 1; k <= k_max; ++k)
        if (auto l = find_proper(g, k, m, opt)) return {m, k, std::move(*l)};
    throw NotFoundError("no " + to_string(m) + "-proper total labelling with labels up to " + std::to_string(k_max) +
                        (k_max >= 3 ? " (contradicts the known bound of 3)" : ""));
}

// ---------------------------------------------------------------------------
// Isomorphism classes of small graphs

namespace detail {

// Adjacency bit-string in graph6 order under the best relabelling. Columns are
// fixed left to right; at each column only partial orders reaching the least
// column value survive, which yields the exact minimum over all n! orders.
struct Canonical {
    std::uint64_t code = 0;
    std::vector<Vertex> order;  // order[i] = original vertex placed at position i
};

inline Canonical canonical_form(const Graph& g) {
    const int n = g.order();
    if (n > 11) throw ResourceError("canonical form limited to 11 vertices");
    std::vector<std::uint32_t> adj(n, 0);
    for (const auto& e : g.edges()) {
        adj[e.u] |= 1u << e.v;
        adj[e.v] |= 1u << e.u;
    }
    struct Partial {
        std::vector<Vertex> order;
        std::uint32_t used;
    };
    std::vector<Partial> level;
    level.push_back({{}, 0});
    std::uint64_t code = 0;
    for (int p = 0; p < n; ++p) {
        std::uint32_t best = ~0u;
        std::vector<Partial> next;
        for (const auto& s : level)
            for (Vertex v = 0; v < n; ++v) {
                if (s.used >> v & 1u) continue;
                std::uint32_t col = 0;
                for (int i = 0; i < p; ++i) col = (col << 1) | (adj[v] >> s.order[i] & 1u);
                if (col > best) continue;
                if (col < best) {
                    best = col;
                    next.clear();
                }
                Partial t{s.order, s.used | (1u << v)};
                t.order.push_back(v);
                next.push_back(std::move(t));
            }
        if (p > 0) code = (code << p) | best;
        level = std::move(next);
    }
    return {code, level.empty() ? std::vector<Vertex>{} : level.front().order};
}

inline Graph relabel(const Graph& g, const std::vector<Vertex>& order) {
    std::vector<Vertex> pos(g.order());
    for (int i = 0; i < g.order(); ++i) pos[order[i]] = i;
    std::vector<Edge> e;
    for (const auto& x : g.edges()) e.push_back({pos[x.u], pos[x.v]});
    return Graph(g.order(), std::move(e));
}

}  // namespace detail

inline std::uint64_t canonical_code(const Graph& g) { return detail::canonical_form(g).code; }

inline Graph canonical_graph(const Graph& g) { return detail::relabel(g, detail::canonical_form(g).order); }

// One canonical representative per isomorphism class on n vertices, ordered by
// canonical code. Built by adding a vertex with every possible neighbourhood to
// each class on n-1 vertices.
inline std::vector<Graph> enumerate_graphs(int n, bool connected_only) {
    if (n < 0) throw PreconditionError("negative vertex count");
    if (n > 8) throw ResourceError("enumeration is limited to n <= 8");
    static std::map<int, std::vector<Graph>> cache;  // guarded by the caller being single-threaded
    std::vector<Graph> all;
    if (auto it = cache.find(n); it != cache.end()) {
        all = it->second;
    } else if (n == 0) {
        all = {Graph(0)};
    } else {
        auto prev = enumerate_graphs(n - 1, false);
        std::map<std::uint64_t, Graph> reps;
        for (const auto& h : prev)
            for (std::uint32_t s = 0; s < (1u << (n - 1)); ++s) {
                std::vector<Edge> e = h.edges();
                for (int i = 0; i < n - 1; ++i)
                    if (s >> i & 1u) e.push_back({i, n - 1});
                Graph cand(n, std::move(e));
                auto c = detail::canonical_form(cand);
                if (!reps.count(c.code)) reps.emplace(c.code, detail::relabel(cand, c.order));
            }
        for (auto& [code, g] : reps) all.push_back(std::move(g));
    }
    cache.emplace(n, all);
    if (!connected_only) return all;
    std::vector<Graph> out;
    for (auto& g : all)
        if (is_connected(g) && g.order() > 0) out.push_back(g);
    return out;
}

// ---------------------------------------------------------------------------
// Seeded random graphs

struct RandomModel {
    enum class Kind { Gnp, Regular, MaxDegree, MadBounded } kind = Kind::Gnp;
    double p = 0.5;
    int degree = 3;
    Rational bound{3};

    std::string str() const {
        switch (kind) {
            case Kind::Gnp: {
                std::string s = std::to_string(p);
                while (s.size() > 1 && s.back() == '0') s.pop_back();
                return "gnp:" + s;
            }
            case Kind::Regular: return "regular:" + std::to_string(degree);
            case Kind::MaxDegree: return "max_degree:" + std::to_string(degree);
            case Kind::MadBounded: return "mad_bounded:" + bound.str();
        }
        return "?";
    }
};

inline RandomModel parse_random_model(const std::string& s) {
    auto colon = s.find(':');
    if (colon == std::string::npos) throw ParseError("model must look like name:parameter, got '" + s + "'");
    std::string name = s.substr(0, colon);
    std::string arg = s.substr(colon + 1);
    RandomModel m;
    try {
        std::size_t used = 0;
        if (name == "gnp") {
            m.kind = RandomModel::Kind::Gnp;
            m.p = std::stod(arg, &used);
            if (m.p < 0 || m.p > 1) throw ValidationError("gnp probability must lie in [0,1]");
        } else if (name == "regular" || name == "max_degree") {
            m.kind = name == "regular" ? RandomModel::Kind::Regular : RandomModel::Kind::MaxDegree;
            m.degree = std::stoi(arg, &used);
            if (m.degree < 0) throw ValidationError("degree must be non-negative");
        } else if (name == "mad_bounded") {
            m.kind = RandomModel::Kind::MadBounded;
            auto slash = arg.find('/');
            if (slash == std::string::npos) {
                m.bound = Rational(std::stoll(arg, &used));
            } else {
                std::size_t u2 = 0;
                auto a = std::stoll(arg.substr(0, slash), &used);
                auto b = std::stoll(arg.substr(slash + 1), &u2);
                if (u2 != arg.size() - slash - 1 || b <= 0) throw ParseError("bad mad bound '" + arg + "'");
                m.bound = Rational(a, b);
                used = slash;
            }
            if (m.bound < Rational(0)) throw ValidationError("mad bound must be non-negative");
        } else {
            throw ParseError("unknown model '" + name + "'");
        }
        if (used == 0) throw ParseError("missing model parameter in '" + s + "'");
        if (used != arg.size() && name != "mad_bounded") throw ParseError("bad model parameter in '" + s + "'");
    } catch (const std::logic_error&) {
        throw ParseError("bad model parameter in '" + s + "'");
    }
    return m;
}

namespace detail {

// Distribution code is spelled out so that outputs do not depend on the
// standard library's distribution implementations.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
    if (bound <= 1) return 0;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do x = rng();
    while (x >= limit);
    return x % bound;
}

inline double unit_double(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

template <class T>
void shuffle(std::vector<T>& v, std::mt19937_64& rng) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[uniform_below(rng, i)]);
}

inline std::vector<Edge> all_pairs(int n) {
    std::vector<Edge> p;
    for (int j = 1; j < n; ++j)
        for (int i = 0; i < j; ++i) p.push_back({i, j});
    return p;
}

inline std::optional<Graph> try_regular(int n, int d, std::mt19937_64& rng) {
    std::vector<Vertex> stubs;
    for (Vertex v = 0; v < n; ++v)
        for (int i = 0; i < d; ++i) stubs.push_back(v);
    std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
    std::vector<Edge> edges;
    auto take = [&](std::size_t i, std::size_t j) {
        Vertex u = stubs[i], v = stubs[j];
        adj[u][v] = adj[v][u] = 1;
        edges.push_back({u, v});
        if (i < j) std::swap(i, j);
        stubs[i] = stubs.back();
        stubs.pop_back();
        stubs[j] = stubs.back();
        stubs.pop_back();
    };
    while (!stubs.empty()) {
        bool placed = false;
        for (int attempt = 0; attempt < 64 && !placed; ++attempt) {
            auto i = uniform_below(rng, stubs.size());
            auto j = uniform_below(rng, stubs.size());
            if (i != j && stubs[i] != stubs[j] && !adj[stubs[i]][stubs[j]]) {
                take(i, j);
                placed = true;
            }
        }
        if (placed) continue;
        std::vector<std::pair<std::size_t, std::size_t>> ok;
        for (std::size_t i = 0; i < stubs.size(); ++i)
            for (std::size_t j = i + 1; j < stubs.size(); ++j)
                if (stubs[i] != stubs[j] && !adj[stubs[i]][stubs[j]]) ok.emplace_back(i, j);
        if (ok.empty()) return std::nullopt;
        auto [i, j] = ok[uniform_below(rng, ok.size())];
        take(i, j);
    }
    return Graph(n, std::move(edges));
}

}  // namespace detail

// Deterministic for a fixed (model, n, seed).
inline Graph random_graph(const RandomModel& model, int n, std::uint64_t seed) {
    if (n < 0) throw PreconditionError("negative vertex count");
    if (n > 5000) throw ResourceError("random graphs limited to 5000 vertices");
    std::mt19937_64 rng(seed);
    switch (model.kind) {
        case RandomModel::Kind::Gnp: {
            std::vector<Edge> e;
            for (const auto& x : detail::all_pairs(n))
                if (detail::unit_double(rng) < model.p) e.push_back(x);
            return Graph(n, std::move(e));
        }
        case RandomModel::Kind::Regular: {
            const int d = model.degree;
            if (d >= std::max(n, 1) && !(n == 0 && d == 0)) throw PreconditionError("regular degree must be below n");
            if ((static_cast<long long>(n) * d) % 2 != 0) throw PreconditionError("n*d must be even for a regular graph");
            for (int attempt = 0; attempt < 1000; ++attempt)
                if (auto g = detail::try_regular(n, d, rng)) return *g;
            throw ResourceError("regular graph rejection budget exhausted");
        }
        case RandomModel::Kind::MaxDegree: {
            auto pairs = detail::all_pairs(n);
            detail::shuffle(pairs, rng);
            std::vector<int> deg(n, 0);
            std::vector<Edge> e;
            for (const auto& x : pairs)
                if (deg[x.u] < model.degree && deg[x.v] < model.degree) {
                    ++deg[x.u];
                    ++deg[x.v];
                    e.push_back(x);
                }
            return Graph(n, std::move(e));
        }
        case RandomModel::Kind::MadBounded: {
            // Random insertion order; an edge is kept only if the bound survives.
            auto pairs = detail::all_pairs(n);
            detail::shuffle(pairs, rng);
            std::vector<Edge> e;
            for (const auto& x : pairs) {
                e.push_back(x);
                if (!mad_at_most(Graph(n, e), model.bound)) e.pop_back();
            }
            Graph g(n, std::move(e));
            if (n > 0 && mad(g) > model.bound) throw InternalError("mad-bounded generator exceeded its bound");
            return g;
        }
    }
    throw PreconditionError("unknown random model");
}

}  // namespace onetwo
