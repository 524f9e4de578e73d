#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "onetwo/construct.hpp"
#include "onetwo/density.hpp"
#include "onetwo/errors.hpp"
#include "onetwo/graph.hpp"
#include "onetwo/hall.hpp"
#include "onetwo/labelling.hpp"
#include "onetwo/rational.hpp"

namespace onetwo {

enum class ConfigKind { C1, C2, C3, C4, Cycle };

inline std::string to_string(ConfigKind k) {
    switch (k) {
        case ConfigKind::C1: return "C1";
        case ConfigKind::C2: return "C2";
        case ConfigKind::C3: return "C3";
        case ConfigKind::C4: return "C4";
        case ConfigKind::Cycle: return "CYCLE";
    }
    return "?";
}

struct Configuration {
    ConfigKind kind = ConfigKind::C1;
    Vertex u = -1;
    Vertex v = -1;        // C1, C2
    Vertex u_prime = -1;  // C2
    Vertex v_prime = -1;  // C1, C2
    std::vector<Vertex> low;   // C3/C4: the 2^- neighbours v_i that get cut off; CYCLE: the walk
    std::vector<Vertex> high;  // C3/C4: the other neighbours w_i
    Vertex witness = -1;       // C4: neighbour of degree outside {1, 2, k}

    std::string str() const {
        std::string s = to_string(kind);
        auto list = [](const std::vector<Vertex>& xs) {
            std::string t = "[";
            for (std::size_t i = 0; i < xs.size(); ++i) t += (i ? "," : "") + std::to_string(xs[i]);
            return t + "]";
        };
        switch (kind) {
            case ConfigKind::C1:
                return s + " u=" + std::to_string(u) + " v=" + std::to_string(v) + " v'=" + std::to_string(v_prime);
            case ConfigKind::C2:
                return s + " u=" + std::to_string(u) + " v=" + std::to_string(v) + " u'=" + std::to_string(u_prime) +
                       " v'=" + std::to_string(v_prime);
            case ConfigKind::C3: return s + " u=" + std::to_string(u) + " v=" + list(low) + " w=" + list(high);
            case ConfigKind::C4:
                return s + " u=" + std::to_string(u) + " v=" + list(low) + " w=" + list(high) +
                       " witness=" + std::to_string(witness);
            case ConfigKind::Cycle: return s + " " + list(low);
        }
        return s;
    }
};

namespace detail {

inline int low_count(const Graph& g, Vertex u) {
    int c = 0;
    for (Vertex w : g.neighbours(u)) c += g.degree(w) <= 2;
    return c;
}

// Walk of a cycle component from its smallest vertex towards the smaller neighbour.
inline std::vector<Vertex> cycle_walk(const Graph& g, Vertex start) {
    std::vector<Vertex> w{start};
    Vertex prev = start, cur = g.neighbours(start).front();
    while (cur != start) {
        w.push_back(cur);
        const auto& nb = g.neighbours(cur);
        Vertex next = nb[0] == prev ? nb[1] : nb[0];
        prev = cur;
        cur = next;
    }
    return w;
}

}  // namespace detail

inline std::optional<Configuration> find_configuration(const Graph& g) {
    const int n = g.order();
    for (Vertex u = 0; u < n; ++u) {
        if (g.degree(u) != 1) continue;
        Vertex v = g.neighbours(u)[0];
        if (g.degree(v) != 2) continue;
        Configuration c;
        c.kind = ConfigKind::C1;
        c.u = u;
        c.v = v;
        c.v_prime = g.other(g.incident(v)[0], v) == u ? g.other(g.incident(v)[1], v) : g.other(g.incident(v)[0], v);
        return c;
    }
    for (Vertex s = 0; s < n; ++s) {
        if (g.degree(s) != 2) continue;
        bool has_two = false;
        for (Vertex w : g.neighbours(s)) has_two = has_two || g.degree(w) == 2;
        if (!has_two) continue;
        // maximal run of 2-vertices through s
        std::vector<Vertex> run{s};
        bool closed = false;
        for (int dir = 0; dir < 2 && !closed; ++dir) {
            Vertex prev = s, cur = g.neighbours(s)[dir];
            while (g.degree(cur) == 2 && cur != s) {
                if (dir == 0) run.push_back(cur);
                else run.insert(run.begin(), cur);
                const auto& nb = g.neighbours(cur);
                Vertex next = nb[0] == prev ? nb[1] : nb[0];
                prev = cur;
                cur = next;
            }
            if (cur == s) closed = true;
        }
        Configuration c;
        if (closed) {
            Vertex start = s;
            for (Vertex x : run) start = std::min(start, x);
            c.kind = ConfigKind::Cycle;
            c.low = detail::cycle_walk(g, start);
            return c;
        }
        if (run.back() < run.front()) std::reverse(run.begin(), run.end());
        c.kind = ConfigKind::C2;
        c.u = run[0];
        c.v = run[1];
        for (Vertex w : g.neighbours(c.u))
            if (w != c.v) c.u_prime = w;
        for (Vertex w : g.neighbours(c.v))
            if (w != c.u) c.v_prime = w;
        return c;
    }
    for (Vertex u = 0; u < n; ++u) {
        const int k = g.degree(u);
        if (k < 3 || detail::low_count(g, u) < k / 2) continue;
        Configuration c;
        c.kind = ConfigKind::C3;
        c.u = u;
        for (Vertex w : g.neighbours(u))
            (g.degree(w) <= 2 && static_cast<int>(c.low.size()) < k / 2 ? c.low : c.high).push_back(w);
        return c;
    }
    for (Vertex u = 0; u < n; ++u) {
        const int k = g.degree(u);
        if (k < 4 || k % 2 || detail::low_count(g, u) != k / 2 - 1) continue;
        Vertex wit = -1;
        for (Vertex w : g.neighbours(u))
            if (wit < 0 && g.degree(w) != 1 && g.degree(w) != 2 && g.degree(w) != k) wit = w;
        if (wit < 0) continue;
        Configuration c;
        c.kind = ConfigKind::C4;
        c.u = u;
        c.witness = wit;
        for (Vertex w : g.neighbours(u)) (g.degree(w) <= 2 ? c.low : c.high).push_back(w);
        return c;
    }
    return std::nullopt;
}

// Independent re-check of the defining predicate.
inline bool check_configuration(const Graph& g, const Configuration& c) {
    auto deg = [&](Vertex x) { return g.degree(x); };
    switch (c.kind) {
        case ConfigKind::C1:
            return deg(c.u) == 1 && g.adjacent(c.u, c.v) && deg(c.v) == 2 && g.adjacent(c.v, c.v_prime) &&
                   c.v_prime != c.u;
        case ConfigKind::C2:
            return deg(c.u) == 2 && deg(c.v) == 2 && g.adjacent(c.u, c.v) && g.adjacent(c.u, c.u_prime) &&
                   g.adjacent(c.v, c.v_prime) && c.u_prime != c.v && c.v_prime != c.u && deg(c.u_prime) >= 3;
        case ConfigKind::C3: {
            const int k = deg(c.u);
            if (k < 3 || static_cast<int>(c.low.size()) != k / 2 ||
                static_cast<int>(c.low.size() + c.high.size()) != k)
                return false;
            for (Vertex x : c.low)
                if (!g.adjacent(c.u, x) || deg(x) > 2) return false;
            for (Vertex x : c.high)
                if (!g.adjacent(c.u, x)) return false;
            return true;
        }
        case ConfigKind::C4: {
            const int k = deg(c.u);
            if (k < 4 || k % 2 || static_cast<int>(c.low.size()) != k / 2 - 1 ||
                static_cast<int>(c.low.size() + c.high.size()) != k)
                return false;
            int lows = 0;
            for (Vertex x : g.neighbours(c.u)) lows += deg(x) <= 2;
            if (lows != k / 2 - 1) return false;
            for (Vertex x : c.low)
                if (!g.adjacent(c.u, x) || deg(x) > 2) return false;
            return g.adjacent(c.u, c.witness) && deg(c.witness) != 1 && deg(c.witness) != 2 && deg(c.witness) != k;
        }
        case ConfigKind::Cycle: {
            if (c.low.size() < 3) return false;
            for (std::size_t i = 0; i < c.low.size(); ++i)
                if (deg(c.low[i]) != 2 || !g.adjacent(c.low[i], c.low[(i + 1) % c.low.size()])) return false;
            return true;
        }
    }
    return false;
}

// Cycle patterns: C_n with n = 4q + r walks q copies of a block, then a tail.
// Each entry is (vertex label, label of the edge to the next vertex).
struct CyclePattern {
    std::array<std::array<int, 2>, 4> block;
    std::vector<std::array<int, 2>> tail;
};

inline const std::array<CyclePattern, 4>& cycle_patterns() {
    static const std::array<CyclePattern, 4> p{{
        {{{{1, 2}, {1, 2}, {1, 1}, {1, 1}}}, {}},
        {{{{1, 2}, {2, 2}, {1, 1}, {1, 1}}}, {{1, 2}}},
        {{{{1, 2}, {1, 2}, {1, 1}, {1, 1}}}, {{2, 1}, {1, 1}}},
        {{{{1, 2}, {1, 2}, {1, 1}, {1, 1}}}, {{2, 2}, {1, 1}, {1, 1}}},
    }};
    return p;
}

// Labels for the cycle walk w (vertex labels then edge labels along the walk).
inline std::pair<std::vector<int>, std::vector<int>> cycle_labels(std::size_t n) {
    if (n < 3) throw PreconditionError("cycles have at least 3 vertices");
    const auto& pat = cycle_patterns()[n % 4];
    std::vector<int> vl, el;
    for (std::size_t q = 0; q < n / 4; ++q)
        for (const auto& x : pat.block) {
            vl.push_back(x[0]);
            el.push_back(x[1]);
        }
    for (const auto& x : pat.tail) {
        vl.push_back(x[0]);
        el.push_back(x[1]);
    }
    return {vl, el};
}

struct Mad3Options {
    bool dispatch = true;  // components with maximum degree at most 5 go to label_deg5
};

namespace detail {

// Labelling over g restricted to the currently present edges.
class ActiveLabelling {
  public:
    explicit ActiveLabelling(const Graph& g) : g_(g), alive_(g.size(), 1), deg_(g.order()), lab_(g, 2) {
        for (Vertex v = 0; v < g.order(); ++v) deg_[v] = g.degree(v);
    }

    const Graph& host() const { return g_; }
    TotalLabelling& lab() { return lab_; }
    bool alive(EdgeId e) const { return alive_[e]; }
    int deg(Vertex v) const { return deg_[v]; }

    void set_alive(EdgeId e, bool on) {
        if (alive_[e] == on) return;
        alive_[e] = on;
        const int d = on ? 1 : -1;
        deg_[g_.edge(e).u] += d;
        deg_[g_.edge(e).v] += d;
    }

    Graph current() const {
        std::vector<Edge> es;
        for (EdgeId e = 0; e < g_.size(); ++e)
            if (alive_[e]) es.push_back(g_.edge(e));
        return Graph(g_.order(), std::move(es));
    }

    int twos(Vertex v) const {
        int c = lab_.vertex_labels[v] == 2;
        for (EdgeId e : g_.incident(v)) c += alive_[e] && lab_.edge_labels[e] == 2;
        return c;
    }

    // v's multiset differs from every present neighbour's
    bool fine(Vertex v) const {
        const int t = twos(v);
        for (EdgeId e : g_.incident(v)) {
            if (!alive_[e]) continue;
            Vertex w = g_.other(e, v);
            if (deg_[w] == deg_[v] && twos(w) == t) return false;
        }
        return true;
    }

    int& edge_label(Vertex a, Vertex b) { return lab_.edge_labels[g_.edge_id(a, b)]; }

  private:
    const Graph& g_;
    std::vector<char> alive_;
    std::vector<int> deg_;
    TotalLabelling lab_;
};

struct Mad3Frame {
    Configuration cfg;
    std::vector<EdgeId> removed;  // edges of g switched off by this step
    bool deg5 = false;            // base component handed to label_deg5
};

inline std::string mad3_dump(const Graph& g, const std::vector<Mad3Frame>& frames, std::size_t at) {
    nlohmann::json j;
    auto edges = nlohmann::json::array();
    for (const auto& e : g.edges()) edges.push_back({e.u, e.v});
    j["n"] = g.order();
    j["edges"] = std::move(edges);
    auto fs = nlohmann::json::array();
    for (const auto& f : frames) fs.push_back(f.deg5 ? "DEG5 " + f.cfg.str() : f.cfg.str());
    j["steps"] = std::move(fs);
    j["failed_step"] = at;
    return j.dump();
}

}  // namespace detail

// Labels the elements the configuration's reduction removed, keeping
// everything else. `al` holds the labelling of the reduced graph with the
// removed edges already switched back on.
inline bool extend_after_reduction(detail::ActiveLabelling& al, const Configuration& c) {
    auto& L = al.lab();
    switch (c.kind) {
        case ConfigKind::C1:
        case ConfigKind::C2: {
            int& e = al.edge_label(c.u, c.v);
            for (int le : {1, 2})
                for (int lu : {1, 2}) {
                    e = le;
                    L.vertex_labels[c.u] = lu;
                    if (al.fine(c.u) && al.fine(c.v)) return true;
                }
            return false;
        }
        case ConfigKind::C3:
        case ConfigKind::C4: {
            const int m = static_cast<int>(c.low.size());
            // u's multiset only depends on how many of u, uv_1..uv_m carry 2
            for (int r = 0; r <= m + 1; ++r) {
                L.vertex_labels[c.u] = r >= 1 ? 2 : 1;
                for (int i = 0; i < m; ++i) al.edge_label(c.u, c.low[i]) = i + 2 <= r ? 2 : 1;
                bool ok = true;
                for (Vertex x : c.low) {
                    L.vertex_labels[x] = 1;
                    if (!al.fine(x)) L.vertex_labels[x] = 2;
                    ok = ok && al.fine(x);
                }
                if (ok && al.fine(c.u)) return true;
            }
            return false;
        }
        case ConfigKind::Cycle: {
            auto [vl, el] = cycle_labels(c.low.size());
            const std::size_t n = c.low.size();
            for (std::size_t i = 0; i < n; ++i) {
                L.vertex_labels[c.low[i]] = vl[i];
                al.edge_label(c.low[i], c.low[(i + 1) % n]) = el[i];
            }
            for (Vertex x : c.low)
                if (!al.fine(x)) return false;
            return true;
        }
    }
    return false;
}

inline TotalLabelling label_mad3(const Graph& g, const Mad3Options& opt = {}) {
    if (!mad_at_most(g, Rational(3))) throw PreconditionError("label_mad3 needs mad at most 3, got " + mad(g).str());
    detail::ActiveLabelling al(g);
    std::vector<detail::Mad3Frame> frames;
    auto cut_off = [&](detail::Mad3Frame f, const std::vector<std::pair<Vertex, Vertex>>& es) {
        for (auto [a, b] : es) {
            EdgeId e = g.edge_id(a, b);
            al.set_alive(e, false);
            f.removed.push_back(e);
        }
        frames.push_back(std::move(f));
    };
    auto component_edges = [&](const Graph& cur, const std::vector<Vertex>& comp) {
        std::vector<std::pair<Vertex, Vertex>> es;
        for (Vertex x : comp)
            for (Vertex w : cur.neighbours(x))
                if (x < w) es.emplace_back(x, w);
        return es;
    };
    for (;;) {
        Graph cur = al.current();
        if (cur.size() == 0) break;
        bool peeled = false;
        for (const auto& comp : components(cur)) {
            if (comp.size() < 2) continue;
            int top = 0;
            bool cyc = true;
            for (Vertex x : comp) {
                top = std::max(top, cur.degree(x));
                cyc = cyc && cur.degree(x) == 2;
            }
            if (cyc) {
                detail::Mad3Frame f;
                f.cfg.kind = ConfigKind::Cycle;
                f.cfg.low = detail::cycle_walk(cur, *std::min_element(comp.begin(), comp.end()));
                cut_off(std::move(f), component_edges(cur, comp));
                peeled = true;
            } else if (opt.dispatch && top <= 5) {
                detail::Mad3Frame f;
                f.deg5 = true;
                f.cfg.low = comp;
                cut_off(std::move(f), component_edges(cur, comp));
                peeled = true;
            }
        }
        if (peeled) continue;
        auto cfg = find_configuration(cur);
        if (!cfg) {
            if (cur.max_degree() > 5)
                throw InternalError("no reducible configuration in a graph with mad at most 3 and maximum degree " +
                                        std::to_string(cur.max_degree()),
                                    detail::mad3_dump(g, frames, frames.size()));
            for (const auto& comp : components(cur)) {
                if (comp.size() < 2) continue;
                detail::Mad3Frame f;
                f.deg5 = true;
                f.cfg.low = comp;
                cut_off(std::move(f), component_edges(cur, comp));
            }
            continue;
        }
        if (!check_configuration(cur, *cfg))
            throw InternalError("detector returned an invalid configuration: " + cfg->str(),
                                detail::mad3_dump(g, frames, frames.size()));
        detail::Mad3Frame f;
        f.cfg = *cfg;
        std::vector<std::pair<Vertex, Vertex>> es;
        switch (cfg->kind) {
            case ConfigKind::C1:
            case ConfigKind::C2: es.emplace_back(cfg->u, cfg->v); break;
            case ConfigKind::C3:
            case ConfigKind::C4:
                for (Vertex x : cfg->low) es.emplace_back(cfg->u, x);
                break;
            case ConfigKind::Cycle: es = component_edges(cur, cfg->low); break;
        }
        cut_off(std::move(f), es);
    }
    for (std::size_t i = frames.size(); i-- > 0;) {
        const auto& f = frames[i];
        for (EdgeId e : f.removed) al.set_alive(e, true);
        if (f.deg5) {
            // the component as it was when peeled off, not as induced in g
            const auto& comp = f.cfg.low;
            std::vector<Edge> es;
            for (EdgeId e : f.removed) {
                auto at = [&](Vertex x) { return static_cast<Vertex>(std::lower_bound(comp.begin(), comp.end(), x) - comp.begin()); };
                es.push_back({at(g.edge(e).u), at(g.edge(e).v)});
            }
            Graph sub(static_cast<int>(comp.size()), std::move(es));
            TotalLabelling part = label_deg5(sub);
            for (Vertex x = 0; x < sub.order(); ++x) al.lab().vertex_labels[comp[x]] = part.vertex_labels[x];
            for (EdgeId e = 0; e < sub.size(); ++e)
                al.edge_label(comp[sub.edge(e).u], comp[sub.edge(e).v]) = part.edge_labels[e];
            continue;
        }
        if (!extend_after_reduction(al, f.cfg))
            throw InternalError("extension failed at " + f.cfg.str(), detail::mad3_dump(g, frames, i));
    }
    TotalLabelling out = al.lab();
    if (!is_proper(g, out, Metric::Multiset).proper)
        throw InternalError("label_mad3 produced a labelling that is not multiset-proper",
                            detail::mad3_dump(g, frames, frames.size()));
    return out;
}

// ---------------------------------------------------------------------------
// discharging audit

enum class ChargeRule { R1, R2 };

struct Transfer {
    Vertex from;
    Vertex to;
    Rational amount;
    ChargeRule rule;
};

struct ChargeLedger {
    std::vector<Rational> omega;
    std::vector<Transfer> transfers;
    std::vector<Rational> omega_star;
    std::map<int, std::vector<std::pair<Vertex, Vertex>>> pairing;  // k -> (weak, strong)
    bool configuration_free = false;
    bool mad_at_most_3 = false;

    Rational total(const std::vector<Rational>& xs) const {
        Rational s(0);
        for (const auto& x : xs) s += x;
        return s;
    }
    bool conserved() const { return total(omega) == total(omega_star); }

    // "R1-2,R1-2,R2+1" style summary of what touched v
    std::string rules_at(Vertex v) const {
        std::string s;
        for (const auto& t : transfers) {
            if (t.from != v && t.to != v) continue;
            if (!s.empty()) s += ' ';
            s += (t.rule == ChargeRule::R1 ? "R1" : "R2");
            s += (t.from == v ? "-" : "+") + t.amount.str();
        }
        return s;
    }
};

inline ChargeLedger discharge_audit(const Graph& g) {
    const int n = g.order();
    ChargeLedger L;
    for (Vertex v = 0; v < n; ++v) L.omega.push_back(Rational(g.degree(v) - 3));
    for (Vertex v = 0; v < n; ++v) {
        if (g.degree(v) < 4) continue;
        for (Vertex w : g.neighbours(v))
            if (g.degree(w) <= 2) L.transfers.push_back({v, w, Rational(2), ChargeRule::R1});
    }
    for (int k = 4; k <= g.max_degree(); k += 2) {
        Bipartition b;
        std::vector<char> weak(n, 0), strong(n, 0);
        for (Vertex v = 0; v < n; ++v) {
            if (g.degree(v) != k) continue;
            (detail::low_count(g, v) == k / 2 - 1 ? weak : strong)[v] = 1;
        }
        for (Vertex v = 0; v < n; ++v) {
            if (weak[v]) b.left.push_back(v);
            if (strong[v]) b.right.push_back(v);
        }
        if (b.left.empty()) continue;
        for (Vertex v : b.left)
            for (Vertex w : g.neighbours(v))
                if (strong[w]) b.edges.emplace_back(v, w);
        auto r = saturating_matching(b);
        if (std::holds_alternative<HallViolation>(r)) {
            const auto& hv = std::get<HallViolation>(r);
            throw ValidationError("weak " + std::to_string(k) + "-vertices cannot all be paired: " +
                                  std::to_string(hv.left_set.size()) + " weak vertices see only " +
                                  std::to_string(hv.neighbours.size()) + " strong ones");
        }
        for (auto [weak_v, strong_v] : std::get<Matching>(r).pairs) {
            L.pairing[k].emplace_back(weak_v, strong_v);
            L.transfers.push_back({strong_v, weak_v, Rational(1), ChargeRule::R2});
        }
    }
    L.omega_star = L.omega;
    for (const auto& t : L.transfers) {
        L.omega_star[t.from] -= t.amount;
        L.omega_star[t.to] += t.amount;
    }
    if (!L.conserved()) throw InternalError("discharging does not conserve charge");
    L.configuration_free = !find_configuration(g).has_value();
    L.mad_at_most_3 = mad_at_most(g, Rational(3));
    // the charge argument concerns connected graphs on at least 3 vertices
    std::vector<char> small(n, 0);
    for (const auto& comp : components(g))
        if (comp.size() < 3)
            for (Vertex v : comp) small[v] = 1;
    if (L.configuration_free && L.mad_at_most_3)
        for (Vertex v = 0; v < n; ++v)
            if (!small[v] && L.omega_star[v] < Rational(0))
                throw InternalError("final charge of vertex " + std::to_string(v) + " is " + L.omega_star[v].str() +
                                    " on a configuration-free graph with mad at most 3");
    return L;
}

}  // namespace onetwo
