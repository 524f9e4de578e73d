#pragma once

#include <string>
#include <vector>

#include "onetwo/errors.hpp"
#include "onetwo/graph.hpp"

namespace onetwo {

enum class Metric { Sum, Product, Multiset };

inline std::string to_string(Metric m) {
    switch (m) {
        case Metric::Sum: return "sum";
        case Metric::Product: return "product";
        case Metric::Multiset: return "multiset";
    }
    return "?";
}

inline Metric parse_metric(const std::string& s) {
    if (s == "sum") return Metric::Sum;
    if (s == "product") return Metric::Product;
    if (s == "multiset") return Metric::Multiset;
    throw ParseError("unknown metric '" + s + "'");
}

// Labels from {1..k} on every vertex and every edge; edge_labels is indexed by
// the host graph's edge ids.
struct TotalLabelling {
    int k = 2;
    std::vector<int> vertex_labels;
    std::vector<int> edge_labels;

    TotalLabelling() = default;
    TotalLabelling(const Graph& g, int k_, int fill = 1)
        : k(k_), vertex_labels(g.order(), fill), edge_labels(g.size(), fill) {}

    friend bool operator==(const TotalLabelling&, const TotalLabelling&) = default;
};

inline void check_shape(const Graph& g, const TotalLabelling& l) {
    if (l.k < 1) throw ShapeError("label bound k must be positive");
    if (static_cast<int>(l.vertex_labels.size()) != g.order())
        throw ShapeError("labelling has " + std::to_string(l.vertex_labels.size()) + " vertex labels, graph has " +
                         std::to_string(g.order()) + " vertices");
    if (static_cast<int>(l.edge_labels.size()) != g.size())
        throw ShapeError("labelling has " + std::to_string(l.edge_labels.size()) + " edge labels, graph has " +
                         std::to_string(g.size()) + " edges");
    for (int x : l.vertex_labels)
        if (x < 1 || x > l.k) throw ShapeError("vertex label " + std::to_string(x) + " outside 1.." + std::to_string(l.k));
    for (int x : l.edge_labels)
        if (x < 1 || x > l.k) throw ShapeError("edge label " + std::to_string(x) + " outside 1.." + std::to_string(l.k));
}

// Every metric is a function of how often each label occurs among the
// elements incident to v (v itself and its edges), so values are compared
// through a key derived from those counts:
//   sum      -> {sum}
//   product  -> exponents of the primes up to k (exact, no overflow)
//   multiset -> count of each label 1..k
struct VertexValue {
    Metric metric = Metric::Sum;
    std::vector<long long> key;

    friend bool operator==(const VertexValue& a, const VertexValue& b) { return a.key == b.key; }

    // Number of 2-labels for k=2 products (the product is 2^exponent).
    long long exponent() const { return key.empty() ? 0 : key.front(); }

    std::string str() const;
};

namespace detail {

inline std::vector<int> primes_up_to(int k) {
    std::vector<int> p;
    for (int x = 2; x <= k; ++x) {
        bool prime = true;
        for (int d : p)
            if (x % d == 0) prime = false;
        if (prime) p.push_back(x);
    }
    return p;
}

inline std::vector<long long> key_from_counts(const std::vector<int>& counts, Metric m) {
    const int k = static_cast<int>(counts.size()) - 1;  // counts[label]
    switch (m) {
        case Metric::Sum: {
            long long s = 0;
            for (int x = 1; x <= k; ++x) s += static_cast<long long>(x) * counts[x];
            return {s};
        }
        case Metric::Product: {
            auto ps = primes_up_to(std::max(k, 2));
            std::vector<long long> e(ps.size(), 0);
            for (int x = 2; x <= k; ++x) {
                int y = x;
                for (std::size_t i = 0; i < ps.size(); ++i)
                    while (y % ps[i] == 0) {
                        e[i] += counts[x];
                        y /= ps[i];
                    }
            }
            return e;
        }
        case Metric::Multiset: return {counts.begin() + 1, counts.end()};
    }
    return {};
}

}  // namespace detail

inline std::string VertexValue::str() const {
    switch (metric) {
        case Metric::Sum: return std::to_string(key.at(0));
        case Metric::Product: {
            static const int first_primes[] = {2, 3, 5, 7, 11, 13};
            std::string s;
            for (std::size_t i = 0; i < key.size(); ++i) {
                if (key[i] == 0 && key.size() > 1) continue;
                if (!s.empty()) s += "*";
                s += (i < 6 ? std::to_string(first_primes[i]) : "p" + std::to_string(i)) + "^" + std::to_string(key[i]);
            }
            return s.empty() ? "1" : s;
        }
        case Metric::Multiset: {
            std::string s = "{";
            for (std::size_t i = 0; i < key.size(); ++i)
                for (long long c = 0; c < key[i]; ++c) {
                    if (s.size() > 1) s += ",";
                    s += std::to_string(i + 1);
                }
            return s + "}";
        }
    }
    return "?";
}

// Occurrences of each label among v and its incident edges, indexed by label.
inline std::vector<int> incident_counts(const Graph& g, const TotalLabelling& l, Vertex v) {
    std::vector<int> c(l.k + 1, 0);
    ++c[l.vertex_labels[v]];
    for (EdgeId e : g.incident(v)) ++c[l.edge_labels[e]];
    return c;
}

inline VertexValue evaluate(const Graph& g, const TotalLabelling& l, Metric m, Vertex v) {
    check_shape(g, l);
    if (v < 0 || v >= g.order()) throw PreconditionError("vertex " + std::to_string(v) + " out of range");
    return {m, detail::key_from_counts(incident_counts(g, l, v), m)};
}

// Products of a 2-labelling as exponents of 2.
inline std::vector<int> product_exponents(const Graph& g, const TotalLabelling& l) {
    check_shape(g, l);
    if (l.k > 2) throw PreconditionError("product exponents need a 2-labelling");
    std::vector<int> e(g.order(), 0);
    for (Vertex v = 0; v < g.order(); ++v) {
        e[v] += l.vertex_labels[v] == 2;
        for (EdgeId id : g.incident(v)) e[v] += l.edge_labels[id] == 2;
    }
    return e;
}

struct ProperReport {
    bool proper = true;
    std::vector<EdgeId> conflicts;  // every edge whose endpoints share a value

    explicit operator bool() const { return proper; }
};

inline ProperReport is_proper(const Graph& g, const TotalLabelling& l, Metric m) {
    check_shape(g, l);
    std::vector<std::vector<long long>> keys(g.order());
    for (Vertex v = 0; v < g.order(); ++v) keys[v] = detail::key_from_counts(incident_counts(g, l, v), m);
    ProperReport r;
    for (EdgeId e = 0; e < g.size(); ++e)
        if (keys[g.edge(e).u] == keys[g.edge(e).v]) r.conflicts.push_back(e);
    r.proper = r.conflicts.empty();
    return r;
}

struct Hierarchy {
    bool sum = false;
    bool product = false;
    bool multiset = false;

    friend bool operator==(const Hierarchy&, const Hierarchy&) = default;
};

// Sum- or product-properness forces multiset-properness; a violation means the
// evaluator itself is broken.
inline Hierarchy hierarchy_check(const Graph& g, const TotalLabelling& l) {
    Hierarchy h{is_proper(g, l, Metric::Sum).proper, is_proper(g, l, Metric::Product).proper,
                is_proper(g, l, Metric::Multiset).proper};
    if ((h.sum || h.product) && !h.multiset)
        throw InternalError("hierarchy violated: sum/product proper but multiset improper");
    return h;
}

}  // namespace onetwo
