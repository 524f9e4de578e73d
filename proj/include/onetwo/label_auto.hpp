#pragma once

#include <string>
#include <vector>

#include "onetwo/construct.hpp"
#include "onetwo/density.hpp"
#include "onetwo/errors.hpp"
#include "onetwo/graph.hpp"
#include "onetwo/labelling.hpp"
#include "onetwo/mad3.hpp"
#include "onetwo/oracle.hpp"

namespace onetwo {

// No construction applies and the oracle budget is too small.
class NoMethodError : public ResourceError {
  public:
    using ResourceError::ResourceError;
};

struct AutoOptions {
    ConstructOptions construct;
    OracleOptions oracle;
};

struct AutoResult {
    TotalLabelling labelling;
    std::vector<std::string> methods;  // one per component, in component order
};

namespace detail {

inline bool is_regular(const Graph& g) {
    for (Vertex v = 0; v < g.order(); ++v)
        if (g.degree(v) != g.degree(0)) return false;
    return true;
}

// Labels one connected graph; returns the method name.
inline std::string label_component(const Graph& c, Metric m, const AutoOptions& opt, TotalLabelling& out) {
    const int delta = c.max_degree();
    // on regular graphs the three metrics agree for 2-labellings
    const bool construct_ok = delta <= 6 && (m != Metric::Sum || is_regular(c));
    if (construct_ok) {
        if (delta <= 4) {
            out = label_deg4(c, opt.construct);
            return "deg4";
        }
        if (delta == 5) {
            out = label_deg5(c, opt.construct);
            return "deg5";
        }
        out = label_deg6(c, opt.construct);
        return "deg6";
    }
    if (m == Metric::Multiset && mad_at_most(c, Rational(3))) {
        out = label_mad3(c);
        return "mad3";
    }
    if (c.order() + c.size() > opt.oracle.max_elements)
        throw NoMethodError("no method applies: component with max degree " + std::to_string(delta) + ", mad " +
                            mad(c).str() + ", " + std::to_string(c.order() + c.size()) +
                            " elements exceeds the oracle budget of " + std::to_string(opt.oracle.max_elements));
    auto l = find_proper(c, 2, m, opt.oracle);
    if (!l) throw NotFoundError("component has no " + to_string(m) + "-proper total 2-labelling");
    out = std::move(*l);
    return "oracle";
}

}  // namespace detail

// Per connected component: the degree constructions, then mad3 for the
// multiset metric, then the exhaustive oracle with k = 2.
inline AutoResult label_auto_report(const Graph& g, Metric m, const AutoOptions& opt = {}) {
    AutoResult res;
    res.labelling = TotalLabelling(g, 2);
    for (const auto& comp : components(g)) {
        Subgraph s = induced(g, comp);
        TotalLabelling part;
        res.methods.push_back(detail::label_component(s.graph, m, opt, part));
        for (Vertex v = 0; v < s.graph.order(); ++v) res.labelling.vertex_labels[s.to_parent[v]] = part.vertex_labels[v];
        for (EdgeId id = 0; id < s.graph.size(); ++id) {
            const Edge& e = s.graph.edge(id);
            res.labelling.edge_labels[g.edge_id(s.to_parent[e.u], s.to_parent[e.v])] = part.edge_labels[id];
        }
    }
    if (!is_proper(g, res.labelling, m).proper)
        throw InternalError("label_auto produced an improper labelling");
    return res;
}

inline TotalLabelling label_auto(const Graph& g, Metric m, const AutoOptions& opt = {}) {
    return label_auto_report(g, m, opt).labelling;
}

}  // namespace onetwo
