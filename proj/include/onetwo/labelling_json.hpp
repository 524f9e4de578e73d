#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "onetwo/errors.hpp"
#include "onetwo/graph.hpp"
#include "onetwo/labelling.hpp"

namespace onetwo {

// {"k","n","edges":[[u,v],...],"vertex_labels","edge_labels","metric"};
// edges in lexicographic order, edge_labels parallel to them.
inline nlohmann::json labelling_json(const Graph& g, const TotalLabelling& l, std::optional<Metric> m) {
    check_shape(g, l);
    nlohmann::json j;
    j["k"] = l.k;
    j["n"] = g.order();
    auto edges = nlohmann::json::array();
    for (const auto& e : g.edges()) edges.push_back({e.u, e.v});
    j["edges"] = std::move(edges);
    j["vertex_labels"] = l.vertex_labels;
    j["edge_labels"] = l.edge_labels;
    if (m) j["metric"] = to_string(*m);
    return j;
}

inline std::string labelling_to_json(const Graph& g, const TotalLabelling& l, std::optional<Metric> m) {
    return labelling_json(g, l, m).dump() + "\n";
}

struct LabelledGraph {
    Graph graph;
    TotalLabelling labelling;
    std::optional<Metric> metric;
};

inline LabelledGraph parse_labelling_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("labelling JSON: ") + e.what());
    }
    try {
        LabelledGraph out;
        int n = j.at("n").get<int>();
        std::vector<Edge> edges;
        for (const auto& e : j.at("edges")) {
            if (!e.is_array() || e.size() != 2) throw ParseError("labelling JSON: each edge must be a pair");
            edges.push_back({e[0].get<int>(), e[1].get<int>()});
        }
        std::vector<int> elab = j.at("edge_labels").get<std::vector<int>>();
        if (elab.size() != edges.size()) throw ShapeError("labelling JSON: edge_labels and edges differ in length");
        out.graph = Graph(n, edges);
        out.labelling.k = j.at("k").get<int>();
        out.labelling.vertex_labels = j.at("vertex_labels").get<std::vector<int>>();
        out.labelling.edge_labels.assign(edges.size(), 1);
        // the file may list edges in any order; re-index by the graph's ids
        for (std::size_t i = 0; i < edges.size(); ++i)
            out.labelling.edge_labels[out.graph.edge_id(edges[i].u, edges[i].v)] = elab[i];
        if (j.contains("metric")) out.metric = parse_metric(j["metric"].get<std::string>());
        check_shape(out.graph, out.labelling);
        return out;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("labelling JSON: ") + e.what());
    }
}

// Labelling of `g` read from a document whose edge set must equal g's.
inline TotalLabelling labelling_for(const Graph& g, const LabelledGraph& doc) {
    if (doc.graph.order() != g.order()) throw ShapeError("labelling is for a graph with a different vertex count");
    if (doc.graph.edges() != g.edges()) throw ShapeError("labelling is for a graph with a different edge set");
    check_shape(g, doc.labelling);
    return doc.labelling;
}

}  // namespace onetwo
