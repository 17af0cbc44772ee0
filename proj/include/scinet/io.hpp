#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "scinet/graph.hpp"

namespace scinet {

// Edge-list text format: an optional first line `#{...}` with a JSON header
// (node labels, bipartite split), then one `u v w` line per edge, 0-based ids.

inline void save_graph(const WeightedGraph& g, std::ostream& out) {
    nlohmann::json header;
    header["n_nodes"] = g.n_nodes();
    if (!g.node_labels.empty()) header["node_labels"] = g.node_labels;
    out << "#" << header.dump() << "\n";
    for (const Edge& e : g.edges()) out << e.u << " " << e.v << " " << e.weight << "\n";
}

inline void save_graph(const BipartiteGraph& g, std::ostream& out) {
    nlohmann::json header;
    header["n_articles"] = g.n_articles();
    header["n_concepts"] = g.n_concepts();
    out << "#" << header.dump() << "\n";
    for (const Edge& e : g.edges()) out << e.u << " " << e.v << " " << e.weight << "\n";
}

namespace detail {

struct ParsedEdgeList {
    nlohmann::json header;
    std::vector<Edge> edges;
    NodeId max_u = 0;
    NodeId max_v = 0;
};

inline ParsedEdgeList parse_edge_list(std::istream& in) {
    ParsedEdgeList out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (line[0] == '#') {
            out.header = nlohmann::json::parse(line.substr(1));
            continue;
        }
        std::istringstream row(line);
        Edge e{};
        if (!(row >> e.u >> e.v >> e.weight))
            throw std::runtime_error("malformed edge at line " + std::to_string(lineno));
        out.max_u = std::max(out.max_u, e.u);
        out.max_v = std::max(out.max_v, e.v);
        out.edges.push_back(e);
    }
    return out;
}

}  // namespace detail

inline WeightedGraph load_graph(std::istream& in) {
    auto parsed = detail::parse_edge_list(in);
    std::size_t n = std::max(parsed.max_u, parsed.max_v) + (parsed.edges.empty() ? 0 : 1);
    if (parsed.header.contains("n_nodes")) n = parsed.header["n_nodes"].get<std::size_t>();
    WeightedGraph g = WeightedGraph::from_edges(n, std::move(parsed.edges));
    if (parsed.header.contains("node_labels"))
        g.node_labels = parsed.header["node_labels"].get<std::vector<std::string>>();
    return g;
}

inline BipartiteGraph load_bipartite(std::istream& in) {
    auto parsed = detail::parse_edge_list(in);
    if (!parsed.header.contains("n_articles") || !parsed.header.contains("n_concepts"))
        throw std::runtime_error("bipartite edge list needs an n_articles/n_concepts header");
    return BipartiteGraph::from_edges(parsed.header["n_articles"].get<std::size_t>(),
                                      parsed.header["n_concepts"].get<std::size_t>(),
                                      std::move(parsed.edges));
}

// Partitions and covers share one JSON schema: {"node_id": [cluster ids]}.

inline void save_cover(const Cover& c, std::ostream& out) {
    nlohmann::json obj = nlohmann::json::object();
    for (NodeId u = 0; u < c.memberships.size(); ++u) {
        nlohmann::json arr = nlohmann::json::array();
        for (ClusterId k : c.memberships[u]) arr.push_back(k);
        obj[std::to_string(u)] = std::move(arr);
    }
    out << obj.dump() << "\n";
}

inline void save_partition(const Partition& p, std::ostream& out) {
    save_cover(Cover::from_partition(p), out);
}

inline Cover load_cover(std::istream& in) {
    nlohmann::json obj = nlohmann::json::parse(in);
    // Accept the wrapper documents written by the cluster command.
    if (obj.is_object() && obj.contains("cover")) obj = obj["cover"];
    else if (obj.is_object() && obj.contains("partitions")) obj = obj["partitions"].at(0);
    Cover c;
    std::size_t n = obj.size();
    c.memberships.assign(n, {});
    for (const auto& [key, val] : obj.items()) {
        std::size_t u = std::stoull(key);
        if (u >= n) throw std::runtime_error("non-dense node ids in cover file");
        for (const auto& cid : val) c.memberships[u].insert(cid.get<ClusterId>());
    }
    c.validate();
    return c;
}

inline Partition load_partition(std::istream& in) { return load_cover(in).to_partition(); }

template <typename T>
void save_to_file(const T& obj, const std::string& path,
                  void (*saver)(const T&, std::ostream&)) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    saver(obj, out);
}

}  // namespace scinet
