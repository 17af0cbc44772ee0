#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "scinet/graph.hpp"

namespace scinet {

enum class NullModel { newman, barber };

// Q = sum_c [ w_in(c)/W - (s(c)/2W)^2 ]; self-loops count once in w_in,
// twice in strength.
inline double modularity(const WeightedGraph& graph, const Partition& partition) {
    if (partition.assignment.size() != graph.n_nodes())
        throw std::invalid_argument("partition does not cover graph");
    double w = graph.total_weight();
    if (w <= 0.0) throw std::invalid_argument("modularity undefined on empty graph");
    std::size_t k = partition.n_clusters();
    std::vector<double> w_in(k, 0.0), strength(k, 0.0);
    for (const Edge& e : graph.edges())
        if (partition.assignment[e.u] == partition.assignment[e.v])
            w_in[partition.assignment[e.u]] += e.weight;
    for (NodeId u = 0; u < graph.n_nodes(); ++u)
        strength[partition.assignment[u]] += graph.strength(u);
    double q = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
        double s = strength[c] / (2.0 * w);
        q += w_in[c] / w - s * s;
    }
    return q;
}

// Q_B = (1/W) sum over same-cluster (article, concept) pairs of
// [ w_ij - k_i d_j / W ]. Clusters may mix the two node types; article ids
// come first in the partition, concepts follow.
inline double barber_modularity(const BipartiteGraph& bigraph, const Partition& partition) {
    std::size_t na = bigraph.n_articles(), nc = bigraph.n_concepts();
    if (partition.assignment.size() != na + nc)
        throw std::invalid_argument("partition does not cover both node types");
    double w = bigraph.total_weight();
    if (w <= 0.0) throw std::invalid_argument("modularity undefined on empty graph");
    std::size_t k = partition.n_clusters();
    std::vector<double> art_strength(k, 0.0), con_strength(k, 0.0), intra(k, 0.0);
    for (NodeId a = 0; a < na; ++a) art_strength[partition.assignment[a]] += bigraph.article_strength(a);
    for (NodeId c = 0; c < nc; ++c) con_strength[partition.assignment[na + c]] += bigraph.concept_strength(c);
    for (const Edge& e : bigraph.edges())
        if (partition.assignment[e.u] == partition.assignment[na + e.v]) intra[partition.assignment[e.u]] += e.weight;
    double q = 0.0;
    for (std::size_t c = 0; c < k; ++c)
        q += intra[c] / w - art_strength[c] * con_strength[c] / (w * w);
    return q;
}

namespace detail {

// Split w into n near-equal parts summing back to w exactly: the last part
// absorbs the rounding of the first n-1 (Sterbenz: w - s is exact since
// s is within a factor of two of w).
inline std::vector<double> exact_split(double w, std::size_t n) {
    std::vector<double> parts(n, w / static_cast<double>(n));
    if (n <= 1) {
        parts.assign(1, w);
        return parts;
    }
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) s += parts[i];
    parts[n - 1] = w - s;
    return parts;
}

}  // namespace detail

struct ReplicaExpansion {
    WeightedGraph graph;
    Partition partition;             // replica -> its single cluster
    std::vector<NodeId> base_of;     // replica -> original node
};

// Each node with K memberships becomes K replicas, one per cluster, and every
// incident edge weight is split so that the fragments of an original edge sum
// back to it exactly: w_{ik,jl} = w_ij / (K_i * K_j).
inline ReplicaExpansion replica_expand(const WeightedGraph& graph, const Cover& cover) {
    if (cover.memberships.size() != graph.n_nodes())
        throw std::invalid_argument("cover does not cover graph");
    cover.validate();
    std::vector<std::vector<NodeId>> replica_id(graph.n_nodes());
    std::vector<std::vector<ClusterId>> clusters(graph.n_nodes());
    ReplicaExpansion out;
    NodeId next = 0;
    for (NodeId u = 0; u < graph.n_nodes(); ++u)
        for (ClusterId c : cover.memberships[u]) {
            replica_id[u].push_back(next++);
            clusters[u].push_back(c);
            out.base_of.push_back(u);
        }
    out.partition.assignment.resize(next);
    for (NodeId u = 0; u < graph.n_nodes(); ++u)
        for (std::size_t i = 0; i < replica_id[u].size(); ++i)
            out.partition.assignment[replica_id[u][i]] = clusters[u][i];
    out.partition.normalize();

    std::vector<Edge> edges;
    for (const Edge& e : graph.edges()) {
        std::size_t ku = replica_id[e.u].size(), kv = replica_id[e.v].size();
        if (e.u == e.v) {
            if (ku == 1) {
                edges.push_back({replica_id[e.u][0], replica_id[e.u][0], e.weight});
            } else {
                // self-loop fragments: one per unordered replica pair, distinct
                // pairs carry double share so strengths are conserved
                std::size_t n_frag = ku * ku;
                auto parts = detail::exact_split(e.weight, n_frag);
                std::size_t idx = 0;
                std::vector<Edge> frag;
                for (std::size_t i = 0; i < ku; ++i)
                    frag.push_back({replica_id[e.u][i], replica_id[e.u][i], parts[idx++]});
                for (std::size_t i = 0; i < ku; ++i)
                    for (std::size_t j = i + 1; j < ku; ++j) {
                        double p = parts[idx++] + parts[idx++];
                        frag.push_back({replica_id[e.u][i], replica_id[e.u][j], p});
                    }
                for (Edge& f : frag) edges.push_back(f);
            }
        } else if (ku == 1 && kv == 1) {
            edges.push_back({replica_id[e.u][0], replica_id[e.v][0], e.weight});
        } else {
            auto parts = detail::exact_split(e.weight, ku * kv);
            std::size_t idx = 0;
            for (std::size_t i = 0; i < ku; ++i)
                for (std::size_t j = 0; j < kv; ++j)
                    edges.push_back({replica_id[e.u][i], replica_id[e.v][j], parts[idx++]});
        }
    }
    out.graph = WeightedGraph::from_edges(next, std::move(edges));
    return out;
}

// Newman modularity of the replica-expanded graph; equals modularity() exactly
// when the cover is a partition.
inline double extended_modularity(const WeightedGraph& graph, const Cover& cover) {
    ReplicaExpansion rx = replica_expand(graph, cover);
    return modularity(rx.graph, rx.partition);
}

}  // namespace scinet
