#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace scinet {

using NodeId = std::uint32_t;
using ClusterId = std::uint32_t;

struct Edge {
    NodeId u;
    NodeId v;
    double weight;
};

// Undirected weighted graph. Edges are stored canonically with u <= v;
// a self-loop (u == v) keeps its weight once in the edge list and counts
// twice in the node strength.
class WeightedGraph {
public:
    WeightedGraph() = default;

    static WeightedGraph from_edges(std::size_t n_nodes, std::vector<Edge> raw) {
        WeightedGraph g;
        g.n_nodes_ = n_nodes;
        std::map<std::pair<NodeId, NodeId>, double> acc;
        for (const Edge& e : raw) {
            if (e.u >= n_nodes || e.v >= n_nodes)
                throw std::invalid_argument("edge endpoint out of range");
            if (e.weight <= 0.0)
                throw std::invalid_argument("edge weight must be positive");
            NodeId a = std::min(e.u, e.v), b = std::max(e.u, e.v);
            acc[{a, b}] += e.weight;
        }
        g.edges_.reserve(acc.size());
        for (const auto& [key, w] : acc) g.edges_.push_back({key.first, key.second, w});
        g.build_adjacency();
        return g;
    }

    std::size_t n_nodes() const { return n_nodes_; }
    std::size_t n_edges() const { return edges_.size(); }
    const std::vector<Edge>& edges() const { return edges_; }

    const std::vector<std::pair<NodeId, double>>& neighbors(NodeId u) const {
        return adjacency_[u];
    }

    // Strength counts self-loops twice; sum of strengths = 2 * total_weight().
    double strength(NodeId u) const { return strength_[u]; }
    double self_loop(NodeId u) const { return self_loop_[u]; }
    double total_weight() const { return total_weight_; }

    std::vector<std::string> node_labels;  // optional, empty or size n_nodes

private:
    void build_adjacency() {
        adjacency_.assign(n_nodes_, {});
        strength_.assign(n_nodes_, 0.0);
        self_loop_.assign(n_nodes_, 0.0);
        total_weight_ = 0.0;
        for (const Edge& e : edges_) {
            total_weight_ += e.weight;
            if (e.u == e.v) {
                adjacency_[e.u].push_back({e.u, e.weight});
                self_loop_[e.u] += e.weight;
                strength_[e.u] += 2.0 * e.weight;
            } else {
                adjacency_[e.u].push_back({e.v, e.weight});
                adjacency_[e.v].push_back({e.u, e.weight});
                strength_[e.u] += e.weight;
                strength_[e.v] += e.weight;
            }
        }
    }

    std::size_t n_nodes_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::vector<std::pair<NodeId, double>>> adjacency_;
    std::vector<double> strength_;
    std::vector<double> self_loop_;
    double total_weight_ = 0.0;
};

// Two-type graph; edges only connect an article node to a concept node.
class BipartiteGraph {
public:
    BipartiteGraph() = default;

    static BipartiteGraph from_edges(std::size_t n_articles, std::size_t n_concepts,
                                     std::vector<Edge> raw) {
        BipartiteGraph g;
        g.n_articles_ = n_articles;
        g.n_concepts_ = n_concepts;
        for (const Edge& e : raw) {
            if (e.u >= n_articles || e.v >= n_concepts)
                throw std::invalid_argument("bipartite edge endpoint out of range");
            if (e.weight <= 0.0)
                throw std::invalid_argument("edge weight must be positive");
        }
        g.edges_ = std::move(raw);
        g.build_index();
        return g;
    }

    std::size_t n_articles() const { return n_articles_; }
    std::size_t n_concepts() const { return n_concepts_; }
    std::size_t n_edges() const { return edges_.size(); }
    const std::vector<Edge>& edges() const { return edges_; }

    const std::vector<std::pair<NodeId, double>>& concepts_of(NodeId article) const {
        return article_adj_[article];
    }
    const std::vector<std::pair<NodeId, double>>& articles_of(NodeId concept_id) const {
        return concept_adj_[concept_id];
    }

    double article_strength(NodeId a) const { return article_strength_[a]; }
    double concept_strength(NodeId c) const { return concept_strength_[c]; }
    double total_weight() const { return total_weight_; }

    // View as an ordinary weighted graph: articles 0..n_a-1, concepts n_a..n_a+n_c-1.
    WeightedGraph as_unipartite() const {
        std::vector<Edge> es;
        es.reserve(edges_.size());
        for (const Edge& e : edges_)
            es.push_back({e.u, static_cast<NodeId>(n_articles_ + e.v), e.weight});
        return WeightedGraph::from_edges(n_articles_ + n_concepts_, std::move(es));
    }

private:
    void build_index() {
        article_adj_.assign(n_articles_, {});
        concept_adj_.assign(n_concepts_, {});
        article_strength_.assign(n_articles_, 0.0);
        concept_strength_.assign(n_concepts_, 0.0);
        total_weight_ = 0.0;
        for (const Edge& e : edges_) {
            article_adj_[e.u].push_back({e.v, e.weight});
            concept_adj_[e.v].push_back({e.u, e.weight});
            article_strength_[e.u] += e.weight;
            concept_strength_[e.v] += e.weight;
            total_weight_ += e.weight;
        }
    }

    std::size_t n_articles_ = 0;
    std::size_t n_concepts_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::vector<std::pair<NodeId, double>>> article_adj_;
    std::vector<std::vector<std::pair<NodeId, double>>> concept_adj_;
    std::vector<double> article_strength_;
    std::vector<double> concept_strength_;
    double total_weight_ = 0.0;
};

// Disjoint node -> cluster map with dense cluster ids 0..K-1.
struct Partition {
    std::vector<ClusterId> assignment;

    std::size_t n_nodes() const { return assignment.size(); }

    std::size_t n_clusters() const {
        ClusterId m = 0;
        for (ClusterId c : assignment) m = std::max(m, static_cast<ClusterId>(c + 1));
        return m;
    }

    // Remap cluster ids to 0..K-1 in first-appearance order.
    void normalize() {
        std::map<ClusterId, ClusterId> remap;
        for (ClusterId& c : assignment) {
            auto it = remap.find(c);
            if (it == remap.end()) {
                ClusterId fresh = static_cast<ClusterId>(remap.size());
                remap.emplace(c, fresh);
                c = fresh;
            } else {
                c = it->second;
            }
        }
    }

    bool operator==(const Partition& o) const = default;
};

// Node -> non-empty set of clusters; generalizes Partition.
struct Cover {
    std::vector<std::set<ClusterId>> memberships;

    std::size_t n_nodes() const { return memberships.size(); }

    std::size_t n_clusters() const {
        ClusterId m = 0;
        for (const auto& s : memberships)
            for (ClusterId c : s) m = std::max(m, static_cast<ClusterId>(c + 1));
        return m;
    }

    bool is_partition() const {
        for (const auto& s : memberships)
            if (s.size() != 1) return false;
        return true;
    }

    Partition to_partition() const {
        Partition p;
        p.assignment.reserve(memberships.size());
        for (const auto& s : memberships) {
            if (s.size() != 1)
                throw std::invalid_argument("cover with shared nodes is not a partition");
            p.assignment.push_back(*s.begin());
        }
        return p;
    }

    static Cover from_partition(const Partition& p) {
        Cover c;
        c.memberships.reserve(p.assignment.size());
        for (ClusterId a : p.assignment) c.memberships.push_back({a});
        return c;
    }

    void validate() const {
        for (const auto& s : memberships)
            if (s.empty()) throw std::invalid_argument("cover node without membership");
    }

    bool operator==(const Cover& o) const = default;
};

inline double link_density(const WeightedGraph& g) {
    if (g.n_nodes() < 2) throw std::invalid_argument("link density needs >= 2 nodes");
    std::size_t loops = 0;
    for (const Edge& e : g.edges())
        if (e.u == e.v) ++loops;
    double pairs = 0.5 * static_cast<double>(g.n_nodes()) * static_cast<double>(g.n_nodes() - 1);
    return static_cast<double>(g.n_edges() - loops) / pairs;
}

}  // namespace scinet
