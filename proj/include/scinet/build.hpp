#pragma once

#include <cmath>
#include <unordered_map>
#include <vector>

#include "scinet/corpus.hpp"
#include "scinet/graph.hpp"

namespace scinet {

enum class BipartiteWeighting { binary, tf };
enum class ProjectionWeighting { shared_count, cosine };

inline BipartiteGraph build_bipartite(const Corpus& corpus,
                                      BipartiteWeighting weighting = BipartiteWeighting::binary) {
    if (corpus.articles.empty()) throw std::invalid_argument("empty corpus");
    std::vector<Edge> edges;
    for (NodeId a = 0; a < corpus.articles.size(); ++a)
        for (const ConceptUse& u : corpus.articles[a].concepts) {
            double w = weighting == BipartiteWeighting::tf ? static_cast<double>(u.tf) : 1.0;
            edges.push_back({a, u.concept_id, w});
        }
    return BipartiteGraph::from_edges(corpus.articles.size(), corpus.concepts.size(),
                                      std::move(edges));
}

// Article-similarity projection: edge (a, b) iff the articles share a concept.
// Accumulates per concept over article pairs; dense triangular storage below
// ~8k nodes, hash map above.
inline WeightedGraph project_unipartite(const BipartiteGraph& bigraph,
                                        ProjectionWeighting weighting =
                                            ProjectionWeighting::shared_count) {
    std::size_t n = bigraph.n_articles();
    std::vector<Edge> edges;
    auto emit = [&](NodeId a, NodeId b, double shared) {
        double w = shared;
        if (weighting == ProjectionWeighting::cosine) {
            double da = static_cast<double>(bigraph.concepts_of(a).size());
            double db = static_cast<double>(bigraph.concepts_of(b).size());
            w = shared / std::sqrt(da * db);
        }
        edges.push_back({a, b, w});
    };
    if (n <= 8192) {
        std::vector<double> tri(n * (n - 1) / 2, 0.0);
        auto at = [&](std::size_t a, std::size_t b) -> double& {  // requires a < b
            return tri[a * (n - 1) - a * (a - 1) / 2 + (b - a - 1)];
        };
        for (NodeId c = 0; c < bigraph.n_concepts(); ++c) {
            const auto& arts = bigraph.articles_of(c);
            for (std::size_t i = 0; i < arts.size(); ++i)
                for (std::size_t j = i + 1; j < arts.size(); ++j) {
                    NodeId a = arts[i].first, b = arts[j].first;
                    if (a > b) std::swap(a, b);
                    at(a, b) += 1.0;
                }
        }
        for (NodeId a = 0; a < n; ++a)
            for (NodeId b = a + 1; b < n; ++b)
                if (at(a, b) > 0.0) emit(a, b, at(a, b));
    } else {
        std::unordered_map<std::uint64_t, double> acc;
        for (NodeId c = 0; c < bigraph.n_concepts(); ++c) {
            const auto& arts = bigraph.articles_of(c);
            for (std::size_t i = 0; i < arts.size(); ++i)
                for (std::size_t j = i + 1; j < arts.size(); ++j) {
                    NodeId a = arts[i].first, b = arts[j].first;
                    if (a > b) std::swap(a, b);
                    acc[(static_cast<std::uint64_t>(a) << 32) | b] += 1.0;
                }
        }
        for (const auto& [key, shared] : acc)
            emit(static_cast<NodeId>(key >> 32), static_cast<NodeId>(key & 0xffffffffu), shared);
    }
    return WeightedGraph::from_edges(n, std::move(edges));
}

}  // namespace scinet
