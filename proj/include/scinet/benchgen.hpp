#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "scinet/corpus.hpp"
#include "scinet/entropy.hpp"
#include "scinet/graph.hpp"

namespace scinet {

struct PlantedGraphConfig {
    std::size_t n_nodes = 128;
    std::size_t n_communities = 4;
    double overlap_fraction = 0.1;  // fraction of nodes with 2 memberships
    double p_in = 0.3;
    double p_out = 0.02;
    std::uint64_t seed = 1;

    void validate() const {
        if (n_nodes == 0 || n_communities == 0 || n_communities > n_nodes)
            throw std::invalid_argument("bad planted graph sizes");
        if (!(0.0 <= p_out && p_out < p_in && p_in <= 1.0))
            throw std::invalid_argument("require 0 <= p_out < p_in <= 1");
        if (!(0.0 <= overlap_fraction && overlap_fraction < 1.0))
            throw std::invalid_argument("overlap_fraction in [0,1)");
        if (overlap_fraction > 0.0 && n_communities < 2)
            throw std::invalid_argument("overlap needs >= 2 communities");
    }
};

struct PlantedGraph {
    WeightedGraph graph;
    Cover ground_truth;
};

// Equal-size planted-partition model with pairwise overlap: every node gets
// one community (round robin), the first round(f*n) nodes a second one; edge
// probability p_in when sharing a community, p_out otherwise.
inline PlantedGraph planted_graph(const PlantedGraphConfig& cfg) {
    cfg.validate();
    std::mt19937_64 rng(cfg.seed);
    std::size_t n = cfg.n_nodes, k = cfg.n_communities;
    Cover gt;
    gt.memberships.assign(n, {});
    for (NodeId u = 0; u < n; ++u) gt.memberships[u].insert(static_cast<ClusterId>(u % k));
    std::size_t n_overlap = static_cast<std::size_t>(std::llround(cfg.overlap_fraction * n));
    std::vector<NodeId> order(n);
    std::iota(order.begin(), order.end(), 0u);
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t i = 0; i < n_overlap; ++i) {
        NodeId u = order[i];
        ClusterId own = *gt.memberships[u].begin();
        ClusterId extra = static_cast<ClusterId>(
            std::uniform_int_distribution<std::size_t>(0, k - 2)(rng));
        if (extra >= own) ++extra;
        gt.memberships[u].insert(extra);
    }
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<Edge> edges;
    for (NodeId u = 0; u < n; ++u)
        for (NodeId v = u + 1; v < n; ++v) {
            bool share = false;
            for (ClusterId c : gt.memberships[u])
                if (gt.memberships[v].count(c)) share = true;
            double p = share ? cfg.p_in : cfg.p_out;
            if (unif(rng) < p) edges.push_back({u, v, 1.0});
        }
    PlantedGraph out;
    out.graph = WeightedGraph::from_edges(n, std::move(edges));
    out.ground_truth = std::move(gt);
    return out;
}

struct SyntheticCorpusConfig {
    std::size_t n_articles = 2000;
    std::size_t n_topics = 10;
    std::size_t concepts_per_topic = 20;
    std::size_t concepts_per_article = 8;
    std::size_t n_generic_concepts = 10;
    double generic_rate = 0.9;  // probability a generic concept appears in an article
    // TF values are drawn from the maxent family p(k) ~ k^-gamma e^-lambda k,
    // so a frequent concept's empirical distribution hugs the S = S^max line.
    double tf_gamma = 0.6;
    double tf_lambda = 0.12;
    std::uint32_t tf_support = 40;
    std::uint64_t seed = 1;

    void validate() const {
        if (n_articles == 0 || n_topics == 0 || concepts_per_topic == 0 ||
            concepts_per_article == 0)
            throw std::invalid_argument("counts must be positive");
        if (concepts_per_article > concepts_per_topic)
            throw std::invalid_argument("concepts_per_article exceeds topic pool");
        if (!(generic_rate > 0.0 && generic_rate <= 1.0))
            throw std::invalid_argument("generic_rate in (0,1]");
        if (tf_support < 1) throw std::invalid_argument("tf_support >= 1");
    }
};

namespace detail {

class TFSampler {
public:
    TFSampler(double gamma, double lambda, std::uint32_t support) {
        MaxEntParams p;
        p.gamma = gamma;
        p.lambda = lambda;
        p.support_max = support;
        cdf_ = p.pmf();
        for (std::size_t i = 1; i < cdf_.size(); ++i) cdf_[i] += cdf_[i - 1];
    }

    std::uint32_t operator()(std::mt19937_64& rng) const {
        double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
        return static_cast<std::uint32_t>(std::distance(cdf_.begin(), it)) + 1;
    }

private:
    std::vector<double> cdf_;
};

}  // namespace detail

// Articles draw topic concepts from their topic's pool plus each generic
// concept independently with generic_rate. Generic concepts are flagged
// expert_generic, giving planted ground truth for the entropy classifier.
inline Corpus synthetic_corpus(const SyntheticCorpusConfig& cfg) {
    cfg.validate();
    std::mt19937_64 rng(cfg.seed);
    Corpus corpus;
    for (std::size_t t = 0; t < cfg.n_topics; ++t)
        for (std::size_t c = 0; c < cfg.concepts_per_topic; ++c)
            corpus.concepts.push_back({"t" + std::to_string(t) + "_c" + std::to_string(c), false});
    std::uint32_t generic_base = static_cast<std::uint32_t>(corpus.concepts.size());
    for (std::size_t g = 0; g < cfg.n_generic_concepts; ++g)
        corpus.concepts.push_back({"generic_" + std::to_string(g), true});

    detail::TFSampler tf(cfg.tf_gamma, cfg.tf_lambda, cfg.tf_support);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (std::size_t a = 0; a < cfg.n_articles; ++a) {
        std::size_t topic = a % cfg.n_topics;
        Article article;
        article.external_id = "a" + std::to_string(a);
        std::vector<std::uint32_t> pool(cfg.concepts_per_topic);
        std::iota(pool.begin(), pool.end(),
                  static_cast<std::uint32_t>(topic * cfg.concepts_per_topic));
        std::shuffle(pool.begin(), pool.end(), rng);
        for (std::size_t i = 0; i < cfg.concepts_per_article; ++i)
            article.concepts.push_back({pool[i], tf(rng)});
        for (std::size_t g = 0; g < cfg.n_generic_concepts; ++g)
            if (unif(rng) < cfg.generic_rate)
                article.concepts.push_back({generic_base + static_cast<std::uint32_t>(g), tf(rng)});
        std::sort(article.concepts.begin(), article.concepts.end(),
                  [](const ConceptUse& x, const ConceptUse& y) { return x.concept_id < y.concept_id; });
        corpus.articles.push_back(std::move(article));
    }
    corpus.validate();
    return corpus;
}

}  // namespace scinet
