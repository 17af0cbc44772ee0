#include <catch2/catch_amalgamated.hpp>

#include <scinet/benchgen.hpp>
#include <scinet/build.hpp>
#include <scinet/graph.hpp>

#include <cmath>

using namespace scinet;

TEST_CASE("planted graph honors the requested overlap exactly") {
    PlantedGraphConfig cfg;
    cfg.n_nodes = 200;
    cfg.n_communities = 5;
    cfg.overlap_fraction = 0.15;
    cfg.seed = 3;
    PlantedGraph pg = planted_graph(cfg);
    std::size_t doubled = 0;
    for (const auto& m : pg.ground_truth.memberships) {
        REQUIRE((m.size() == 1 || m.size() == 2));
        if (m.size() == 2) ++doubled;
    }
    REQUIRE(doubled == 30);
    REQUIRE(pg.graph.n_nodes() == 200);
}

TEST_CASE("planted graph is deterministic in the seed") {
    PlantedGraphConfig cfg;
    cfg.n_nodes = 90;
    cfg.seed = 11;
    PlantedGraph a = planted_graph(cfg);
    PlantedGraph b = planted_graph(cfg);
    REQUIRE(a.ground_truth == b.ground_truth);
    REQUIRE(a.graph.n_edges() == b.graph.n_edges());
    for (std::size_t i = 0; i < a.graph.n_edges(); ++i) {
        REQUIRE(a.graph.edges()[i].u == b.graph.edges()[i].u);
        REQUIRE(a.graph.edges()[i].v == b.graph.edges()[i].v);
    }
    cfg.seed = 12;
    PlantedGraph c = planted_graph(cfg);
    REQUIRE(a.graph.n_edges() != c.graph.n_edges());  // overwhelmingly likely
}

TEST_CASE("edge count sits within three sigma of its expectation") {
    PlantedGraphConfig cfg;
    cfg.n_nodes = 300;
    cfg.n_communities = 6;
    cfg.overlap_fraction = 0.1;
    cfg.p_in = 0.25;
    cfg.p_out = 0.03;
    cfg.seed = 21;
    PlantedGraph pg = planted_graph(cfg);
    double mean = 0.0, var = 0.0;
    const auto& gt = pg.ground_truth.memberships;
    for (NodeId u = 0; u < cfg.n_nodes; ++u)
        for (NodeId v = u + 1; v < cfg.n_nodes; ++v) {
            bool share = false;
            for (ClusterId c : gt[u])
                if (gt[v].count(c)) share = true;
            double p = share ? cfg.p_in : cfg.p_out;
            mean += p;
            var += p * (1.0 - p);
        }
    double sd = std::sqrt(var);
    REQUIRE(std::abs(static_cast<double>(pg.graph.n_edges()) - mean) <= 3.0 * sd);
}

TEST_CASE("p_out of zero keeps all edges inside communities") {
    PlantedGraphConfig cfg;
    cfg.n_nodes = 150;
    cfg.n_communities = 5;
    cfg.p_in = 0.4;
    cfg.p_out = 0.0;
    cfg.seed = 5;
    PlantedGraph pg = planted_graph(cfg);
    for (const Edge& e : pg.graph.edges()) {
        bool share = false;
        for (ClusterId c : pg.ground_truth.memberships[e.u])
            if (pg.ground_truth.memberships[e.v].count(c)) share = true;
        REQUIRE(share);
    }
}

TEST_CASE("planted config validation") {
    PlantedGraphConfig cfg;
    cfg.n_communities = 0;
    REQUIRE_THROWS(planted_graph(cfg));
    cfg = {};
    cfg.p_out = 0.5;
    cfg.p_in = 0.4;
    REQUIRE_THROWS(planted_graph(cfg));
    cfg = {};
    cfg.n_communities = 1;
    cfg.overlap_fraction = 0.2;
    REQUIRE_THROWS(planted_graph(cfg));
}

TEST_CASE("synthetic corpus structure") {
    SyntheticCorpusConfig cfg;
    cfg.n_articles = 400;
    cfg.seed = 8;
    Corpus c = synthetic_corpus(cfg);
    REQUIRE(c.articles.size() == 400);
    REQUIRE(c.concepts.size() == cfg.n_topics * cfg.concepts_per_topic + cfg.n_generic_concepts);
    std::size_t n_expert = 0;
    for (const Concept& cc : c.concepts)
        if (cc.expert_generic) ++n_expert;
    REQUIRE(n_expert == cfg.n_generic_concepts);
    std::uint32_t generic_base =
        static_cast<std::uint32_t>(cfg.n_topics * cfg.concepts_per_topic);
    for (const Article& a : c.articles) {
        std::size_t topic_uses = 0;
        for (const ConceptUse& u : a.concepts) {
            REQUIRE(u.tf >= 1);
            REQUIRE(u.tf <= cfg.tf_support);
            if (u.concept_id < generic_base) ++topic_uses;
        }
        REQUIRE(topic_uses == cfg.concepts_per_article);
        // all topic concepts of one article come from a single topic pool
        std::set<std::uint32_t> topics;
        for (const ConceptUse& u : a.concepts)
            if (u.concept_id < generic_base)
                topics.insert(u.concept_id / static_cast<std::uint32_t>(cfg.concepts_per_topic));
        REQUIRE(topics.size() == 1);
    }
}

TEST_CASE("generic_rate one puts every generic concept in every article") {
    SyntheticCorpusConfig cfg;
    cfg.n_articles = 60;
    cfg.generic_rate = 1.0;
    cfg.seed = 2;
    Corpus c = synthetic_corpus(cfg);
    std::uint32_t generic_base =
        static_cast<std::uint32_t>(cfg.n_topics * cfg.concepts_per_topic);
    for (const Article& a : c.articles) {
        std::size_t generics = 0;
        for (const ConceptUse& u : a.concepts)
            if (u.concept_id >= generic_base) ++generics;
        REQUIRE(generics == cfg.n_generic_concepts);
    }
    // articles then pairwise share concepts: the projection is complete
    WeightedGraph g = project_unipartite(build_bipartite(c));
    REQUIRE(g.n_edges() == 60u * 59u / 2u);
}

TEST_CASE("synthetic corpus is deterministic in the seed") {
    SyntheticCorpusConfig cfg;
    cfg.n_articles = 100;
    cfg.seed = 33;
    REQUIRE(synthetic_corpus(cfg) == synthetic_corpus(cfg));
    cfg.seed = 34;
    REQUIRE_FALSE(synthetic_corpus(SyntheticCorpusConfig{}) == synthetic_corpus(cfg));
}
