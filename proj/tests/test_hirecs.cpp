#include <catch2/catch_amalgamated.hpp>

#include <scinet/graph.hpp>
#include <scinet/hirecs.hpp>
#include <scinet/modularity.hpp>
#include <scinet/benchgen.hpp>
#include <scinet/metrics.hpp>

#include <random>
#include <set>

using namespace scinet;

namespace {

// collect the final clusters as sets of base nodes
std::set<std::set<NodeId>> cluster_sets(const Cover& cover) {
    std::map<ClusterId, std::set<NodeId>> by_cluster;
    for (NodeId u = 0; u < cover.memberships.size(); ++u)
        for (ClusterId c : cover.memberships[u]) by_cluster[c].insert(u);
    std::set<std::set<NodeId>> out;
    for (auto& [c, s] : by_cluster) out.insert(std::move(s));
    return out;
}

WeightedGraph bowtie() {
    // two triangles sharing node 2
    return WeightedGraph::from_edges(
        5, {{0, 1, 1}, {0, 2, 1}, {1, 2, 1}, {2, 3, 1}, {2, 4, 1}, {3, 4, 1}});
}

WeightedGraph random_graph(std::mt19937_64& rng, std::size_t n, double p_edge) {
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::uniform_real_distribution<double> wdist(0.2, 3.0);
    std::vector<Edge> es;
    for (NodeId u = 0; u < n; ++u)
        for (NodeId v = u + 1; v < n; ++v)
            if (coin(rng) < p_edge) es.push_back({u, v, wdist(rng)});
    return WeightedGraph::from_edges(n, std::move(es));
}

}  // namespace

TEST_CASE("mmg candidate sets") {
    SECTION("isolated edge has gain 1/2") {
        WeightedGraph g = WeightedGraph::from_edges(2, {{0, 1, 1.0}});
        MMGState st = mmg_candidates(g, 0);
        REQUIRE(st.candidates == std::vector<NodeId>{1});
        REQUIRE(st.gain == Catch::Approx(0.5));
    }
    SECTION("triangle node ties between both neighbors") {
        WeightedGraph g = WeightedGraph::from_edges(3, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}});
        MMGState st = mmg_candidates(g, 0);
        REQUIRE(st.candidates == std::vector<NodeId>{1, 2});
    }
    SECTION("no positive gain leaves the set empty") {
        WeightedGraph g =
            WeightedGraph::from_edges(2, {{0, 1, 1.0}, {0, 0, 10.0}, {1, 1, 10.0}});
        MMGState st = mmg_candidates(g, 0);
        REQUIRE(st.candidates.empty());
        REQUIRE(st.gain == 0.0);
    }
}

TEST_CASE("shared node replicates into both adjacent clusters") {
    HirecsResult r = hirecs(bowtie());
    REQUIRE(r.iterations == 2);
    auto clusters = cluster_sets(r.hierarchy.base_cover);
    REQUIRE(clusters == std::set<std::set<NodeId>>{{0, 1, 2}, {2, 3, 4}});
    // node 2 is the only overlap
    for (NodeId u = 0; u < 5; ++u)
        REQUIRE(r.hierarchy.base_cover.memberships[u].size() == (u == 2 ? 2u : 1u));
}

TEST_CASE("two disjoint edges merge pairwise in one iteration") {
    WeightedGraph g = WeightedGraph::from_edges(4, {{0, 1, 1}, {2, 3, 1}});
    HirecsResult r = hirecs(g);
    REQUIRE(r.iterations >= 1);
    auto clusters = cluster_sets(r.hierarchy.base_cover);
    REQUIRE(clusters == std::set<std::set<NodeId>>{{0, 1}, {2, 3}});
    REQUIRE(r.replications.empty());
}

TEST_CASE("star center becomes a shared node across all leaves") {
    WeightedGraph g = WeightedGraph::from_edges(4, {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}});
    HirecsResult r = hirecs(g);
    const Cover& first = r.hierarchy.levels.front();
    REQUIRE(first.memberships[0].size() == 3);
    for (NodeId leaf : {1, 2, 3}) REQUIRE(first.memberships[leaf].size() == 1);
    auto clusters = cluster_sets(first);
    REQUIRE(clusters == std::set<std::set<NodeId>>{{0, 1}, {0, 2}, {0, 3}});
    bool saw_k3 = false;
    for (const auto& ev : r.replications)
        if (ev.level == 0 && ev.node == 0 && ev.k == 3) saw_k3 = true;
    REQUIRE(saw_k3);
}

TEST_CASE("triangle collapses to a single cluster without sharing") {
    WeightedGraph g = WeightedGraph::from_edges(3, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}});
    HirecsResult r = hirecs(g);
    auto clusters = cluster_sets(r.hierarchy.base_cover);
    REQUIRE(clusters == std::set<std::set<NodeId>>{{0, 1, 2}});
    REQUIRE(r.replications.empty());
}

TEST_CASE("no positive gain means no merges") {
    WeightedGraph g = WeightedGraph::from_edges(3, {{0, 0, 1.0}, {1, 1, 1.0}, {2, 2, 1.0}});
    HirecsResult r = hirecs(g);
    REQUIRE(r.iterations == 0);
    auto clusters = cluster_sets(r.hierarchy.base_cover);
    REQUIRE(clusters == std::set<std::set<NodeId>>{{0}, {1}, {2}});
}

TEST_CASE("two triangles joined by a bridge resolve into the triangles") {
    WeightedGraph g = WeightedGraph::from_edges(
        6, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}, {3, 4, 1}, {4, 5, 1}, {3, 5, 1}, {2, 3, 1}});
    HirecsResult r = hirecs(g);
    auto clusters = cluster_sets(r.hierarchy.base_cover);
    REQUIRE(clusters == std::set<std::set<NodeId>>{{0, 1, 2}, {3, 4, 5}});
}

TEST_CASE("cluster quality improves across levels on the worked examples") {
    for (const WeightedGraph& g :
         {bowtie(), WeightedGraph::from_edges(6, {{0, 1, 1},
                                                  {1, 2, 1},
                                                  {0, 2, 1},
                                                  {3, 4, 1},
                                                  {4, 5, 1},
                                                  {3, 5, 1},
                                                  {2, 3, 1}})}) {
        HirecsResult r = hirecs(g);
        double prev = -1e9;
        for (const Cover& level : r.hierarchy.levels) {
            double q = extended_modularity(g, level);
            REQUIRE(q >= prev - 1e-12);
            prev = q;
        }
    }
}

TEST_CASE("membership rescoring recovers planted overlap") {
    PlantedGraphConfig cfg;
    cfg.n_nodes = 128;
    cfg.n_communities = 4;
    cfg.overlap_fraction = 0.1;
    cfg.p_in = 0.9;
    cfg.p_out = 0.02;
    cfg.seed = 6;
    PlantedGraph pg = planted_graph(cfg);
    HirecsResult r = hirecs(pg.graph);
    REQUIRE(overlapping_nmi(r.hierarchy.base_cover, pg.ground_truth) > 0.9);
    std::size_t shared = 0;
    for (const auto& m : r.hierarchy.base_cover.memberships)
        if (m.size() > 1) ++shared;
    REQUIRE(shared >= 8);  // 13 planted overlap nodes, most should surface
    REQUIRE_THROWS(hirecs(pg.graph, 0.0));
    REQUIRE_THROWS(hirecs(pg.graph, 1.5));
}

TEST_CASE("hirecs is deterministic and audits replications exactly") {
    std::mt19937_64 rng(2024);
    for (int t = 0; t < 50; ++t) {
        std::size_t n = std::uniform_int_distribution<std::size_t>(2, 12)(rng);
        WeightedGraph g = random_graph(rng, n, 0.45);
        HirecsResult a = hirecs(g);
        HirecsResult b = hirecs(g);
        REQUIRE(a.hierarchy.base_cover == b.hierarchy.base_cover);
        REQUIRE(a.iterations == b.iterations);
        REQUIRE(a.merges.size() == b.merges.size());
        for (const auto& ev : a.replications) {
            REQUIRE(ev.k >= 2);
            REQUIRE(ev.fragment_sum == ev.weight);  // exact, not approximate
        }
        // every base node is covered
        a.hierarchy.base_cover.validate();
        REQUIRE(a.hierarchy.base_cover.n_nodes() == n);
    }
}
