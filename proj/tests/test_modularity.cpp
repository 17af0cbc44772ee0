#include <catch2/catch_amalgamated.hpp>

#include <scinet/graph.hpp>
#include <scinet/modularity.hpp>

#include <random>

#include "oracles.hpp"

using namespace scinet;

namespace {

WeightedGraph random_graph(std::mt19937_64& rng, std::size_t n, double p_edge) {
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::uniform_real_distribution<double> wdist(0.1, 4.0);
    std::vector<Edge> es;
    for (NodeId u = 0; u < n; ++u)
        for (NodeId v = u; v < n; ++v)
            if (coin(rng) < p_edge) es.push_back({u, v, wdist(rng)});
    return WeightedGraph::from_edges(n, std::move(es));
}

Partition random_partition(std::mt19937_64& rng, std::size_t n, std::size_t k) {
    Partition p;
    std::uniform_int_distribution<ClusterId> pick(0, static_cast<ClusterId>(k - 1));
    for (std::size_t i = 0; i < n; ++i) p.assignment.push_back(pick(rng));
    p.normalize();
    return p;
}

}  // namespace

TEST_CASE("modularity on hand-checked graphs") {
    SECTION("triangle, every node its own cluster") {
        WeightedGraph g = WeightedGraph::from_edges(3, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}});
        Partition p{{0, 1, 2}};
        REQUIRE(modularity(g, p) == Catch::Approx(-1.0 / 3.0));
    }
    SECTION("two disjoint triangles split by triangle") {
        WeightedGraph g = WeightedGraph::from_edges(
            6, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}, {3, 4, 1}, {4, 5, 1}, {3, 5, 1}});
        Partition p{{0, 0, 0, 1, 1, 1}};
        REQUIRE(modularity(g, p) == Catch::Approx(0.5));
    }
    SECTION("everything in one cluster is always zero") {
        std::mt19937_64 rng(3);
        for (int t = 0; t < 20; ++t) {
            WeightedGraph g = random_graph(rng, 6, 0.6);
            if (g.total_weight() <= 0.0) continue;
            Partition p{std::vector<ClusterId>(6, 0)};
            REQUIRE(modularity(g, p) == Catch::Approx(0.0).margin(1e-12));
        }
    }
    SECTION("scale invariance") {
        WeightedGraph g = WeightedGraph::from_edges(
            5, {{0, 1, 1.0}, {1, 2, 0.5}, {2, 3, 2.0}, {3, 4, 1.0}, {0, 4, 0.25}, {1, 1, 3.0}});
        Partition p{{0, 0, 1, 1, 0}};
        std::vector<Edge> scaled;
        for (const Edge& e : g.edges()) scaled.push_back({e.u, e.v, 7.0 * e.weight});
        WeightedGraph g7 = WeightedGraph::from_edges(5, std::move(scaled));
        REQUIRE(modularity(g7, p) == Catch::Approx(modularity(g, p)).epsilon(1e-12));
    }
    SECTION("size mismatch and empty graph are rejected") {
        WeightedGraph g = WeightedGraph::from_edges(3, {{0, 1, 1}});
        REQUIRE_THROWS(modularity(g, Partition{{0, 1}}));
        WeightedGraph empty = WeightedGraph::from_edges(3, {});
        REQUIRE_THROWS(modularity(empty, Partition{{0, 1, 2}}));
    }
}

TEST_CASE("modularity matches the pairwise oracle on random graphs") {
    std::mt19937_64 rng(1234);
    int checked = 0;
    for (int t = 0; t < 300; ++t) {
        std::size_t n = std::uniform_int_distribution<std::size_t>(2, 8)(rng);
        WeightedGraph g = random_graph(rng, n, 0.5);
        if (g.total_weight() <= 0.0) continue;
        Partition p = random_partition(rng, n, std::min<std::size_t>(n, 4));
        REQUIRE(modularity(g, p) ==
                Catch::Approx(oracle::modularity_pairwise(g, p)).margin(1e-12));
        ++checked;
    }
    REQUIRE(checked > 200);
}

TEST_CASE("barber modularity on hand-checked bipartite graphs") {
    SECTION("complete 2x2, one cluster") {
        BipartiteGraph g = BipartiteGraph::from_edges(
            2, 2, {{0, 0, 1}, {0, 1, 1}, {1, 0, 1}, {1, 1, 1}});
        Partition p{{0, 0, 0, 0}};
        REQUIRE(barber_modularity(g, p) == Catch::Approx(0.0).margin(1e-12));
    }
    SECTION("complete 2x2, articles split from concepts") {
        BipartiteGraph g = BipartiteGraph::from_edges(
            2, 2, {{0, 0, 1}, {0, 1, 1}, {1, 0, 1}, {1, 1, 1}});
        Partition p{{0, 0, 1, 1}};  // no same-cluster article/concept pair
        REQUIRE(barber_modularity(g, p) == Catch::Approx(0.0).margin(1e-12));
    }
    SECTION("two disjoint edges, one cluster per component") {
        BipartiteGraph g = BipartiteGraph::from_edges(2, 2, {{0, 0, 1}, {1, 1, 1}});
        Partition p{{0, 1, 0, 1}};
        REQUIRE(barber_modularity(g, p) == Catch::Approx(0.5));
    }
}

TEST_CASE("barber modularity matches the pairwise oracle") {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::uniform_real_distribution<double> wdist(0.2, 3.0);
    int checked = 0;
    for (int t = 0; t < 200; ++t) {
        std::size_t na = std::uniform_int_distribution<std::size_t>(1, 5)(rng);
        std::size_t nc = std::uniform_int_distribution<std::size_t>(1, 5)(rng);
        std::vector<Edge> es;
        for (NodeId a = 0; a < na; ++a)
            for (NodeId c = 0; c < nc; ++c)
                if (coin(rng) < 0.6) es.push_back({a, c, wdist(rng)});
        if (es.empty()) continue;
        BipartiteGraph g = BipartiteGraph::from_edges(na, nc, std::move(es));
        Partition p = random_partition(rng, na + nc, 3);
        REQUIRE(barber_modularity(g, p) ==
                Catch::Approx(oracle::barber_pairwise(g, p)).margin(1e-12));
        ++checked;
    }
    REQUIRE(checked > 150);
}

TEST_CASE("replica expansion conserves weight and reduces on partitions") {
    std::mt19937_64 rng(5150);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (int t = 0; t < 100; ++t) {
        std::size_t n = std::uniform_int_distribution<std::size_t>(2, 7)(rng);
        WeightedGraph g = random_graph(rng, n, 0.6);
        if (g.total_weight() <= 0.0) continue;
        Cover cover;
        for (std::size_t u = 0; u < n; ++u) {
            std::set<ClusterId> m{static_cast<ClusterId>(u % 3)};
            if (coin(rng) < 0.4) m.insert(static_cast<ClusterId>((u + 1) % 3));
            cover.memberships.push_back(m);
        }
        ReplicaExpansion rx = replica_expand(g, cover);
        REQUIRE(rx.graph.total_weight() ==
                Catch::Approx(g.total_weight()).epsilon(1e-14));
        // replica strengths sum back to the base node's strength
        std::vector<double> acc(n, 0.0);
        for (NodeId r = 0; r < rx.graph.n_nodes(); ++r)
            acc[rx.base_of[r]] += rx.graph.strength(r);
        for (NodeId u = 0; u < n; ++u)
            REQUIRE(acc[u] == Catch::Approx(g.strength(u)).margin(1e-12));
        REQUIRE(extended_modularity(g, cover) ==
                Catch::Approx(oracle::extended_pairwise(g, cover)).margin(1e-12));
    }
}

TEST_CASE("extended modularity is bit-identical to modularity on partitions") {
    std::mt19937_64 rng(99);
    for (int t = 0; t < 50; ++t) {
        std::size_t n = std::uniform_int_distribution<std::size_t>(2, 8)(rng);
        WeightedGraph g = random_graph(rng, n, 0.6);
        if (g.total_weight() <= 0.0) continue;
        Partition p = random_partition(rng, n, 3);
        REQUIRE(extended_modularity(g, Cover::from_partition(p)) == modularity(g, p));
    }
}

TEST_CASE("exact_split fragments sum back exactly") {
    std::mt19937_64 rng(31337);
    std::uniform_real_distribution<double> wdist(1e-6, 1e6);
    for (int t = 0; t < 2000; ++t) {
        double w = wdist(rng);
        std::size_t n = std::uniform_int_distribution<std::size_t>(1, 30)(rng);
        auto parts = detail::exact_split(w, n);
        REQUIRE(parts.size() == n);
        double s = 0.0;
        for (double p : parts) s += p;
        REQUIRE(s == w);
    }
}
