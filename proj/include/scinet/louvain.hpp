#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "scinet/graph.hpp"
#include "scinet/modularity.hpp"

namespace scinet {

struct LouvainConfig {
    std::uint64_t seed = 1;
    NullModel null_model = NullModel::newman;
    double min_gain = 1e-9;
    int max_passes = 100;
};

struct LouvainResult {
    Partition partition;
    std::vector<Partition> levels;  // base-node partition after each level
    std::vector<double> q_trace;    // strictly increasing across levels
    double seconds = 0.0;
};

namespace detail {

// Working view for the two-phase loop. The null model is expressed through a
// per-node mass pair (a, d): expected intra weight of cluster c is
// A_c * D_c / N^2. Newman uses a = d = strength with N = 2W; Barber uses the
// type-split strengths with N = W.
struct LouvainEngine {
    std::size_t n;
    std::vector<std::vector<std::pair<NodeId, double>>> adj;  // no self-loops here
    std::vector<double> self_loop;
    std::vector<double> mass_a, mass_d;
    double w_total;
    double null_denom;  // N^2

    double quality(const std::vector<ClusterId>& comm, std::size_t k) const {
        std::vector<double> intra(k, 0.0), acc_a(k, 0.0), acc_d(k, 0.0);
        for (NodeId u = 0; u < n; ++u) {
            acc_a[comm[u]] += mass_a[u];
            acc_d[comm[u]] += mass_d[u];
            intra[comm[u]] += self_loop[u];
            for (const auto& [v, w] : adj[u])
                if (v > u && comm[v] == comm[u]) intra[comm[u]] += w;
        }
        double q = 0.0;
        for (std::size_t c = 0; c < k; ++c)
            q += intra[c] / w_total - acc_a[c] * acc_d[c] / null_denom;
        return q;
    }

    // One level of local moves; returns the converged community assignment.
    std::vector<ClusterId> local_moves(std::mt19937_64& rng, double min_gain, int max_passes) {
        std::vector<ClusterId> comm(n);
        std::iota(comm.begin(), comm.end(), 0u);
        std::vector<double> acc_a(mass_a), acc_d(mass_d);
        std::vector<NodeId> order(n);
        std::iota(order.begin(), order.end(), 0u);
        std::vector<double> w_to(n, 0.0);
        for (int pass = 0; pass < max_passes; ++pass) {
            std::shuffle(order.begin(), order.end(), rng);
            bool moved = false;
            for (NodeId i : order) {
                ClusterId c0 = comm[i];
                acc_a[c0] -= mass_a[i];
                acc_d[c0] -= mass_d[i];
                std::vector<ClusterId> touched;
                for (const auto& [v, w] : adj[i]) {
                    ClusterId c = comm[v];
                    if (w_to[c] == 0.0) touched.push_back(c);
                    w_to[c] += w;
                }
                auto gain = [&](ClusterId c) {
                    return w_to[c] / w_total -
                           (mass_a[i] * acc_d[c] + mass_d[i] * acc_a[c]) / null_denom;
                };
                // ties go to the lowest community id, for reproducibility
                ClusterId best = c0;
                double best_gain = gain(c0);
                for (ClusterId c : touched) {
                    double g = gain(c);
                    if (g > best_gain + 1e-15) {
                        best = c;
                        best_gain = g;
                    } else if (g >= best_gain - 1e-15 && c < best) {
                        best = c;
                        best_gain = std::max(best_gain, g);
                    }
                }
                if (best != c0 && best_gain - gain(c0) >= min_gain) {
                    comm[i] = best;
                    moved = true;
                }
                acc_a[comm[i]] += mass_a[i];
                acc_d[comm[i]] += mass_d[i];
                for (const auto& [v, w2] : adj[i]) {
                    (void)w2;
                    w_to[comm[v]] = 0.0;
                    w_to[c0] = 0.0;
                }
            }
            if (!moved) break;
        }
        return comm;
    }

    // Aggregate communities into super-nodes; comm must be dense 0..k-1.
    LouvainEngine aggregate(const std::vector<ClusterId>& comm, std::size_t k) const {
        LouvainEngine g;
        g.n = k;
        g.w_total = w_total;
        g.null_denom = null_denom;
        g.adj.assign(k, {});
        g.self_loop.assign(k, 0.0);
        g.mass_a.assign(k, 0.0);
        g.mass_d.assign(k, 0.0);
        std::vector<std::map<NodeId, double>> acc(k);
        for (NodeId u = 0; u < n; ++u) {
            ClusterId cu = comm[u];
            g.mass_a[cu] += mass_a[u];
            g.mass_d[cu] += mass_d[u];
            g.self_loop[cu] += self_loop[u];
            for (const auto& [v, w] : adj[u]) {
                if (v < u) continue;
                ClusterId cv = comm[v];
                if (cu == cv)
                    g.self_loop[cu] += w;
                else
                    acc[std::min(cu, cv)][std::max(cu, cv)] += w;
            }
        }
        for (ClusterId a = 0; a < k; ++a)
            for (const auto& [b, w] : acc[a]) {
                g.adj[a].push_back({b, w});
                g.adj[b].push_back({a, w});
            }
        return g;
    }
};

inline LouvainEngine make_engine(const WeightedGraph& graph) {
    LouvainEngine e;
    e.n = graph.n_nodes();
    e.w_total = graph.total_weight();
    e.null_denom = 4.0 * e.w_total * e.w_total;
    e.adj.assign(e.n, {});
    e.self_loop.assign(e.n, 0.0);
    e.mass_a.resize(e.n);
    e.mass_d.resize(e.n);
    for (const Edge& edge : graph.edges()) {
        if (edge.u == edge.v) {
            e.self_loop[edge.u] += edge.weight;
        } else {
            e.adj[edge.u].push_back({edge.v, edge.weight});
            e.adj[edge.v].push_back({edge.u, edge.weight});
        }
    }
    for (NodeId u = 0; u < e.n; ++u) e.mass_a[u] = e.mass_d[u] = graph.strength(u);
    return e;
}

inline LouvainEngine make_engine(const BipartiteGraph& bigraph, NullModel null_model) {
    std::size_t na = bigraph.n_articles();
    WeightedGraph combined = bigraph.as_unipartite();
    LouvainEngine e = make_engine(combined);
    if (null_model == NullModel::barber) {
        e.null_denom = e.w_total * e.w_total;
        for (NodeId u = 0; u < e.n; ++u) {
            if (u < na)
                e.mass_d[u] = 0.0;  // article: only its article-side strength counts
            else
                e.mass_a[u] = 0.0;
        }
    }
    return e;
}

inline LouvainResult run_louvain(LouvainEngine engine, const LouvainConfig& cfg) {
    auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(cfg.seed);
    std::size_t n_base = engine.n;
    if (engine.w_total <= 0.0) {
        // edgeless graph: everything in one cluster, flat trace
        LouvainResult r;
        Partition p;
        p.assignment.assign(n_base, 0u);
        r.levels.push_back(p);
        r.q_trace.push_back(0.0);
        r.partition = p;
        r.seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return r;
    }
    std::vector<ClusterId> base_comm(n_base);
    std::iota(base_comm.begin(), base_comm.end(), 0u);

    LouvainResult result;
    double prev_q = -2.0;
    while (true) {
        std::vector<ClusterId> comm = engine.local_moves(rng, cfg.min_gain, cfg.max_passes);
        // densify community ids
        std::vector<ClusterId> remap(engine.n, static_cast<ClusterId>(-1));
        ClusterId k = 0;
        for (NodeId u = 0; u < engine.n; ++u)
            if (remap[comm[u]] == static_cast<ClusterId>(-1)) remap[comm[u]] = k++;
        for (NodeId u = 0; u < engine.n; ++u) comm[u] = remap[comm[u]];
        double q = engine.quality(comm, k);
        if (!result.q_trace.empty() && q <= prev_q + cfg.min_gain) break;
        for (ClusterId& c : base_comm) c = comm[c];
        Partition level;
        level.assignment = base_comm;
        level.normalize();
        result.levels.push_back(level);
        result.q_trace.push_back(q);
        prev_q = q;
        if (k == engine.n) break;  // no merge happened, fixed point
        engine = engine.aggregate(comm, k);
    }
    if (result.levels.empty()) {
        Partition p;
        p.assignment.assign(n_base, 0u);
        p.normalize();
        result.levels.push_back(p);
        result.q_trace.push_back(0.0);
    }
    result.partition = result.levels.back();
    result.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

}  // namespace detail

inline LouvainResult louvain(const WeightedGraph& graph, const LouvainConfig& cfg = {}) {
    if (graph.n_nodes() == 0) throw std::invalid_argument("empty graph");
    if (cfg.null_model == NullModel::barber)
        throw std::invalid_argument("barber null model requires a bipartite graph");
    return detail::run_louvain(detail::make_engine(graph), cfg);
}

inline LouvainResult louvain(const BipartiteGraph& bigraph, const LouvainConfig& cfg = {}) {
    if (bigraph.n_articles() + bigraph.n_concepts() == 0)
        throw std::invalid_argument("empty graph");
    return detail::run_louvain(detail::make_engine(bigraph, cfg.null_model), cfg);
}

// Restriction of a joint article+concept partition to the article side.
inline Partition article_partition(const Partition& joint, std::size_t n_articles) {
    Partition p;
    p.assignment.assign(joint.assignment.begin(), joint.assignment.begin() + n_articles);
    p.normalize();
    return p;
}

template <typename GraphT>
std::vector<LouvainResult> run_ensemble(const GraphT& graph, const LouvainConfig& cfg,
                                        std::size_t runs) {
    if (runs < 1) throw std::invalid_argument("runs must be >= 1");
    std::vector<LouvainResult> out;
    out.reserve(runs);
    for (std::size_t r = 0; r < runs; ++r) {
        LouvainConfig c = cfg;
        c.seed = cfg.seed + r;
        out.push_back(louvain(graph, c));
    }
    return out;
}

}  // namespace scinet
