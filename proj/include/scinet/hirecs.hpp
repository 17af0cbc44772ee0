#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <vector>

#include "scinet/graph.hpp"
#include "scinet/modularity.hpp"

namespace scinet {

struct Hierarchy {
    // Cumulative base-node cover after each merging iteration, finest first.
    std::vector<Cover> levels;
    // Per level: current node -> constituent base nodes.
    std::vector<std::vector<std::vector<NodeId>>> node_maps;
    // Flat output cover over base nodes (ungrouped leftovers become singletons).
    Cover base_cover;
};

struct MutualMerge {
    std::size_t level;
    NodeId a;
    NodeId b;      // current-graph ids at that level
    double gain;
};

struct ReplicationEvent {
    std::size_t level;
    NodeId node;
    NodeId neighbor;
    std::size_t k;
    double weight;
    double fragment_sum;  // must equal weight exactly
};

struct HirecsResult {
    Hierarchy hierarchy;
    std::vector<MutualMerge> merges;
    std::vector<ReplicationEvent> replications;
    std::size_t iterations = 0;
};

namespace detail {

struct HirecsGraph {
    std::size_t n = 0;
    std::vector<std::vector<std::pair<NodeId, double>>> adj;  // no self entries
    std::vector<double> self_loop;
    std::vector<double> strength;  // self-loops twice
    double w_total = 0.0;
    std::vector<std::vector<NodeId>> bases;  // sorted
};

inline HirecsGraph hirecs_graph_from(const WeightedGraph& g) {
    HirecsGraph h;
    h.n = g.n_nodes();
    h.adj.assign(h.n, {});
    h.self_loop.assign(h.n, 0.0);
    h.strength.assign(h.n, 0.0);
    h.w_total = g.total_weight();
    for (const Edge& e : g.edges()) {
        if (e.u == e.v) {
            h.self_loop[e.u] += e.weight;
        } else {
            h.adj[e.u].push_back({e.v, e.weight});
            h.adj[e.v].push_back({e.u, e.weight});
        }
    }
    for (NodeId u = 0; u < h.n; ++u) h.strength[u] = g.strength(u);
    h.bases.resize(h.n);
    for (NodeId u = 0; u < h.n; ++u) h.bases[u] = {u};
    return h;
}

// Mutual-best-gain structure of one iteration.
struct MutualGraph {
    std::vector<std::vector<NodeId>> partners;  // sorted, symmetric
    std::vector<double> best_gain;
};

// Pairwise singleton-merge gain under the standard null model:
// dQ(i,j) = w_ij / W - s_i s_j / (2 W^2).
inline MutualGraph mutual_best(const HirecsGraph& g, double tie_tol = 1e-12) {
    std::vector<std::vector<NodeId>> best(g.n);
    std::vector<double> best_gain(g.n, 0.0);
    for (NodeId i = 0; i < g.n; ++i) {
        double gmax = 0.0;
        std::vector<std::pair<NodeId, double>> gains;
        gains.reserve(g.adj[i].size());
        for (const auto& [j, w] : g.adj[i]) {
            double dq = w / g.w_total -
                        g.strength[i] * g.strength[j] / (2.0 * g.w_total * g.w_total);
            gains.push_back({j, dq});
            gmax = std::max(gmax, dq);
        }
        if (gmax <= 0.0) continue;
        best_gain[i] = gmax;
        double tol = tie_tol * std::max(1.0, std::abs(gmax));
        for (const auto& [j, dq] : gains)
            if (dq >= gmax - tol) best[i].push_back(j);
        std::sort(best[i].begin(), best[i].end());
    }
    MutualGraph m;
    m.partners.assign(g.n, {});
    m.best_gain = best_gain;
    for (NodeId i = 0; i < g.n; ++i)
        for (NodeId j : best[i])
            if (j > i && std::binary_search(best[j].begin(), best[j].end(), i)) {
                m.partners[i].push_back(j);
                m.partners[j].push_back(i);
            }
    for (auto& p : m.partners) std::sort(p.begin(), p.end());
    return m;
}

// Component labels of the mutual graph with `removed` taken out; -1 for
// removed or isolated-from-M nodes.
inline std::vector<int> mutual_components(const MutualGraph& m, const std::vector<bool>& removed) {
    std::size_t n = m.partners.size();
    std::vector<int> comp(n, -1);
    int next = 0;
    for (NodeId s = 0; s < n; ++s) {
        if (removed[s] || comp[s] != -1 || m.partners[s].empty()) continue;
        comp[s] = next;
        std::vector<NodeId> stack{s};
        while (!stack.empty()) {
            NodeId u = stack.back();
            stack.pop_back();
            for (NodeId v : m.partners[u]) {
                if (removed[v] || comp[v] != -1) continue;
                comp[v] = next;
                stack.push_back(v);
            }
        }
        ++next;
    }
    return comp;
}

struct IterationPlan {
    // new-node id per cluster; each cluster lists its member current nodes
    std::vector<std::vector<NodeId>> clusters;
    // per current node: the clusters it joins (>=2 means shared/replicated)
    std::vector<std::vector<std::size_t>> joined;
    std::vector<NodeId> ungrouped;
    bool merged_any = false;
};

// Resolve one iteration's merges. Cores are the connected components of the
// mutual-best relation after removing shared nodes; a node is shared when its
// mutual partners split into >= 2 cores without it, and then joins each of
// those clusters as a replica.
inline IterationPlan resolve_merges(const MutualGraph& m) {
    std::size_t n = m.partners.size();
    std::vector<bool> shared(n, false);
    // initial candidates: separators of their own mutual component
    for (NodeId i = 0; i < n; ++i) {
        if (m.partners[i].size() < 2) continue;
        std::vector<bool> removed(n, false);
        removed[i] = true;
        std::vector<int> comp = mutual_components(m, removed);
        std::set<int> parts;
        for (NodeId j : m.partners[i])
            parts.insert(comp[j]);  // partner isolated from M-minus-i gets -1... handled below
        // partners that became isolated still form their own group
        int pseudo = -2;
        parts.erase(-1);
        for (NodeId j : m.partners[i])
            if (comp[j] == -1) parts.insert(pseudo--);
        if (parts.size() >= 2) shared[i] = true;
    }
    // demote shared nodes whose partners no longer span >= 2 cores
    std::vector<int> core;
    while (true) {
        core = mutual_components(m, shared);
        bool changed = false;
        for (NodeId i = 0; i < n; ++i) {
            if (!shared[i]) continue;
            std::set<int> cores_hit;
            for (NodeId j : m.partners[i])
                if (!shared[j] && core[j] != -1) cores_hit.insert(core[j]);
            if (cores_hit.size() < 2) {
                shared[i] = false;
                changed = true;
            }
        }
        if (!changed) break;
    }

    IterationPlan plan;
    plan.joined.assign(n, {});
    int n_cores = 0;
    for (NodeId u = 0; u < n; ++u) n_cores = std::max(n_cores, core[u] + 1);
    std::vector<std::size_t> core_cluster(n_cores, static_cast<std::size_t>(-1));
    std::vector<std::vector<NodeId>> core_members(n_cores);
    for (NodeId u = 0; u < n; ++u)
        if (!shared[u] && core[u] != -1) core_members[core[u]].push_back(u);
    // shared nodes join every cluster holding one of their partners
    std::vector<std::vector<NodeId>> core_replicas(n_cores);
    for (NodeId i = 0; i < n; ++i) {
        if (!shared[i]) continue;
        std::set<int> cores_hit;
        for (NodeId j : m.partners[i])
            if (!shared[j] && core[j] != -1) cores_hit.insert(core[j]);
        for (int c : cores_hit) core_replicas[c].push_back(i);
    }
    for (int c = 0; c < n_cores; ++c) {
        if (core_members[c].size() + core_replicas[c].size() < 2) continue;  // nothing merged
        core_cluster[c] = plan.clusters.size();
        std::vector<NodeId> members = core_members[c];
        members.insert(members.end(), core_replicas[c].begin(), core_replicas[c].end());
        std::sort(members.begin(), members.end());
        plan.clusters.push_back(std::move(members));
    }
    for (NodeId u = 0; u < n; ++u) {
        if (shared[u]) {
            std::set<int> cores_hit;
            for (NodeId j : m.partners[u])
                if (!shared[j] && core[j] != -1) cores_hit.insert(core[j]);
            for (int c : cores_hit)
                if (core_cluster[c] != static_cast<std::size_t>(-1))
                    plan.joined[u].push_back(core_cluster[c]);
        } else if (core[u] != -1 && core_cluster[core[u]] != static_cast<std::size_t>(-1)) {
            plan.joined[u].push_back(core_cluster[core[u]]);
        }
        if (plan.joined[u].empty()) plan.ungrouped.push_back(u);
    }
    plan.merged_any = !plan.clusters.empty();
    return plan;
}

inline std::vector<double> exact_weight_split(double w, std::size_t n) {
    return scinet::detail::exact_split(w, n);
}

// Final membership pass over the finished hierarchy: score every base node's
// singleton attachment gain dq(u, c) = w(u, c)/W - s_u S_c / 2W^2 against each
// top-level cluster and grant membership to all clusters within `tolerance` of
// the best positive gain. Aggregation freezes early side picks of nodes pulled
// almost equally by two clusters; rescoring against the finished clusters is
// what turns those near-symmetric attachments into shared nodes.
inline Cover assign_memberships(const WeightedGraph& graph, const Cover& cover,
                                double tolerance) {
    std::size_t n = graph.n_nodes();
    double w_total = graph.total_weight();
    Cover out;
    out.memberships.assign(n, {});
    if (w_total <= 0.0) {
        ClusterId next = 0;
        for (auto& m : out.memberships) m.insert(next++);
        return out;
    }
    std::size_t k = cover.n_clusters();
    std::vector<double> cluster_strength(k, 0.0);
    for (NodeId u = 0; u < n; ++u)
        for (ClusterId c : cover.memberships[u]) cluster_strength[c] += graph.strength(u);
    std::vector<double> w_to(k, 0.0);
    for (NodeId u = 0; u < n; ++u) {
        std::vector<ClusterId> touched;
        for (const auto& [v, w] : graph.neighbors(u)) {
            if (v == u) continue;
            for (ClusterId c : cover.memberships[v]) {
                if (w_to[c] == 0.0) touched.push_back(c);
                w_to[c] += w;
            }
        }
        double su = graph.strength(u);
        double best = 0.0;
        std::vector<std::pair<ClusterId, double>> gains;
        for (ClusterId c : touched) {
            double sc = cluster_strength[c] - (cover.memberships[u].count(c) ? su : 0.0);
            double dq = w_to[c] / w_total - su * sc / (2.0 * w_total * w_total);
            gains.push_back({c, dq});
            best = std::max(best, dq);
            w_to[c] = 0.0;
        }
        if (best > 0.0)
            for (const auto& [c, dq] : gains)
                if (dq > 0.0 && dq >= tolerance * best) out.memberships[u].insert(c);
    }
    ClusterId next = static_cast<ClusterId>(k);
    for (auto& m : out.memberships)
        if (m.empty()) m.insert(next++);
    return out;
}

}  // namespace detail

// Deterministic agglomerative overlapping clustering by mutual modularity
// gain, with replica nodes for shared members. `membership_tolerance` controls
// the final rescoring pass: a node joins every cluster whose attachment gain
// is at least that fraction of its best (1.0 keeps only exact ties).
inline HirecsResult hirecs(const WeightedGraph& graph, double membership_tolerance = 0.6) {
    if (!(membership_tolerance > 0.0 && membership_tolerance <= 1.0))
        throw std::invalid_argument("membership_tolerance in (0,1]");
    if (graph.n_nodes() == 0) throw std::invalid_argument("empty graph");
    HirecsResult result;
    detail::HirecsGraph cur = detail::hirecs_graph_from(graph);
    std::size_t n_base = graph.n_nodes();

    while (true) {
        if (cur.w_total <= 0.0) break;
        detail::MutualGraph m = detail::mutual_best(cur);
        detail::IterationPlan plan = detail::resolve_merges(m);
        if (!plan.merged_any) break;
        std::size_t level = result.iterations;

        for (NodeId i = 0; i < cur.n; ++i)
            for (NodeId j : m.partners[i])
                if (j > i) result.merges.push_back({level, i, j, m.best_gain[i]});

        // new node ids: clusters first, then carried-over ungrouped nodes
        std::size_t n_clusters = plan.clusters.size();
        std::vector<std::vector<NodeId>> targets(cur.n);  // current node -> new node ids
        for (NodeId u = 0; u < cur.n; ++u)
            for (std::size_t c : plan.joined[u]) targets[u].push_back(static_cast<NodeId>(c));
        std::size_t next_id = n_clusters;
        for (NodeId u : plan.ungrouped) targets[u].push_back(static_cast<NodeId>(next_id++));
        std::size_t n_new = next_id;

        // replication audit: one event per incident link of a shared node
        for (NodeId u = 0; u < cur.n; ++u) {
            std::size_t k = targets[u].size();
            if (k < 2) continue;
            for (const auto& [v, w] : cur.adj[u]) {
                auto parts = detail::exact_weight_split(w, k);
                double sum = 0.0;
                for (double p : parts) sum += p;
                result.replications.push_back({level, u, v, k, w, sum});
            }
        }

        // aggregate: fragments w / (K_u * K_v) routed to the target clusters
        std::map<std::pair<NodeId, NodeId>, double> acc;  // canonical u <= v
        auto deposit = [&](NodeId a, NodeId b, double w) {
            acc[{std::min(a, b), std::max(a, b)}] += w;
        };
        for (NodeId u = 0; u < cur.n; ++u) {
            if (cur.self_loop[u] > 0.0) {
                std::size_t k = targets[u].size();
                if (k == 1) {
                    deposit(targets[u][0], targets[u][0], cur.self_loop[u]);
                } else {
                    auto parts = detail::exact_weight_split(cur.self_loop[u], k * k);
                    std::size_t idx = 0;
                    for (std::size_t i = 0; i < k; ++i)
                        deposit(targets[u][i], targets[u][i], parts[idx++]);
                    for (std::size_t i = 0; i < k; ++i)
                        for (std::size_t j = i + 1; j < k; ++j) {
                            double p = parts[idx++];
                            p += parts[idx++];
                            deposit(targets[u][i], targets[u][j], p);
                        }
                }
            }
            for (const auto& [v, w] : cur.adj[u]) {
                if (v < u) continue;
                std::size_t ku = targets[u].size(), kv = targets[v].size();
                if (ku == 1 && kv == 1) {
                    deposit(targets[u][0], targets[v][0], w);
                } else {
                    auto parts = detail::exact_weight_split(w, ku * kv);
                    std::size_t idx = 0;
                    for (std::size_t i = 0; i < ku; ++i)
                        for (std::size_t j = 0; j < kv; ++j)
                            deposit(targets[u][i], targets[v][j], parts[idx++]);
                }
            }
        }

        detail::HirecsGraph nxt;
        nxt.n = n_new;
        nxt.adj.assign(n_new, {});
        nxt.self_loop.assign(n_new, 0.0);
        nxt.strength.assign(n_new, 0.0);
        nxt.w_total = 0.0;
        for (const auto& [key, w] : acc) {
            nxt.w_total += w;
            if (key.first == key.second) {
                nxt.self_loop[key.first] += w;
                nxt.strength[key.first] += 2.0 * w;
            } else {
                nxt.adj[key.first].push_back({key.second, w});
                nxt.adj[key.second].push_back({key.first, w});
                nxt.strength[key.first] += w;
                nxt.strength[key.second] += w;
            }
        }
        nxt.bases.assign(n_new, {});
        for (NodeId u = 0; u < cur.n; ++u)
            for (NodeId t : targets[u])
                nxt.bases[t].insert(nxt.bases[t].end(), cur.bases[u].begin(), cur.bases[u].end());
        for (auto& b : nxt.bases) {
            std::sort(b.begin(), b.end());
            b.erase(std::unique(b.begin(), b.end()), b.end());
        }

        // record the induced base-node cover after this iteration
        Cover cov;
        cov.memberships.assign(n_base, {});
        for (NodeId t = 0; t < n_new; ++t)
            for (NodeId b : nxt.bases[t]) cov.memberships[b].insert(static_cast<ClusterId>(t));
        result.hierarchy.levels.push_back(cov);
        result.hierarchy.node_maps.push_back(nxt.bases);

        cur = std::move(nxt);
        ++result.iterations;
    }

    Cover final_cover;
    final_cover.memberships.assign(n_base, {});
    for (NodeId t = 0; t < cur.n; ++t)
        for (NodeId b : cur.bases[t]) final_cover.memberships[b].insert(static_cast<ClusterId>(t));
    if (result.hierarchy.levels.empty()) {
        result.hierarchy.levels.push_back(final_cover);
        result.hierarchy.node_maps.push_back(cur.bases);
    }
    result.hierarchy.base_cover =
        detail::assign_memberships(graph, final_cover, membership_tolerance);
    return result;
}

// MMG candidate set of a single node, for inspection and tests.
struct MMGState {
    std::vector<NodeId> candidates;  // argmax set, empty when no positive gain
    double gain = 0.0;
};

inline MMGState mmg_candidates(const WeightedGraph& graph, NodeId node, double tie_tol = 1e-12) {
    if (node >= graph.n_nodes()) throw std::invalid_argument("node out of range");
    detail::HirecsGraph g = detail::hirecs_graph_from(graph);
    MMGState st;
    double w_total = g.w_total;
    double gmax = 0.0;
    std::vector<std::pair<NodeId, double>> gains;
    for (const auto& [j, w] : g.adj[node]) {
        double dq = w / w_total - g.strength[node] * g.strength[j] / (2.0 * w_total * w_total);
        gains.push_back({j, dq});
        gmax = std::max(gmax, dq);
    }
    if (gmax <= 0.0) return st;
    st.gain = gmax;
    double tol = tie_tol * std::max(1.0, std::abs(gmax));
    for (const auto& [j, dq] : gains)
        if (dq >= gmax - tol) st.candidates.push_back(j);
    std::sort(st.candidates.begin(), st.candidates.end());
    return st;
}

}  // namespace scinet
