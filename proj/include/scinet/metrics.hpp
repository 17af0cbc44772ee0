#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>
#include <vector>

#include "scinet/graph.hpp"

namespace scinet {

namespace detail {

inline void check_same_nodes(std::size_t a, std::size_t b) {
    if (a != b) throw std::invalid_argument("mismatched node sets");
    if (a == 0) throw std::invalid_argument("empty node set");
}

inline std::map<std::pair<ClusterId, ClusterId>, std::size_t> contingency(const Partition& p1,
                                                                          const Partition& p2) {
    std::map<std::pair<ClusterId, ClusterId>, std::size_t> table;
    for (std::size_t i = 0; i < p1.assignment.size(); ++i)
        ++table[{p1.assignment[i], p2.assignment[i]}];
    return table;
}

inline double entropy_of_sizes(const std::vector<std::size_t>& sizes, double n) {
    double h = 0.0;
    for (std::size_t s : sizes)
        if (s > 0) {
            double p = static_cast<double>(s) / n;
            h -= p * std::log(p);
        }
    return h;
}

}  // namespace detail

// R = (agreeing pairs) / C(n,2): pairs co-clustered in both plus pairs
// separated in both.
inline double rand_index(const Partition& p1, const Partition& p2) {
    detail::check_same_nodes(p1.n_nodes(), p2.n_nodes());
    double n = static_cast<double>(p1.n_nodes());
    if (p1.n_nodes() < 2) return 1.0;
    auto table = detail::contingency(p1, p2);
    std::vector<double> row(p1.n_clusters(), 0.0), col(p2.n_clusters(), 0.0);
    double both = 0.0;
    for (const auto& [key, c] : table) {
        double cc = static_cast<double>(c);
        row[key.first] += cc;
        col[key.second] += cc;
        both += cc * (cc - 1.0) / 2.0;
    }
    double sum_row = 0.0, sum_col = 0.0;
    for (double r : row) sum_row += r * (r - 1.0) / 2.0;
    for (double c : col) sum_col += c * (c - 1.0) / 2.0;
    double pairs = n * (n - 1.0) / 2.0;
    double separated_both = pairs - sum_row - sum_col + both;
    return (both + separated_both) / pairs;
}

// Mutual information of the joint label distribution, normalized by
// max(H1, H2). Two trivial partitions are identical, hence 1.
inline double nmi(const Partition& p1, const Partition& p2) {
    detail::check_same_nodes(p1.n_nodes(), p2.n_nodes());
    double n = static_cast<double>(p1.n_nodes());
    std::vector<std::size_t> row(p1.n_clusters(), 0), col(p2.n_clusters(), 0);
    for (ClusterId c : p1.assignment) ++row[c];
    for (ClusterId c : p2.assignment) ++col[c];
    double h1 = detail::entropy_of_sizes(row, n);
    double h2 = detail::entropy_of_sizes(col, n);
    double hmax = std::max(h1, h2);
    if (hmax <= 0.0) return 1.0;
    auto table = detail::contingency(p1, p2);
    double mi = 0.0;
    for (const auto& [key, c] : table) {
        double pij = static_cast<double>(c) / n;
        double pi = static_cast<double>(row[key.first]) / n;
        double pj = static_cast<double>(col[key.second]) / n;
        mi += pij * std::log(pij / (pi * pj));
    }
    return std::clamp(mi / hmax, 0.0, 1.0);
}

namespace detail {

// h(p) for one cell of a binary joint distribution
inline double cell_h(double count, double n) {
    if (count <= 0.0) return 0.0;
    double p = count / n;
    return -p * std::log(p);
}

// Conditional entropy H(X_k | Y_l) of binary membership indicators, with the
// usual acceptance constraint h(1,1)+h(0,0) >= h(0,1)+h(1,0); returns H(X_k)
// when no candidate is accepted.
inline double best_match_conditional(const std::set<NodeId>& xk,
                                     const std::vector<std::set<NodeId>>& ys, std::size_t n_nodes) {
    double n = static_cast<double>(n_nodes);
    double hx = cell_h(static_cast<double>(xk.size()), n) +
                cell_h(static_cast<double>(n_nodes - xk.size()), n);
    double best = hx;
    for (const auto& yl : ys) {
        std::size_t n11 = 0;
        for (NodeId u : xk)
            if (yl.count(u)) ++n11;
        std::size_t n10 = xk.size() - n11;
        std::size_t n01 = yl.size() - n11;
        std::size_t n00 = n_nodes - n11 - n10 - n01;
        double h11 = cell_h(static_cast<double>(n11), n);
        double h10 = cell_h(static_cast<double>(n10), n);
        double h01 = cell_h(static_cast<double>(n01), n);
        double h00 = cell_h(static_cast<double>(n00), n);
        if (h11 + h00 < h01 + h10) continue;  // reject degenerate matches
        double hy = cell_h(static_cast<double>(yl.size()), n) +
                    cell_h(static_cast<double>(n_nodes - yl.size()), n);
        double cond = h11 + h10 + h01 + h00 - hy;
        best = std::min(best, cond);
    }
    return best;
}

inline std::vector<std::set<NodeId>> clusters_of(const Cover& c) {
    std::vector<std::set<NodeId>> out(c.n_clusters());
    for (NodeId u = 0; u < c.memberships.size(); ++u)
        for (ClusterId k : c.memberships[u]) out[k].insert(u);
    // drop empty ids left by sparse labels
    out.erase(std::remove_if(out.begin(), out.end(),
                             [](const std::set<NodeId>& s) { return s.empty(); }),
              out.end());
    return out;
}

// Indicator-variable NMI with best-match conditional entropies and max
// normalization (the McDaid correction of the LFK measure).
inline double indicator_cover_nmi(const Cover& c1, const Cover& c2) {
    std::size_t n = c1.n_nodes();
    auto xs = clusters_of(c1);
    auto ys = clusters_of(c2);
    double nn = static_cast<double>(n);
    double hx = 0.0, hy = 0.0, hx_given_y = 0.0, hy_given_x = 0.0;
    for (const auto& xk : xs) {
        hx += cell_h(static_cast<double>(xk.size()), nn) +
              cell_h(static_cast<double>(n - xk.size()), nn);
        hx_given_y += best_match_conditional(xk, ys, n);
    }
    for (const auto& yl : ys) {
        hy += cell_h(static_cast<double>(yl.size()), nn) +
              cell_h(static_cast<double>(n - yl.size()), nn);
        hy_given_x += best_match_conditional(yl, xs, n);
    }
    double hmax = std::max(hx, hy);
    if (hmax <= 0.0) return 1.0;
    double mi = 0.5 * ((hx - hx_given_y) + (hy - hy_given_x));
    return std::clamp(mi / hmax, 0.0, 1.0);
}

inline Cover rcoms_attempt(const std::vector<std::size_t>& sizes, const WeightedGraph& graph,
                           std::mt19937_64& rng);

}  // namespace detail

// Overlapping NMI. Partition-shaped inputs take the standard NMI route so the
// measure is exactly compatible with nmi(); genuine covers use the
// indicator-variable best-match construction.
inline double overlapping_nmi(const Cover& c1, const Cover& c2) {
    detail::check_same_nodes(c1.n_nodes(), c2.n_nodes());
    c1.validate();
    c2.validate();
    if (c1.is_partition() && c2.is_partition())
        return nmi(c1.to_partition(), c2.to_partition());
    return detail::indicator_cover_nmi(c1, c2);
}

// Random-communities baseline: keeps the ground truth's cluster count and
// size multiset, fills each cluster with a randomly grown connected node set.
inline Cover rcoms(const Cover& ground_truth, const WeightedGraph& graph, std::uint64_t seed) {
    detail::check_same_nodes(ground_truth.n_nodes(), graph.n_nodes());
    ground_truth.validate();
    auto clusters = detail::clusters_of(ground_truth);
    std::vector<std::size_t> sizes;
    for (const auto& c : clusters) sizes.push_back(c.size());
    std::sort(sizes.rbegin(), sizes.rend());  // grow the big ones first
    std::mt19937_64 rng(seed);
    std::size_t n = graph.n_nodes();
    // A pass can strand uncovered nodes behind already-covered regions; retry
    // with fresh randomness rather than breaking the size multiset.
    for (int attempt = 0; attempt < 20; ++attempt) {
        try {
            Cover out = detail::rcoms_attempt(sizes, graph, rng);
            bool complete = true;
            for (const auto& m : out.memberships)
                if (m.empty()) complete = false;
            if (complete) return out;
        } catch (const std::invalid_argument&) {
            if (attempt == 19) throw;
        }
    }
    throw std::invalid_argument("rcoms could not cover every node with the given sizes");
}

namespace detail {

inline Cover rcoms_attempt(const std::vector<std::size_t>& sizes, const WeightedGraph& graph,
                           std::mt19937_64& rng) {
    std::size_t n = graph.n_nodes();
    std::vector<std::size_t> covered(n, 0);
    Cover out;
    out.memberships.assign(n, {});
    for (std::size_t ci = 0; ci < sizes.size(); ++ci) {
        std::size_t target = sizes[ci];
        if (target > n) throw std::invalid_argument("cluster larger than graph");
        // seeded random growth, preferring uncovered nodes
        std::vector<NodeId> pool(n);
        std::iota(pool.begin(), pool.end(), 0u);
        std::sort(pool.begin(), pool.end(), [&](NodeId a, NodeId b) {
            return std::make_pair(covered[a], a) < std::make_pair(covered[b], b);
        });
        std::size_t least = covered[pool[0]];
        std::vector<NodeId> starts;
        for (NodeId u : pool)
            if (covered[u] == least) starts.push_back(u);
        NodeId start = starts[std::uniform_int_distribution<std::size_t>(0, starts.size() - 1)(rng)];
        std::set<NodeId> members{start};
        std::vector<NodeId> frontier;
        auto extend_frontier = [&](NodeId u) {
            for (const auto& [v, w] : graph.neighbors(u)) {
                (void)w;
                if (!members.count(v)) frontier.push_back(v);
            }
        };
        extend_frontier(start);
        while (members.size() < target) {
            frontier.erase(std::remove_if(frontier.begin(), frontier.end(),
                                          [&](NodeId v) { return members.count(v) > 0; }),
                           frontier.end());
            if (frontier.empty())
                throw std::invalid_argument("infeasible cluster size on disconnected graph");
            // candidates: least-covered frontier nodes
            std::size_t best = covered[frontier[0]];
            for (NodeId v : frontier) best = std::min(best, covered[v]);
            std::vector<NodeId> cands;
            for (NodeId v : frontier)
                if (covered[v] == best) cands.push_back(v);
            std::sort(cands.begin(), cands.end());
            NodeId pick = cands[std::uniform_int_distribution<std::size_t>(0, cands.size() - 1)(rng)];
            members.insert(pick);
            extend_frontier(pick);
        }
        for (NodeId u : members) {
            out.memberships[u].insert(static_cast<ClusterId>(ci));
            ++covered[u];
        }
    }
    return out;
}

}  // namespace detail

}  // namespace scinet
