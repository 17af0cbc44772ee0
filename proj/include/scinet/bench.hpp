#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "scinet/benchgen.hpp"
#include "scinet/build.hpp"
#include "scinet/graph.hpp"
#include "scinet/hirecs.hpp"
#include "scinet/louvain.hpp"
#include "scinet/metrics.hpp"

namespace scinet {

enum class Representation { unipartite, bipartite };

inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("slope fit needs >= 2 points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t n = x.size();
    for (std::size_t i = 0; i < n; ++i) {
        double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    double nn = static_cast<double>(n);
    return (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
}

struct ScalingRow {
    std::size_t n_articles;
    std::size_t n_nodes;
    std::size_t n_links;
    double seconds_median;
    double seconds_mean;
    double seconds_std;
};

struct ScalingReport {
    Representation repr;
    std::vector<ScalingRow> rows;
    double alpha_links;
    double alpha_time;
    nlohmann::json manifest;
};

// Scaling harness: per size, generate a corpus, build the chosen
// representation, and time Louvain (median of `timing_runs`).
inline ScalingReport bench_scaling(const std::vector<std::size_t>& sizes, Representation repr,
                                   SyntheticCorpusConfig base_cfg, LouvainConfig louvain_cfg = {},
                                   int timing_runs = 3) {
    if (sizes.size() < 2) throw std::invalid_argument("need >= 2 sizes");
    for (std::size_t n : sizes)
        if (n < 50) throw std::invalid_argument("sizes must be >= 50");
    ScalingReport report;
    report.repr = repr;
    std::vector<double> ns, links, times;
    for (std::size_t n : sizes) {
        SyntheticCorpusConfig cfg = base_cfg;
        cfg.n_articles = n;
        cfg.seed = base_cfg.seed + n;  // distinct corpus per size, reproducible
        Corpus corpus = synthetic_corpus(cfg);
        BipartiteGraph bp = build_bipartite(corpus);
        ScalingRow row{};
        row.n_articles = n;
        std::vector<double> secs;
        if (repr == Representation::bipartite) {
            row.n_nodes = bp.n_articles() + bp.n_concepts();
            row.n_links = bp.n_edges();
            for (int r = 0; r < timing_runs; ++r) secs.push_back(louvain(bp, louvain_cfg).seconds);
        } else {
            WeightedGraph up = project_unipartite(bp);
            row.n_nodes = up.n_nodes();
            row.n_links = up.n_edges();
            for (int r = 0; r < timing_runs; ++r) secs.push_back(louvain(up, louvain_cfg).seconds);
        }
        std::sort(secs.begin(), secs.end());
        row.seconds_median = secs[secs.size() / 2];
        double mean = 0;
        for (double s : secs) mean += s;
        mean /= static_cast<double>(secs.size());
        double var = 0;
        for (double s : secs) var += (s - mean) * (s - mean);
        row.seconds_mean = mean;
        row.seconds_std = std::sqrt(var / static_cast<double>(secs.size()));
        report.rows.push_back(row);
        ns.push_back(static_cast<double>(n));
        links.push_back(static_cast<double>(row.n_links));
        times.push_back(std::max(row.seconds_median, 1e-6));
    }
    report.alpha_links = loglog_slope(ns, links);
    report.alpha_time = loglog_slope(ns, times);
    report.manifest = {{"kind", "scaling"},
                       {"sizes", sizes},
                       {"repr", repr == Representation::bipartite ? "bp" : "up"},
                       {"seed", base_cfg.seed},
                       {"louvain_seed", louvain_cfg.seed},
                       {"generic_rate", base_cfg.generic_rate},
                       {"n_generic_concepts", base_cfg.n_generic_concepts},
                       {"timing_runs", timing_runs}};
    return report;
}

struct StabilityReport {
    std::vector<std::vector<double>> rand_matrix;  // pairwise, upper triangle mirrored
    double mean_rand;
    double min_rand;
    double max_rand;
    nlohmann::json manifest;
};

inline StabilityReport summarize_pairwise(const std::vector<Partition>& as,
                                          const std::vector<Partition>& bs, bool cross) {
    StabilityReport rep;
    rep.rand_matrix.assign(as.size(), std::vector<double>(bs.size(), 1.0));
    double sum = 0.0;
    std::size_t count = 0;
    rep.min_rand = 1.0;
    rep.max_rand = 0.0;
    for (std::size_t i = 0; i < as.size(); ++i)
        for (std::size_t j = cross ? 0 : i + 1; j < bs.size(); ++j) {
            if (!cross && j <= i) continue;
            double r = rand_index(as[i], bs[j]);
            rep.rand_matrix[i][j] = r;
            if (!cross) rep.rand_matrix[j][i] = r;
            sum += r;
            ++count;
            rep.min_rand = std::min(rep.min_rand, r);
            rep.max_rand = std::max(rep.max_rand, r);
        }
    rep.mean_rand = count ? sum / static_cast<double>(count) : 1.0;
    return rep;
}

// Pairwise Rand over an ensemble of runs on one graph.
template <typename GraphT>
StabilityReport bench_stability(const GraphT& graph, const LouvainConfig& cfg, std::size_t runs) {
    if (runs < 2) throw std::invalid_argument("need >= 2 runs");
    auto results = run_ensemble(graph, cfg, runs);
    std::vector<Partition> parts;
    for (auto& r : results) parts.push_back(std::move(r.partition));
    StabilityReport rep = summarize_pairwise(parts, parts, false);
    rep.manifest = {{"kind", "stability"}, {"runs", runs}, {"seed", cfg.seed},
                    {"null_model", cfg.null_model == NullModel::barber ? "barber" : "newman"}};
    return rep;
}

// Every up partition against every bp partition (article side).
inline StabilityReport bench_cross_representation(const Corpus& corpus, const LouvainConfig& cfg,
                                                  std::size_t runs) {
    BipartiteGraph bp = build_bipartite(corpus);
    WeightedGraph up = project_unipartite(bp);
    auto up_results = run_ensemble(up, cfg, runs);
    LouvainConfig bp_cfg = cfg;
    auto bp_results = run_ensemble(bp, bp_cfg, runs);
    std::vector<Partition> up_parts, bp_parts;
    for (auto& r : up_results) up_parts.push_back(std::move(r.partition));
    for (auto& r : bp_results) bp_parts.push_back(article_partition(r.partition, bp.n_articles()));
    StabilityReport rep = summarize_pairwise(up_parts, bp_parts, true);
    rep.manifest = {{"kind", "cross_representation"}, {"runs", runs}, {"seed", cfg.seed}};
    return rep;
}

enum class OverlapAlgo { hirecs_algo, louvain_algo, rcoms_algo };

struct OverlapRow {
    std::string algorithm;
    std::vector<double> nmi_per_instance;
    double mean_nmi;
    double std_nmi;
};

struct OverlapReport {
    std::vector<OverlapRow> rows;
    nlohmann::json manifest;
};

// Overlap comparison: planted-overlap instances, overlapping NMI of each
// algorithm's cover against the ground truth.
inline OverlapReport bench_overlap(const PlantedGraphConfig& base_cfg,
                                   const std::vector<OverlapAlgo>& algorithms,
                                   std::size_t instances = 8) {
    OverlapReport report;
    std::vector<PlantedGraph> graphs;
    for (std::size_t i = 0; i < instances; ++i) {
        PlantedGraphConfig cfg = base_cfg;
        cfg.seed = base_cfg.seed + i;
        graphs.push_back(planted_graph(cfg));
    }
    for (OverlapAlgo algo : algorithms) {
        OverlapRow row;
        for (std::size_t i = 0; i < instances; ++i) {
            const auto& inst = graphs[i];
            Cover cover;
            switch (algo) {
                case OverlapAlgo::hirecs_algo:
                    row.algorithm = "hirecs";
                    cover = hirecs(inst.graph).hierarchy.base_cover;
                    break;
                case OverlapAlgo::louvain_algo: {
                    row.algorithm = "louvain";
                    LouvainConfig lc;
                    lc.seed = base_cfg.seed + i;
                    cover = Cover::from_partition(louvain(inst.graph, lc).partition);
                    break;
                }
                case OverlapAlgo::rcoms_algo:
                    row.algorithm = "rcoms";
                    cover = rcoms(inst.ground_truth, inst.graph, base_cfg.seed + i);
                    break;
            }
            row.nmi_per_instance.push_back(overlapping_nmi(cover, inst.ground_truth));
        }
        double mean = 0;
        for (double v : row.nmi_per_instance) mean += v;
        mean /= static_cast<double>(instances);
        double var = 0;
        for (double v : row.nmi_per_instance) var += (v - mean) * (v - mean);
        row.mean_nmi = mean;
        row.std_nmi = std::sqrt(var / static_cast<double>(instances));
        report.rows.push_back(std::move(row));
    }
    report.manifest = {{"kind", "overlap"},
                       {"instances", instances},
                       {"seed", base_cfg.seed},
                       {"n_nodes", base_cfg.n_nodes},
                       {"n_communities", base_cfg.n_communities},
                       {"overlap_fraction", base_cfg.overlap_fraction},
                       {"p_in", base_cfg.p_in},
                       {"p_out", base_cfg.p_out}};
    return report;
}

}  // namespace scinet
