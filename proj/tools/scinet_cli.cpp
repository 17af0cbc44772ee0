// Command-line front end: ingest, filter, gen, cluster, score, compare, bench.
// All outputs are CSV or JSON on stdout or --out; exit code 2 on validation
// errors.

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "scinet/bench.hpp"
#include "scinet/benchgen.hpp"
#include "scinet/build.hpp"
#include "scinet/corpus.hpp"
#include "scinet/entropy.hpp"
#include "scinet/graph.hpp"
#include "scinet/hirecs.hpp"
#include "scinet/io.hpp"
#include "scinet/louvain.hpp"
#include "scinet/metrics.hpp"

using namespace scinet;
using nlohmann::json;

namespace {

std::ostream& open_out(const std::string& path, std::ofstream& file) {
    if (path.empty() || path == "-") return std::cout;
    file.open(path);
    if (!file) throw std::runtime_error("cannot open output file: " + path);
    return file;
}

Corpus load_corpus_with_sidecar(const std::string& path, const std::string& sidecar) {
    Corpus c = load_corpus(path);
    if (!sidecar.empty()) apply_concept_sidecar(c, sidecar);
    return c;
}

int run(int argc, char** argv) {
    CLI::App app{"document-concept network clustering toolkit"};
    app.fallthrough();
    app.require_subcommand(1);

    std::string out_path;
    app.add_option("--out", out_path, "output path (default stdout)")->capture_default_str();

    // ingest: validate a corpus and report summary statistics
    auto* ingest = app.add_subcommand("ingest", "validate a corpus file and print a summary");
    std::string ingest_corpus, ingest_sidecar;
    ingest->add_option("corpus", ingest_corpus, "JSONL corpus file")->required();
    ingest->add_option("--concepts", ingest_sidecar, "concepts.json sidecar");
    ingest->callback([&] {
        Corpus c = load_corpus_with_sidecar(ingest_corpus, ingest_sidecar);
        auto report = concept_profiles(c);
        json summary = {{"articles", c.articles.size()},
                        {"concepts", c.concepts.size()},
                        {"profiled_concepts", report.profiles.size()},
                        {"orphan_concepts", report.orphan_concepts.size()}};
        std::ofstream f;
        open_out(out_path, f) << summary.dump(2) << "\n";
    });

    // filter: entropy table + optional filtered corpus
    auto* filter = app.add_subcommand("filter", "entropy-based generic concept report");
    std::string filter_corpus_path, filter_sidecar, filtered_out;
    double filter_percentile = 10.0;
    std::string filter_mode = "auto";
    filter->add_option("corpus", filter_corpus_path, "JSONL corpus file")->required();
    filter->add_option("--concepts", filter_sidecar, "concepts.json sidecar");
    filter->add_option("-p,--percentile", filter_percentile, "distance percentile")
        ->check(CLI::Range(0.001, 99.999));
    filter->add_option("--mode", filter_mode, "auto|expert|union")
        ->check(CLI::IsMember({"auto", "expert", "union"}));
    filter->add_option("--filtered-corpus", filtered_out, "write the filtered corpus here");
    filter->callback([&] {
        Corpus c = load_corpus_with_sidecar(filter_corpus_path, filter_sidecar);
        auto report = concept_profiles(c);
        auto entropies = concept_entropies(report.profiles);
        std::vector<bool> expert(c.concepts.size());
        for (std::size_t i = 0; i < c.concepts.size(); ++i) expert[i] = c.concepts[i].expert_generic;
        auto verdicts = classify_generic(entropies, filter_percentile, &expert);
        std::ofstream f;
        std::ostream& out = open_out(out_path, f);
        out << "concept,doc_count,s_obs,s_max,distance,auto_generic,expert_generic\n";
        for (std::size_t i = 0; i < entropies.size(); ++i) {
            const auto& e = entropies[i];
            const auto& v = verdicts[i];
            out << c.concepts[e.concept_id].name << "," << e.doc_count << "," << e.s_obs << ","
                << e.s_max << "," << e.distance << "," << (v.auto_generic ? 1 : 0) << ","
                << (v.expert_generic ? 1 : 0) << "\n";
        }
        if (!filtered_out.empty()) {
            FilterMode mode = filter_mode == "auto"     ? FilterMode::auto_flag
                              : filter_mode == "expert" ? FilterMode::expert
                                                        : FilterMode::both;
            auto res = filter_corpus(c, verdicts, mode);
            save_corpus(res.corpus, filtered_out);
            std::cerr << "removed " << res.removed_concepts.size() << " concepts, dropped "
                      << res.dropped_articles.size() << " articles\n";
        }
    });

    // gen corpus / gen graph
    auto* gen = app.add_subcommand("gen", "synthetic corpus and planted-graph generators");
    gen->require_subcommand(1);
    auto* gen_corpus_cmd = gen->add_subcommand("corpus", "synthetic document-concept corpus");
    SyntheticCorpusConfig ccfg;
    gen_corpus_cmd->add_option("--articles", ccfg.n_articles, "number of articles");
    gen_corpus_cmd->add_option("--topics", ccfg.n_topics, "number of topics");
    gen_corpus_cmd->add_option("--concepts-per-topic", ccfg.concepts_per_topic, "");
    gen_corpus_cmd->add_option("--concepts-per-article", ccfg.concepts_per_article, "");
    gen_corpus_cmd->add_option("--generic-concepts", ccfg.n_generic_concepts, "");
    gen_corpus_cmd->add_option("--generic-rate", ccfg.generic_rate, "");
    gen_corpus_cmd->add_option("--tf-gamma", ccfg.tf_gamma, "");
    gen_corpus_cmd->add_option("--tf-lambda", ccfg.tf_lambda, "");
    gen_corpus_cmd->add_option("--seed", ccfg.seed, "");
    gen_corpus_cmd->callback([&] {
        Corpus c = synthetic_corpus(ccfg);
        std::ofstream f;
        save_corpus(c, open_out(out_path, f));
    });
    auto* gen_graph_cmd = gen->add_subcommand("graph", "planted-community graph");
    PlantedGraphConfig gcfg;
    std::string gt_out;
    gen_graph_cmd->add_option("--nodes", gcfg.n_nodes, "");
    gen_graph_cmd->add_option("--communities", gcfg.n_communities, "");
    gen_graph_cmd->add_option("--overlap", gcfg.overlap_fraction, "");
    gen_graph_cmd->add_option("--p-in", gcfg.p_in, "");
    gen_graph_cmd->add_option("--p-out", gcfg.p_out, "");
    gen_graph_cmd->add_option("--seed", gcfg.seed, "");
    gen_graph_cmd->add_option("--ground-truth", gt_out, "write the planted cover here");
    gen_graph_cmd->callback([&] {
        PlantedGraph pg = planted_graph(gcfg);
        std::ofstream f;
        save_graph(pg.graph, open_out(out_path, f));
        if (!gt_out.empty()) {
            std::ofstream g(gt_out);
            save_cover(pg.ground_truth, g);
        }
    });

    // cluster
    auto* cluster = app.add_subcommand("cluster", "run louvain or hirecs on a graph");
    std::string cluster_graph, cluster_algo = "louvain", cluster_repr = "up",
                cluster_null = "newman", timing_out;
    LouvainConfig lcfg;
    std::size_t cluster_runs = 1;
    cluster->add_option("graph", cluster_graph, "edge-list file")->required();
    cluster->add_option("--algo", cluster_algo, "louvain|hirecs")
        ->check(CLI::IsMember({"louvain", "hirecs"}));
    cluster->add_option("--repr", cluster_repr, "up|bp")->check(CLI::IsMember({"up", "bp"}));
    cluster->add_option("--null", cluster_null, "newman|barber")
        ->check(CLI::IsMember({"newman", "barber"}));
    cluster->add_option("--seed", lcfg.seed, "");
    cluster->add_option("--runs", cluster_runs, "ensemble size");
    cluster->add_option("--timing-csv", timing_out, "append timing rows here");
    cluster->callback([&] {
        std::ifstream in(cluster_graph);
        if (!in) throw std::runtime_error("cannot open graph file: " + cluster_graph);
        std::ofstream f;
        std::ostream& out = open_out(out_path, f);
        lcfg.null_model = cluster_null == "barber" ? NullModel::barber : NullModel::newman;
        if (cluster_algo == "hirecs") {
            WeightedGraph g = load_graph(in);
            HirecsResult res = hirecs(g);
            json levels = json::array();
            for (const Cover& cov : res.hierarchy.levels) {
                std::ostringstream buf;
                save_cover(cov, buf);
                levels.push_back(json::parse(buf.str()));
            }
            std::ostringstream flat;
            save_cover(res.hierarchy.base_cover, flat);
            json doc = {{"algo", "hirecs"},
                        {"iterations", res.iterations},
                        {"levels", levels},
                        {"cover", json::parse(flat.str())}};
            out << doc.dump(2) << "\n";
            return;
        }
        json partitions = json::array();
        std::size_t n_nodes = 0, n_links = 0;
        std::vector<double> seconds;
        if (cluster_repr == "bp") {
            BipartiteGraph g = load_bipartite(in);
            n_nodes = g.n_articles() + g.n_concepts();
            n_links = g.n_edges();
            for (auto& r : run_ensemble(g, lcfg, cluster_runs)) {
                std::ostringstream buf;
                save_partition(r.partition, buf);
                partitions.push_back(json::parse(buf.str()));
                seconds.push_back(r.seconds);
            }
        } else {
            if (cluster_null == "barber")
                throw std::runtime_error("barber null model needs --repr bp");
            WeightedGraph g = load_graph(in);
            n_nodes = g.n_nodes();
            n_links = g.n_edges();
            for (auto& r : run_ensemble(g, lcfg, cluster_runs)) {
                std::ostringstream buf;
                save_partition(r.partition, buf);
                partitions.push_back(json::parse(buf.str()));
                seconds.push_back(r.seconds);
            }
        }
        json doc = {{"algo", "louvain"}, {"runs", cluster_runs}, {"partitions", partitions}};
        out << doc.dump(2) << "\n";
        if (!timing_out.empty()) {
            std::ofstream t(timing_out, std::ios::app);
            for (std::size_t r = 0; r < seconds.size(); ++r)
                t << n_nodes << "," << n_links << "," << cluster_repr << "," << r << ","
                  << seconds[r] << "\n";
        }
    });

    // score: Q values of a given partition/cover on a graph
    auto* score = app.add_subcommand("score", "modularity scores for a clustering");
    std::string score_graph, score_clusters, score_repr = "up";
    score->add_option("graph", score_graph, "edge-list file")->required();
    score->add_option("clusters", score_clusters, "partition/cover JSON")->required();
    score->add_option("--repr", score_repr, "up|bp")->check(CLI::IsMember({"up", "bp"}));
    score->callback([&] {
        std::ifstream gin(score_graph);
        if (!gin) throw std::runtime_error("cannot open graph file: " + score_graph);
        std::ifstream cin_(score_clusters);
        if (!cin_) throw std::runtime_error("cannot open cluster file: " + score_clusters);
        Cover cover = load_cover(cin_);
        json doc;
        if (score_repr == "bp") {
            BipartiteGraph g = load_bipartite(gin);
            doc["barber_modularity"] = barber_modularity(g, cover.to_partition());
        } else {
            WeightedGraph g = load_graph(gin);
            doc["extended_modularity"] = extended_modularity(g, cover);
            if (cover.is_partition()) doc["modularity"] = modularity(g, cover.to_partition());
        }
        std::ofstream f;
        open_out(out_path, f) << doc.dump(2) << "\n";
    });

    // compare
    auto* compare = app.add_subcommand("compare", "partition/cover similarity metrics");
    std::string cmp_a, cmp_b, cmp_metric = "rand";
    compare->add_option("a", cmp_a, "partition/cover JSON")->required();
    compare->add_option("b", cmp_b, "partition/cover JSON")->required();
    compare->add_option("--metric", cmp_metric, "rand|nmi|onmi")
        ->check(CLI::IsMember({"rand", "nmi", "onmi"}));
    compare->callback([&] {
        std::ifstream ia(cmp_a), ib(cmp_b);
        if (!ia || !ib) throw std::runtime_error("cannot open cluster files");
        Cover a = load_cover(ia), b = load_cover(ib);
        double value;
        if (cmp_metric == "onmi")
            value = overlapping_nmi(a, b);
        else if (cmp_metric == "nmi")
            value = nmi(a.to_partition(), b.to_partition());
        else
            value = rand_index(a.to_partition(), b.to_partition());
        std::ofstream f;
        open_out(out_path, f) << value << "\n";
    });

    // bench scaling|stability|overlap
    auto* bench = app.add_subcommand("bench", "reproducible benchmark harnesses");
    bench->require_subcommand(1);

    auto* bscal = bench->add_subcommand("scaling", "link and run-time scaling vs corpus size");
    std::vector<std::size_t> bscal_sizes{100, 200, 400, 800, 1600, 3200};
    std::string bscal_repr = "bp";
    SyntheticCorpusConfig bscal_cfg;
    std::uint64_t bscal_seed = 1;
    bscal->add_option("--sizes", bscal_sizes, "article counts");
    bscal->add_option("--repr", bscal_repr, "up|bp")->check(CLI::IsMember({"up", "bp"}));
    bscal->add_option("--generic-rate", bscal_cfg.generic_rate, "");
    bscal->add_option("--seed", bscal_seed, "");
    bscal->callback([&] {
        bscal_cfg.seed = bscal_seed;
        LouvainConfig lc;
        lc.seed = bscal_seed;
        auto rep = bench_scaling(bscal_sizes,
                                 bscal_repr == "bp" ? Representation::bipartite
                                                    : Representation::unipartite,
                                 bscal_cfg, lc);
        std::ofstream f;
        std::ostream& out = open_out(out_path, f);
        out << "n_articles,n_nodes,n_links,repr,seconds_median,seconds_mean,seconds_std\n";
        for (const auto& row : rep.rows)
            out << row.n_articles << "," << row.n_nodes << "," << row.n_links << "," << bscal_repr
                << "," << row.seconds_median << "," << row.seconds_mean << "," << row.seconds_std
                << "\n";
        std::cerr << rep.manifest.dump() << "\n";
        std::cerr << "alpha_links=" << rep.alpha_links << " alpha_time=" << rep.alpha_time << "\n";
    });

    auto* bstab = bench->add_subcommand("stability", "pairwise Rand over a Louvain ensemble");
    std::string bstab_graph, bstab_repr = "up", bstab_corpus;
    std::size_t bstab_runs = 100;
    LouvainConfig bstab_cfg;
    bstab->add_option("--graph", bstab_graph, "edge-list file");
    bstab->add_option("--corpus", bstab_corpus, "corpus for cross-representation mode");
    bstab->add_option("--repr", bstab_repr, "up|bp")->check(CLI::IsMember({"up", "bp"}));
    bstab->add_option("--runs", bstab_runs, "");
    bstab->add_option("--seed", bstab_cfg.seed, "");
    bstab->callback([&] {
        StabilityReport rep;
        if (!bstab_corpus.empty()) {
            Corpus c = load_corpus(bstab_corpus);
            rep = bench_cross_representation(c, bstab_cfg, bstab_runs);
        } else if (!bstab_graph.empty()) {
            std::ifstream in(bstab_graph);
            if (!in) throw std::runtime_error("cannot open graph file: " + bstab_graph);
            if (bstab_repr == "bp") {
                bstab_cfg.null_model = NullModel::barber;
                rep = bench_stability(load_bipartite(in), bstab_cfg, bstab_runs);
            } else {
                rep = bench_stability(load_graph(in), bstab_cfg, bstab_runs);
            }
        } else {
            throw std::runtime_error("stability needs --graph or --corpus");
        }
        std::ofstream f;
        std::ostream& out = open_out(out_path, f);
        for (const auto& row : rep.rand_matrix) {
            for (std::size_t j = 0; j < row.size(); ++j)
                out << (j ? "," : "") << row[j];
            out << "\n";
        }
        std::cerr << rep.manifest.dump() << "\n";
        std::cerr << "mean=" << rep.mean_rand << " min=" << rep.min_rand
                  << " max=" << rep.max_rand << "\n";
    });

    auto* bover = bench->add_subcommand("overlap", "overlapping NMI vs planted covers");
    PlantedGraphConfig bover_cfg;
    std::size_t bover_instances = 8;
    bover->add_option("--nodes", bover_cfg.n_nodes, "");
    bover->add_option("--communities", bover_cfg.n_communities, "");
    bover->add_option("--overlap", bover_cfg.overlap_fraction, "");
    bover->add_option("--p-in", bover_cfg.p_in, "");
    bover->add_option("--p-out", bover_cfg.p_out, "");
    bover->add_option("--seed", bover_cfg.seed, "");
    bover->add_option("--instances", bover_instances, "");
    bover->callback([&] {
        auto rep = bench_overlap(bover_cfg,
                                 {OverlapAlgo::hirecs_algo, OverlapAlgo::louvain_algo,
                                  OverlapAlgo::rcoms_algo},
                                 bover_instances);
        std::ofstream f;
        std::ostream& out = open_out(out_path, f);
        out << "algorithm,mean_nmi,std_nmi\n";
        for (const auto& row : rep.rows)
            out << row.algorithm << "," << row.mean_nmi << "," << row.std_nmi << "\n";
        std::cerr << rep.manifest.dump() << "\n";
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
