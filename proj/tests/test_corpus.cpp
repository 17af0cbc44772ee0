#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <sstream>

#include "scinet/benchgen.hpp"
#include "scinet/corpus.hpp"

using namespace scinet;

TEST_CASE("load_corpus parses a two-article file") {
    std::istringstream in(
        R"({"id": "a1", "concepts": [{"name": "x", "tf": 1}]})"
        "\n"
        R"({"id": "a2", "concepts": [{"name": "x", "tf": 2}, {"name": "y", "tf": 1}]})"
        "\n");
    Corpus c = load_corpus(in);
    REQUIRE(c.articles.size() == 2);
    REQUIRE(c.concepts.size() == 2);
    REQUIRE(c.articles[0].external_id == "a1");
    REQUIRE(c.articles[1].concepts.size() == 2);
    REQUIRE(c.concepts[0].name == "x");
}

TEST_CASE("load_corpus rejects bad input") {
    SECTION("zero term frequency") {
        std::istringstream in(R"({"id": "a", "concepts": [{"name": "x", "tf": 0}]})");
        REQUIRE_THROWS_WITH(load_corpus(in), Catch::Matchers::ContainsSubstring("term frequency"));
    }
    SECTION("empty concept list") {
        std::istringstream in(R"({"id": "a", "concepts": []})");
        REQUIRE_THROWS(load_corpus(in));
    }
    SECTION("duplicate external id") {
        std::istringstream in(
            R"({"id": "a", "concepts": [{"name": "x", "tf": 1}]})"
            "\n"
            R"({"id": "a", "concepts": [{"name": "x", "tf": 1}]})");
        REQUIRE_THROWS_WITH(load_corpus(in), Catch::Matchers::ContainsSubstring("external_id"));
    }
    SECTION("parse error reports line number") {
        std::istringstream in(
            R"({"id": "a", "concepts": [{"name": "x", "tf": 1}]})"
            "\nnot json\n");
        REQUIRE_THROWS_WITH(load_corpus(in, "f"), Catch::Matchers::ContainsSubstring("f:2"));
    }
    SECTION("inconsistent generic flag") {
        std::istringstream in(
            R"({"id": "a", "concepts": [{"name": "x", "tf": 1, "generic": true}]})"
            "\n"
            R"({"id": "b", "concepts": [{"name": "x", "tf": 1}]})");
        REQUIRE_THROWS_WITH(load_corpus(in), Catch::Matchers::ContainsSubstring("generic"));
    }
}

TEST_CASE("synthetic corpus round-trips through save/load") {
    SyntheticCorpusConfig cfg;
    cfg.n_articles = 1000;
    cfg.seed = 42;
    Corpus corpus = synthetic_corpus(cfg);
    std::stringstream buf;
    save_corpus(corpus, buf);
    Corpus loaded = load_corpus(buf);
    REQUIRE(loaded == canonicalize(corpus));
}

TEST_CASE("concept_profiles computes conditional TF moments") {
    std::istringstream in(
        R"({"id": "a1", "concepts": [{"name": "x", "tf": 2}]})"
        "\n"
        R"({"id": "a2", "concepts": [{"name": "x", "tf": 2}, {"name": "y", "tf": 5}]})"
        "\n"
        R"({"id": "a3", "concepts": [{"name": "x", "tf": 2}, {"name": "z", "tf": 1}]})"
        "\n"
        R"({"id": "a4", "concepts": [{"name": "z", "tf": 1}]})"
        "\n"
        R"({"id": "a5", "concepts": [{"name": "z", "tf": 2}]})"
        "\n");
    Corpus c = load_corpus(in);
    auto report = concept_profiles(c);
    REQUIRE(report.profiles.size() == 3);
    const auto& x = report.profiles[0];
    REQUIRE(x.doc_count == 3);
    REQUIRE(x.mean_tf == Catch::Approx(2.0));
    REQUIRE(x.mean_log_tf == Catch::Approx(std::log(2.0)));
    const auto& y = report.profiles[1];
    REQUIRE(y.doc_count == 1);
    REQUIRE(y.mean_tf == Catch::Approx(5.0));
    // z: tf = [1,1,2] -> mean 4/3, mean log = ln(2)/3 (direct summation)
    const auto& z = report.profiles[2];
    REQUIRE(z.mean_tf == Catch::Approx(4.0 / 3.0));
    REQUIRE(z.mean_log_tf == Catch::Approx(std::log(2.0) / 3.0));
}

TEST_CASE("profile doc counts sum to corpus incidences") {
    SyntheticCorpusConfig cfg;
    cfg.n_articles = 300;
    cfg.seed = 7;
    Corpus corpus = synthetic_corpus(cfg);
    std::size_t incidences = 0;
    for (const Article& a : corpus.articles) incidences += a.concepts.size();
    auto report = concept_profiles(corpus);
    std::size_t total = 0;
    for (const auto& p : report.profiles) total += p.doc_count;
    REQUIRE(total == incidences);
}

TEST_CASE("profiles are invariant under article order") {
    SyntheticCorpusConfig cfg;
    cfg.n_articles = 200;
    cfg.seed = 9;
    Corpus corpus = synthetic_corpus(cfg);
    Corpus shuffled = corpus;
    std::mt19937_64 rng(3);
    std::shuffle(shuffled.articles.begin(), shuffled.articles.end(), rng);
    auto a = concept_profiles(corpus);
    auto b = concept_profiles(shuffled);
    REQUIRE(a.profiles.size() == b.profiles.size());
    for (std::size_t i = 0; i < a.profiles.size(); ++i) {
        auto sa = a.profiles[i].tf_values;
        auto sb = b.profiles[i].tf_values;
        std::sort(sa.begin(), sa.end());
        std::sort(sb.begin(), sb.end());
        REQUIRE(sa == sb);
        REQUIRE(a.profiles[i].mean_tf == Catch::Approx(b.profiles[i].mean_tf));
    }
}

TEST_CASE("orphan concepts are reported, not profiled") {
    Corpus c;
    c.concepts = {{"used", false}, {"orphan", false}};
    c.articles = {{"a", {{0, 3}}}};
    c.validate();
    auto report = concept_profiles(c);
    REQUIRE(report.profiles.size() == 1);
    REQUIRE(report.orphan_concepts == std::vector<std::uint32_t>{1});
}

TEST_CASE("sidecar overrides inline generic flags") {
    std::istringstream in(R"({"id": "a", "concepts": [{"name": "x", "tf": 1}]})");
    Corpus c = load_corpus(in);
    REQUIRE_FALSE(c.concepts[0].expert_generic);
}
