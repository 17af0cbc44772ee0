#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

namespace scinet {

struct Concept {
    std::string name;
    bool expert_generic = false;

    bool operator==(const Concept&) const = default;
};

struct ConceptUse {
    std::uint32_t concept_id;
    std::uint32_t tf;  // occurrence count within the article, >= 1

    bool operator==(const ConceptUse&) const = default;
};

struct Article {
    std::string external_id;
    std::vector<ConceptUse> concepts;

    bool operator==(const Article&) const = default;
};

struct Corpus {
    std::vector<Article> articles;
    std::vector<Concept> concepts;

    bool operator==(const Corpus&) const = default;

    void validate() const {
        std::unordered_map<std::string, int> names;
        for (const Concept& c : concepts)
            if (++names[c.name] > 1)
                throw std::invalid_argument("duplicate concept name: " + c.name);
        std::unordered_map<std::string, int> ext;
        for (const Article& a : articles) {
            if (++ext[a.external_id] > 1)
                throw std::invalid_argument("duplicate external_id: " + a.external_id);
            if (a.concepts.empty())
                throw std::invalid_argument("article with empty concept list: " + a.external_id);
            std::vector<bool> seen(concepts.size(), false);
            for (const ConceptUse& u : a.concepts) {
                if (u.concept_id >= concepts.size())
                    throw std::invalid_argument("unknown concept id in article " + a.external_id);
                if (u.tf < 1)
                    throw std::invalid_argument("non-positive term frequency in article " +
                                                a.external_id);
                if (seen[u.concept_id])
                    throw std::invalid_argument("duplicate concept in article " + a.external_id);
                seen[u.concept_id] = true;
            }
        }
    }
};

// Per-concept term-frequency statistics, conditional on occurrence.
struct ConceptTFProfile {
    std::uint32_t concept_id = 0;
    std::size_t doc_count = 0;
    std::vector<std::uint32_t> tf_values;
    double mean_tf = 0.0;
    double mean_log_tf = 0.0;
};

class CorpusError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline Corpus parse_corpus_jsonl(std::istream& in, const std::string& origin) {
    using nlohmann::json;
    Corpus corpus;
    std::unordered_map<std::string, std::uint32_t> concept_ids;
    std::unordered_map<std::string, bool> generic_flags;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        json rec;
        try {
            rec = json::parse(line);
        } catch (const json::parse_error& e) {
            throw CorpusError(origin + ":" + std::to_string(lineno) + ": " + e.what());
        }
        auto fail = [&](const std::string& msg) -> CorpusError {
            return CorpusError(origin + ":" + std::to_string(lineno) + ": " + msg);
        };
        if (!rec.contains("id") || !rec["id"].is_string()) throw fail("missing article id");
        if (!rec.contains("concepts") || !rec["concepts"].is_array() || rec["concepts"].empty())
            throw fail("empty concept list");
        Article article;
        article.external_id = rec["id"].get<std::string>();
        for (const json& cu : rec["concepts"]) {
            if (!cu.contains("name") || !cu.contains("tf")) throw fail("malformed concept entry");
            std::string name = cu["name"].get<std::string>();
            long long tf = cu["tf"].get<long long>();
            if (tf <= 0) throw fail("non-positive term frequency for concept " + name);
            bool generic = cu.value("generic", false);
            auto it = concept_ids.find(name);
            std::uint32_t cid;
            if (it == concept_ids.end()) {
                cid = static_cast<std::uint32_t>(corpus.concepts.size());
                concept_ids.emplace(name, cid);
                generic_flags.emplace(name, generic);
                corpus.concepts.push_back({name, generic});
            } else {
                cid = it->second;
                if (generic_flags.at(name) != generic)
                    throw fail("inconsistent generic flag for concept " + name);
            }
            article.concepts.push_back({cid, static_cast<std::uint32_t>(tf)});
        }
        corpus.articles.push_back(std::move(article));
    }
    corpus.validate();
    return corpus;
}

}  // namespace detail

inline Corpus load_corpus(std::istream& in, const std::string& origin = "<stream>") {
    return detail::parse_corpus_jsonl(in, origin);
}

inline Corpus load_corpus(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CorpusError("cannot open corpus file: " + path);
    return detail::parse_corpus_jsonl(in, path);
}

// Optional sidecar {"concept name": true/false}; overrides inline flags.
inline void apply_concept_sidecar(Corpus& corpus, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CorpusError("cannot open sidecar file: " + path);
    nlohmann::json flags = nlohmann::json::parse(in);
    for (Concept& c : corpus.concepts) {
        auto it = flags.find(c.name);
        if (it != flags.end()) c.expert_generic = it->get<bool>();
    }
}

// Relabels concept ids into first-appearance order over the article stream;
// concepts used by no article keep their relative order at the end.  After
// this, save/load round-trips reproduce the corpus exactly (orphans aside).
inline Corpus canonicalize(const Corpus& corpus) {
    std::vector<std::uint32_t> remap(corpus.concepts.size(), UINT32_MAX);
    std::uint32_t next = 0;
    for (const Article& a : corpus.articles)
        for (const ConceptUse& u : a.concepts)
            if (remap[u.concept_id] == UINT32_MAX) remap[u.concept_id] = next++;
    for (std::uint32_t& r : remap)
        if (r == UINT32_MAX) r = next++;
    Corpus out;
    out.concepts.resize(corpus.concepts.size());
    for (std::size_t i = 0; i < corpus.concepts.size(); ++i)
        out.concepts[remap[i]] = corpus.concepts[i];
    out.articles = corpus.articles;
    for (Article& a : out.articles)
        for (ConceptUse& u : a.concepts) u.concept_id = remap[u.concept_id];
    return out;
}

inline void save_corpus(const Corpus& corpus, std::ostream& out) {
    using nlohmann::json;
    for (const Article& a : corpus.articles) {
        json rec;
        rec["id"] = a.external_id;
        json cs = json::array();
        for (const ConceptUse& u : a.concepts) {
            const Concept& c = corpus.concepts[u.concept_id];
            json e;
            e["name"] = c.name;
            e["tf"] = u.tf;
            if (c.expert_generic) e["generic"] = true;
            cs.push_back(std::move(e));
        }
        rec["concepts"] = std::move(cs);
        out << rec.dump() << "\n";
    }
}

inline void save_corpus(const Corpus& corpus, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw CorpusError("cannot open output file: " + path);
    save_corpus(corpus, out);
}

// One profile per concept with doc_count >= 1; orphan ids returned separately.
struct ProfileReport {
    std::vector<ConceptTFProfile> profiles;
    std::vector<std::uint32_t> orphan_concepts;
};

inline ProfileReport concept_profiles(const Corpus& corpus) {
    std::vector<ConceptTFProfile> all(corpus.concepts.size());
    for (std::uint32_t cid = 0; cid < corpus.concepts.size(); ++cid)
        all[cid].concept_id = cid;
    for (const Article& a : corpus.articles)
        for (const ConceptUse& u : a.concepts) all[u.concept_id].tf_values.push_back(u.tf);
    ProfileReport report;
    for (ConceptTFProfile& p : all) {
        if (p.tf_values.empty()) {
            report.orphan_concepts.push_back(p.concept_id);
            continue;
        }
        p.doc_count = p.tf_values.size();
        double sum = 0.0, log_sum = 0.0;
        for (std::uint32_t k : p.tf_values) {
            sum += k;
            log_sum += std::log(static_cast<double>(k));
        }
        p.mean_tf = sum / static_cast<double>(p.doc_count);
        p.mean_log_tf = log_sum / static_cast<double>(p.doc_count);
        report.profiles.push_back(std::move(p));
    }
    return report;
}

}  // namespace scinet
