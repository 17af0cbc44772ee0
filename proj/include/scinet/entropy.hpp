#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "scinet/corpus.hpp"

namespace scinet {

// Discrete distribution p(k) = A * k^(-gamma) * exp(-lambda * k) on {1..support_max},
// the maximum-entropy form under fixed <k> and <ln k>. Both multipliers may be
// negative. A degenerate point mass (Jensen equality) is stored via `atom`.
struct MaxEntParams {
    double gamma = 0.0;
    double lambda = 0.0;
    std::uint32_t support_max = 1;
    double norm = 1.0;  // A, in linear scale
    std::uint32_t atom = 0;  // > 0: point mass at this k, multipliers unused

    std::vector<double> pmf() const {
        std::vector<double> p(support_max, 0.0);
        if (atom > 0) {
            p[atom - 1] = 1.0;
            return p;
        }
        // log-space with a running max to avoid overflow
        std::vector<double> logp(support_max);
        double mx = -1e300;
        for (std::uint32_t k = 1; k <= support_max; ++k) {
            double lp = -gamma * std::log(static_cast<double>(k)) - lambda * k;
            logp[k - 1] = lp;
            mx = std::max(mx, lp);
        }
        double z = 0.0;
        for (double lp : logp) z += std::exp(lp - mx);
        for (std::uint32_t i = 0; i < support_max; ++i) p[i] = std::exp(logp[i] - mx) / z;
        return p;
    }
};

struct ConceptEntropy {
    std::uint32_t concept_id = 0;
    std::size_t doc_count = 0;
    double s_obs = 0.0;   // nats
    double s_max = 0.0;   // nats
    double distance = 0.0;  // perpendicular distance to the S_obs = S_max line
};

struct GenericVerdict {
    std::uint32_t concept_id = 0;
    bool auto_generic = false;
    bool eligible = true;  // doc_count >= min_doc_count, included in percentile ranking
    double percentile_used = 0.0;
    bool expert_generic = false;
};

class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& msg, double r_mean, double r_log)
        : std::runtime_error(msg + " (residuals " + std::to_string(r_mean) + ", " +
                             std::to_string(r_log) + ")"),
          residual_mean(r_mean),
          residual_log(r_log) {}
    double residual_mean;
    double residual_log;
};

// Entropy of the empirical distribution over distinct TF values.
inline double observed_entropy(const ConceptTFProfile& profile) {
    if (profile.doc_count < 1) throw std::invalid_argument("empty profile");
    std::map<std::uint32_t, std::size_t> counts;
    for (std::uint32_t k : profile.tf_values) ++counts[k];
    double n = static_cast<double>(profile.doc_count);
    double s = 0.0;
    for (const auto& [k, c] : counts) {
        double q = static_cast<double>(c) / n;
        s -= q * std::log(q);
    }
    return std::max(s, 0.0);
}

namespace detail {

struct MaxEntMoments {
    double mean;      // E[k]
    double mean_log;  // E[ln k]
    double var_k;
    double var_logk;
    double cov;
    double log_z;     // relative to the max log term
    double entropy;
};

inline MaxEntMoments maxent_moments(double gamma, double lambda, std::uint32_t kmax) {
    std::vector<double> logp(kmax);
    double mx = -1e300;
    for (std::uint32_t k = 1; k <= kmax; ++k) {
        double lp = -gamma * std::log(static_cast<double>(k)) - lambda * k;
        logp[k - 1] = lp;
        mx = std::max(mx, lp);
    }
    double z = 0.0;
    for (double lp : logp) z += std::exp(lp - mx);
    MaxEntMoments m{};
    double ek = 0, elk = 0, ek2 = 0, elk2 = 0, eklk = 0, ent = 0;
    for (std::uint32_t k = 1; k <= kmax; ++k) {
        double p = std::exp(logp[k - 1] - mx) / z;
        double lk = std::log(static_cast<double>(k));
        ek += p * k;
        elk += p * lk;
        ek2 += p * k * static_cast<double>(k);
        elk2 += p * lk * lk;
        eklk += p * k * lk;
        if (p > 0) ent -= p * std::log(p);
    }
    m.mean = ek;
    m.mean_log = elk;
    m.var_k = std::max(ek2 - ek * ek, 0.0);
    m.var_logk = std::max(elk2 - elk * elk, 0.0);
    m.cov = eklk - ek * elk;
    m.log_z = std::log(z) + mx;
    m.entropy = ent;
    return m;
}

// Dual objective F = ln Z + gamma*<ln k> + lambda*<k>; convex in (gamma, lambda).
inline double dual_value(double gamma, double lambda, double mean_tf, double mean_log_tf,
                         std::uint32_t kmax) {
    return maxent_moments(gamma, lambda, kmax).log_z + gamma * mean_log_tf + lambda * mean_tf;
}

}  // namespace detail

inline MaxEntParams solve_maxent(double mean_tf, double mean_log_tf, std::uint32_t support_max,
                                 double tol = 1e-8, int max_iter = 200) {
    if (mean_tf < 1.0 || mean_tf > static_cast<double>(support_max))
        throw std::invalid_argument("mean_tf outside support");
    if (mean_log_tf < -1e-12)
        throw std::invalid_argument("negative mean_log_tf");
    double gap = std::log(mean_tf) - mean_log_tf;
    if (gap < -1e-12)
        throw std::invalid_argument("infeasible moments: mean_log_tf > ln(mean_tf)");
    // Jensen equality forces a point mass; TF data makes the mean integral here.
    if (gap <= 1e-12 && std::abs(mean_tf - std::round(mean_tf)) < 1e-9) {
        MaxEntParams p;
        p.support_max = support_max;
        p.atom = static_cast<std::uint32_t>(std::llround(mean_tf));
        return p;
    }

    double gamma = 0.0, lambda = 0.0;
    double r_mean = 0.0, r_log = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        auto m = detail::maxent_moments(gamma, lambda, support_max);
        r_mean = m.mean - mean_tf;
        r_log = m.mean_log - mean_log_tf;
        if (std::abs(r_mean) <= tol * std::max(1.0, mean_tf) && std::abs(r_log) <= tol) {
            MaxEntParams p;
            p.gamma = gamma;
            p.lambda = lambda;
            p.support_max = support_max;
            p.norm = std::exp(-m.log_z);
            return p;
        }
        // Newton step on the dual; Hessian is the (ln k, k) covariance matrix.
        double h11 = m.var_logk, h12 = m.cov, h22 = m.var_k;
        double det = h11 * h22 - h12 * h12;
        double dg, dl;
        double g1 = mean_log_tf - m.mean_log;  // dF/dgamma
        double g2 = mean_tf - m.mean;          // dF/dlambda
        if (det > 1e-300) {
            dg = -(h22 * g1 - h12 * g2) / det;
            dl = -(h11 * g2 - h12 * g1) / det;
        } else {
            dg = -g1;
            dl = -g2;
        }
        // backtracking line search on the dual value
        double f0 = m.log_z + gamma * mean_log_tf + lambda * mean_tf;
        double slope = g1 * dg + g2 * dl;
        double step = 1.0;
        for (int bt = 0; bt < 60; ++bt) {
            double f1 = detail::dual_value(gamma + step * dg, lambda + step * dl, mean_tf,
                                           mean_log_tf, support_max);
            // near the optimum the dual change sinks below rounding noise;
            // accept any non-increasing step there instead of shrinking to zero
            if (f1 <= f0 + 1e-4 * step * slope || f1 <= f0 + 1e-14 * std::abs(f0) ||
                step < 1e-12)
                break;
            step *= 0.5;
        }
        gamma += step * dg;
        lambda += step * dl;
    }
    throw SolverError("maxent solver did not converge", r_mean, r_log);
}

inline double maxent_entropy(const MaxEntParams& params) {
    if (params.atom > 0) return 0.0;
    return detail::maxent_moments(params.gamma, params.lambda, params.support_max).entropy;
}

inline std::uint32_t default_support_max(const std::vector<ConceptTFProfile>& profiles) {
    std::uint32_t mx = 0;
    for (const auto& p : profiles)
        for (std::uint32_t k : p.tf_values) mx = std::max(mx, k);
    return std::max(mx * 4, 1000u);
}

inline ConceptEntropy concept_entropy(const ConceptTFProfile& profile, std::uint32_t support_max,
                                      double tol = 1e-8) {
    ConceptEntropy e;
    e.concept_id = profile.concept_id;
    e.doc_count = profile.doc_count;
    e.s_obs = observed_entropy(profile);
    MaxEntParams params = solve_maxent(profile.mean_tf, profile.mean_log_tf, support_max, tol);
    e.s_max = maxent_entropy(params);
    e.distance = (e.s_max - e.s_obs) / std::sqrt(2.0);
    return e;
}

inline std::vector<ConceptEntropy> concept_entropies(const std::vector<ConceptTFProfile>& profiles,
                                                     double tol = 1e-8) {
    std::uint32_t kmax = default_support_max(profiles);
    std::vector<ConceptEntropy> out;
    out.reserve(profiles.size());
    for (const auto& p : profiles) out.push_back(concept_entropy(p, kmax, tol));
    return out;
}

constexpr std::size_t kMinDocCountForRanking = 5;

// Flags the concepts whose distance to the S = S^max line falls within the
// p-th percentile (nearest-rank) of the eligible distance distribution.
inline std::vector<GenericVerdict> classify_generic(const std::vector<ConceptEntropy>& entropies,
                                                    double percentile,
                                                    const std::vector<bool>* expert_flags = nullptr) {
    if (entropies.empty()) throw std::invalid_argument("empty entropy list");
    if (percentile <= 0.0 || percentile >= 100.0)
        throw std::invalid_argument("percentile must be in (0, 100)");
    std::vector<double> eligible_distances;
    for (const auto& e : entropies)
        if (e.doc_count >= kMinDocCountForRanking) eligible_distances.push_back(e.distance);
    double threshold = -1.0;
    if (!eligible_distances.empty()) {
        std::sort(eligible_distances.begin(), eligible_distances.end());
        std::size_t rank = static_cast<std::size_t>(
            std::ceil(percentile / 100.0 * static_cast<double>(eligible_distances.size())));
        rank = std::max<std::size_t>(rank, 1);
        threshold = eligible_distances[rank - 1];
    }
    std::vector<GenericVerdict> out;
    out.reserve(entropies.size());
    for (const auto& e : entropies) {
        GenericVerdict v;
        v.concept_id = e.concept_id;
        v.percentile_used = percentile;
        v.eligible = e.doc_count >= kMinDocCountForRanking;
        v.auto_generic = v.eligible && e.distance <= threshold;
        if (expert_flags && e.concept_id < expert_flags->size())
            v.expert_generic = (*expert_flags)[e.concept_id];
        out.push_back(v);
    }
    return out;
}

enum class FilterMode { auto_flag, expert, both };

struct FilterResult {
    Corpus corpus;
    std::vector<std::string> dropped_articles;   // left with zero concepts
    std::vector<std::uint32_t> removed_concepts;  // original concept ids
};

// Removes flagged concepts from every article; concept ids are re-densified.
inline FilterResult filter_corpus(const Corpus& corpus, const std::vector<GenericVerdict>& verdicts,
                                  FilterMode mode = FilterMode::auto_flag) {
    std::vector<bool> remove(corpus.concepts.size(), false);
    for (const auto& v : verdicts) {
        if (v.concept_id >= corpus.concepts.size())
            throw std::invalid_argument("verdict for unknown concept");
        bool expert = corpus.concepts[v.concept_id].expert_generic;
        bool flag = false;
        switch (mode) {
            case FilterMode::auto_flag: flag = v.auto_generic; break;
            case FilterMode::expert: flag = expert; break;
            case FilterMode::both: flag = v.auto_generic || expert; break;
        }
        if (flag) remove[v.concept_id] = true;
    }
    FilterResult res;
    std::vector<std::uint32_t> remap(corpus.concepts.size());
    for (std::uint32_t cid = 0; cid < corpus.concepts.size(); ++cid) {
        if (remove[cid]) {
            res.removed_concepts.push_back(cid);
            continue;
        }
        remap[cid] = static_cast<std::uint32_t>(res.corpus.concepts.size());
        res.corpus.concepts.push_back(corpus.concepts[cid]);
    }
    for (const Article& a : corpus.articles) {
        Article kept;
        kept.external_id = a.external_id;
        for (const ConceptUse& u : a.concepts)
            if (!remove[u.concept_id]) kept.concepts.push_back({remap[u.concept_id], u.tf});
        if (kept.concepts.empty())
            res.dropped_articles.push_back(a.external_id);
        else
            res.corpus.articles.push_back(std::move(kept));
    }
    return res;
}

}  // namespace scinet
