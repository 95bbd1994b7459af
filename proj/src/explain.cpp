#include "cadkit/explain.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "cadkit/common.hpp"
#include "cadkit/parallel.hpp"

namespace cadkit {

std::string to_string(Direction d) {
    return d == Direction::positive ? "positive" : "negative";
}

FeatureRanking global_ranking(const LinearModel& model, Direction direction, std::size_t k) {
    if (k == 0) throw Error("global_ranking: k must be >= 1");
    const std::size_t d = model.weights.size();
    if (k > d) {
        warn("global_ranking: k clamped to vocabulary size " + std::to_string(d));
        k = d;
    }

    std::vector<std::uint32_t> order(d);
    for (std::size_t i = 0; i < d; ++i) order[i] = static_cast<std::uint32_t>(i);
    const auto& w = model.weights;
    const auto& terms = model.vocabulary.terms;
    if (direction == Direction::positive) {
        std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
            if (w[a] != w[b]) return w[a] > w[b];
            return terms[a] < terms[b];
        });
    } else {
        std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
            if (w[a] != w[b]) return w[a] < w[b];
            return terms[a] < terms[b];
        });
    }

    FeatureRanking ranking;
    ranking.direction = direction;
    ranking.entries.reserve(k);
    for (std::size_t i = 0; i < k; ++i)
        ranking.entries.emplace_back(terms[order[i]], w[order[i]]);
    return ranking;
}

double core_proportion(const FeatureRanking& ranking, const CoreFeatureSet& core,
                       std::size_t k) {
    if (k == 0 || k > ranking.entries.size())
        throw Error("core_proportion: k exceeds ranking length");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < k; ++i)
        if (core.terms.count(ranking.entries[i].first)) ++hits;
    return static_cast<double>(hits) / static_cast<double>(k);
}

std::vector<std::pair<std::size_t, double>> proportion_curve(const LinearModel& model,
                                                             const CoreFeatureSet& core,
                                                             Direction direction,
                                                             const std::vector<std::size_t>& ks) {
    if (!std::is_sorted(ks.begin(), ks.end()))
        throw Error("proportion_curve: ks must be sorted ascending");
    if (ks.empty()) return {};
    const auto ranking = global_ranking(model, direction, ks.back());
    std::vector<std::pair<std::size_t, double>> out;
    out.reserve(ks.size());
    for (std::size_t k : ks) out.emplace_back(k, core_proportion(ranking, core, k));
    return out;
}

double binary_mi(long n11, long n10, long n01, long n00) {
    if (n11 < 0 || n10 < 0 || n01 < 0 || n00 < 0)
        throw Error("binary_mi: negative cell count");
    const long total = n11 + n10 + n01 + n00;
    if (total == 0) return 0.0;  // empty table carries no information
    const double N = static_cast<double>(total);
    const double pw = static_cast<double>(n11 + n10) / N;  // term present
    const double py = static_cast<double>(n11 + n01) / N;  // label positive

    auto cell = [N](long n, double pa, double pb) {
        if (n == 0) return 0.0;  // 0 * ln 0
        const double p = static_cast<double>(n) / N;
        return p * std::log(p / (pa * pb));
    };
    const double mi = cell(n11, pw, py) + cell(n10, pw, 1.0 - py) +
                      cell(n01, 1.0 - pw, py) + cell(n00, 1.0 - pw, 1.0 - py);
    return std::max(mi, 0.0);
}

namespace {

std::map<std::string, long> doc_frequencies(const Corpus& corpus) {
    std::map<std::string, long> df;
    std::vector<std::string> seen;
    for (const auto& ex : corpus.examples) {
        seen.assign(ex.doc.tokens.begin(), ex.doc.tokens.end());
        std::sort(seen.begin(), seen.end());
        seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
        for (const auto& t : seen) ++df[t];
    }
    return df;
}

template <class ForEach>
std::vector<std::pair<std::string, double>> pivot_impl(const Corpus& in_domain,
                                                       const Corpus& out_of_domain,
                                                       std::size_t min_df, std::size_t top_n,
                                                       ForEach&& for_each) {
    if (in_domain.examples.empty() || out_of_domain.examples.empty())
        throw Error("pivot_words: empty corpus");

    const auto df_id = doc_frequencies(in_domain);

    // Per-term presence counts by OOD label, one corpus pass.
    std::map<std::string, std::pair<long, long>> ood_counts;  // term -> (pos, neg)
    long pos_docs = 0, neg_docs = 0;
    {
        std::vector<std::string> seen;
        for (const auto& ex : out_of_domain.examples) {
            (ex.label == 1 ? pos_docs : neg_docs)++;
            seen.assign(ex.doc.tokens.begin(), ex.doc.tokens.end());
            std::sort(seen.begin(), seen.end());
            seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
            for (const auto& t : seen)
                (ex.label == 1 ? ood_counts[t].first : ood_counts[t].second)++;
        }
    }

    std::vector<std::pair<std::string, std::pair<long, long>>> candidates;
    for (const auto& [term, counts] : ood_counts) {
        const long df_ood = counts.first + counts.second;
        if (df_ood < static_cast<long>(min_df)) continue;
        auto it = df_id.find(term);
        if (it == df_id.end() || it->second < static_cast<long>(min_df)) continue;
        candidates.emplace_back(term, counts);
    }

    std::vector<double> mi(candidates.size());
    for_each(candidates.size(), [&](std::size_t i) {
        const auto [n11, n10] = candidates[i].second;
        mi[i] = binary_mi(n11, n10, pos_docs - n11, neg_docs - n10);
    });

    std::vector<std::size_t> order(candidates.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (mi[a] != mi[b]) return mi[a] > mi[b];
        return candidates[a].first < candidates[b].first;
    });

    if (candidates.size() < top_n)
        warn("pivot_words: only " + std::to_string(candidates.size()) +
             " candidates pass min_df " + std::to_string(min_df));
    const std::size_t n = std::min(top_n, candidates.size());
    std::vector<std::pair<std::string, double>> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        out.emplace_back(candidates[order[i]].first, mi[order[i]]);
    return out;
}

}  // namespace

std::vector<std::pair<std::string, double>> pivot_ranking(const Corpus& in_domain,
                                                          const Corpus& out_of_domain,
                                                          std::size_t min_df,
                                                          std::size_t top_n) {
    return pivot_impl(in_domain, out_of_domain, min_df, top_n,
                      [](std::size_t n, auto&& body) { parallel_for(n, body); });
}

std::vector<std::pair<std::string, double>> pivot_ranking_serial(const Corpus& in_domain,
                                                                 const Corpus& out_of_domain,
                                                                 std::size_t min_df,
                                                                 std::size_t top_n) {
    return pivot_impl(in_domain, out_of_domain, min_df, top_n,
                      [](std::size_t n, auto&& body) { serial_for(n, body); });
}

CoreFeatureSet pivot_words(const Corpus& in_domain, const Corpus& out_of_domain,
                           std::size_t min_df, std::size_t top_n) {
    CoreFeatureSet core;
    core.source = "pivot";
    for (const auto& [term, score] : pivot_ranking(in_domain, out_of_domain, min_df, top_n))
        core.terms.insert(term);
    return core;
}

}  // namespace cadkit
