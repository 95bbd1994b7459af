#include "cadkit/tfidf.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "cadkit/common.hpp"
#include "cadkit/parallel.hpp"

namespace cadkit {

std::string to_string(Norm n) { return n == Norm::l1 ? "l1" : "l2"; }

Norm norm_from_string(const std::string& s) {
    if (s == "l1") return Norm::l1;
    if (s == "l2") return Norm::l2;
    throw Error("norm must be 'l1' or 'l2', got '" + s + "'");
}

double Vocabulary::idf(std::uint32_t i) const {
    return std::log((1.0 + static_cast<double>(n_docs)) /
                    (1.0 + static_cast<double>(doc_freq[i]))) +
           1.0;
}

namespace {

SparseVector vectorize(const Vocabulary& vocab, const std::vector<std::string>& doc) {
    std::map<std::uint32_t, double> counts;
    for (const auto& tok : doc) {
        auto it = vocab.index.find(tok);
        if (it != vocab.index.end()) counts[it->second] += 1.0;
    }

    SparseVector v;
    v.indices.reserve(counts.size());
    v.values.reserve(counts.size());
    for (const auto& [idx, tf] : counts) {
        v.indices.push_back(idx);
        v.values.push_back(tf * vocab.idf(idx));
    }

    double scale = 0.0;
    if (vocab.norm == Norm::l1) {
        for (double x : v.values) scale += std::abs(x);
    } else {
        for (double x : v.values) scale += x * x;
        scale = std::sqrt(scale);
    }
    if (scale > 0.0) {
        for (double& x : v.values) x /= scale;
    }
    return v;
}

}  // namespace

std::pair<Vocabulary, std::vector<SparseVector>> fit_tfidf(
    const std::vector<std::vector<std::string>>& docs,
    const std::optional<Lexicon>& stopwords, Norm norm) {
    // Document frequencies over non-stopword tokens; map keys give the
    // lexicographic term order.
    std::map<std::string, std::uint64_t> df;
    std::vector<std::string> scratch;
    for (const auto& doc : docs) {
        scratch.clear();
        for (const auto& tok : doc) {
            if (stopwords && stopwords->entries.count(tok)) continue;
            scratch.push_back(tok);
        }
        std::sort(scratch.begin(), scratch.end());
        scratch.erase(std::unique(scratch.begin(), scratch.end()), scratch.end());
        for (const auto& tok : scratch) ++df[tok];
    }
    if (df.empty()) throw Error("empty vocabulary");

    Vocabulary vocab;
    vocab.norm = norm;
    vocab.n_docs = docs.size();
    vocab.terms.reserve(df.size());
    vocab.doc_freq.reserve(df.size());
    for (const auto& [term, freq] : df) {
        vocab.index.emplace(term, static_cast<std::uint32_t>(vocab.terms.size()));
        vocab.terms.push_back(term);
        vocab.doc_freq.push_back(freq);
    }

    return {vocab, transform_many(vocab, docs)};
}

SparseVector transform(const Vocabulary& vocab, const std::vector<std::string>& doc) {
    return vectorize(vocab, doc);
}

std::vector<SparseVector> transform_many(const Vocabulary& vocab,
                                         const std::vector<std::vector<std::string>>& docs) {
    std::vector<SparseVector> out(docs.size());
    parallel_for(docs.size(), [&](std::size_t i) { out[i] = vectorize(vocab, docs[i]); });
    return out;
}

std::vector<SparseVector> transform_many_serial(
    const Vocabulary& vocab, const std::vector<std::vector<std::string>>& docs) {
    std::vector<SparseVector> out(docs.size());
    serial_for(docs.size(), [&](std::size_t i) { out[i] = vectorize(vocab, docs[i]); });
    return out;
}

}  // namespace cadkit
