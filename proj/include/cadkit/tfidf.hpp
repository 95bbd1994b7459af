#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "cadkit/lexicon.hpp"

namespace cadkit {

enum class Norm { l1, l2 };

std::string to_string(Norm n);
Norm norm_from_string(const std::string& s);

struct SparseVector {
    std::vector<std::uint32_t> indices;  // strictly increasing
    std::vector<double> values;          // finite

    std::size_t nnz() const { return indices.size(); }
};

struct Vocabulary {
    std::vector<std::string> terms;            // index -> term, sorted
    std::unordered_map<std::string, std::uint32_t> index;  // term -> index
    std::vector<std::uint64_t> doc_freq;       // per term
    std::uint64_t n_docs = 0;                  // fitting corpus size
    Norm norm = Norm::l2;

    std::size_t size() const { return terms.size(); }
    double idf(std::uint32_t i) const;
};

// Fit on training docs only: count df, build sorted term->index map,
// vectorize. Stopword tokens are excluded before counting; weight is
// tf(t,d) * (ln((1+N)/(1+df(t))) + 1), then the vector is normalized to
// unit l1/l2 norm (zero vectors stay zero).
std::pair<Vocabulary, std::vector<SparseVector>> fit_tfidf(
    const std::vector<std::vector<std::string>>& docs,
    const std::optional<Lexicon>& stopwords, Norm norm);

SparseVector transform(const Vocabulary& vocab, const std::vector<std::string>& doc);

// Batch transform; OpenMP over documents plus a serial reference.
std::vector<SparseVector> transform_many(const Vocabulary& vocab,
                                         const std::vector<std::vector<std::string>>& docs);
std::vector<SparseVector> transform_many_serial(const Vocabulary& vocab,
                                                const std::vector<std::vector<std::string>>& docs);

}  // namespace cadkit
