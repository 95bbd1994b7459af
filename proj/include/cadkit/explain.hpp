#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cadkit/corpus.hpp"
#include "cadkit/logreg.hpp"

namespace cadkit {

enum class Direction { positive, negative };

std::string to_string(Direction d);

struct FeatureRanking {
    Direction direction = Direction::positive;
    std::vector<std::pair<std::string, double>> entries;  // (term, weight)
};

struct CoreFeatureSet {
    std::string source;  // "lexicon" or "pivot"
    std::set<std::string> terms;
};

// Top-k terms by signed weight (descending for positive, ascending for
// negative); weight ties broken by term order; k clamped to |vocabulary|
// with a warning.
FeatureRanking global_ranking(const LinearModel& model, Direction direction, std::size_t k);

// |top_k(ranking) ∩ core| / k.
double core_proportion(const FeatureRanking& ranking, const CoreFeatureSet& core, std::size_t k);

std::vector<std::pair<std::size_t, double>> proportion_curve(const LinearModel& model,
                                                             const CoreFeatureSet& core,
                                                             Direction direction,
                                                             const std::vector<std::size_t>& ks);

// MI between binary term presence and a binary label, from the 2x2
// contingency counts (n11 = present & label 1, ...). Natural log, 0*ln0 = 0.
double binary_mi(long n11, long n10, long n01, long n00);

// Terms with document frequency >= min_df in both corpora, ranked by mutual
// information with the out-of-domain labels (ties lexicographic), top_n kept.
// The MI scan is parallel over candidates with a serial twin.
std::vector<std::pair<std::string, double>> pivot_ranking(const Corpus& in_domain,
                                                          const Corpus& out_of_domain,
                                                          std::size_t min_df,
                                                          std::size_t top_n = 100);
std::vector<std::pair<std::string, double>> pivot_ranking_serial(const Corpus& in_domain,
                                                                 const Corpus& out_of_domain,
                                                                 std::size_t min_df,
                                                                 std::size_t top_n = 100);
CoreFeatureSet pivot_words(const Corpus& in_domain, const Corpus& out_of_domain,
                           std::size_t min_df, std::size_t top_n = 100);

}  // namespace cadkit
