#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cadkit/corpus.hpp"
#include "cadkit/lexicon.hpp"

namespace cadkit {

enum class Strategy { affect, gender, identity, negation, hedge };

std::string to_string(Strategy s);
Strategy strategy_from_string(const std::string& s);

// The construct's designated strategy: editing it directly flips the label.
Strategy construct_strategy(Construct c);

// Bag-of-token diff between a pair's two texts (multisets; order-insensitive).
struct TokenDiff {
    std::multiset<std::string> additions;  // in counterfactual, not original
    std::multiset<std::string> deletions;  // in original, not counterfactual
};

struct StrategyLabelSet {
    std::set<Strategy> strategies;
    bool construct_driven = false;
    bool unmatched = false;  // no lexicon matched (implies strategies empty)
};

TokenDiff token_diff(const CounterfactualPair& pair);

StrategyLabelSet classify_pair(const CounterfactualPair& pair,
                               const StrategyLexica& lexica,
                               Construct construct);

// pair_id -> label set, for every pair in the corpus. The parallel version
// and the serial reference produce identical maps.
std::map<std::string, StrategyLabelSet> classify_corpus(const Corpus& corpus,
                                                        const StrategyLexica& lexica,
                                                        Construct construct);
std::map<std::string, StrategyLabelSet> classify_corpus_serial(const Corpus& corpus,
                                                               const StrategyLexica& lexica,
                                                               Construct construct);

// Fraction of pairs exhibiting each strategy (can sum > 1: multi-label).
std::map<Strategy, double> strategy_distribution(const Corpus& corpus,
                                                 const StrategyLexica& lexica,
                                                 Construct construct);

// Pairs split into construct-driven vs everything else (incl. unmatched).
std::pair<std::vector<std::string>, std::vector<std::string>> partition(
    const Corpus& corpus, const StrategyLexica& lexica, Construct construct);

}  // namespace cadkit
