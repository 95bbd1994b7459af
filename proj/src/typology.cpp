#include "cadkit/typology.hpp"

#include <algorithm>

#include "cadkit/common.hpp"
#include "cadkit/parallel.hpp"

namespace cadkit {

std::string to_string(Strategy s) {
    switch (s) {
        case Strategy::affect: return "affect";
        case Strategy::gender: return "gender";
        case Strategy::identity: return "identity";
        case Strategy::negation: return "negation";
        case Strategy::hedge: return "hedge";
    }
    return "affect";
}

Strategy strategy_from_string(const std::string& s) {
    if (s == "affect") return Strategy::affect;
    if (s == "gender") return Strategy::gender;
    if (s == "identity") return Strategy::identity;
    if (s == "negation") return Strategy::negation;
    if (s == "hedge") return Strategy::hedge;
    throw Error("unknown strategy: " + s);
}

Strategy construct_strategy(Construct c) {
    switch (c) {
        case Construct::sentiment: return Strategy::affect;
        case Construct::sexism: return Strategy::gender;
        case Construct::hatespeech: return Strategy::identity;
        case Construct::custom: break;
    }
    throw Error("construct 'custom' has no designated strategy");
}

TokenDiff token_diff(const CounterfactualPair& pair) {
    auto orig = preprocess(pair.original.doc.text);
    auto cf = preprocess(pair.counterfactual.doc.text);
    std::multiset<std::string> orig_bag(orig.begin(), orig.end());
    std::multiset<std::string> cf_bag(cf.begin(), cf.end());

    TokenDiff diff;
    std::set_difference(cf_bag.begin(), cf_bag.end(), orig_bag.begin(), orig_bag.end(),
                        std::inserter(diff.additions, diff.additions.begin()));
    std::set_difference(orig_bag.begin(), orig_bag.end(), cf_bag.begin(), cf_bag.end(),
                        std::inserter(diff.deletions, diff.deletions.begin()));
    return diff;
}

StrategyLabelSet classify_pair(const CounterfactualPair& pair, const StrategyLexica& lexica,
                               Construct construct) {
    const Strategy designated = construct_strategy(construct);
    const TokenDiff diff = token_diff(pair);

    StrategyLabelSet out;
    auto scan = [&](const std::multiset<std::string>& bag) {
        for (const auto& tok : bag) {
            if (lexica.affect_pos.contains(tok) || lexica.affect_neg.contains(tok))
                out.strategies.insert(Strategy::affect);
            if (lexica.gender.contains(tok)) out.strategies.insert(Strategy::gender);
            if (lexica.identity.contains(tok)) out.strategies.insert(Strategy::identity);
            if (lexica.negation.contains(tok)) out.strategies.insert(Strategy::negation);
            if (lexica.hedge.contains(tok)) out.strategies.insert(Strategy::hedge);
        }
    };
    scan(diff.additions);
    scan(diff.deletions);

    out.unmatched = out.strategies.empty();
    out.construct_driven = out.strategies.count(designated) > 0;
    return out;
}

namespace {

template <class ForEach>
std::map<std::string, StrategyLabelSet> classify_impl(const Corpus& corpus,
                                                      const StrategyLexica& lexica,
                                                      Construct construct, ForEach&& for_each) {
    std::vector<const CounterfactualPair*> pairs;
    std::vector<std::string> ids;
    pairs.reserve(corpus.pairs.size());
    for (const auto& [pid, pair] : corpus.pairs) {
        ids.push_back(pid);
        pairs.push_back(&pair);
    }
    std::vector<StrategyLabelSet> labels(pairs.size());
    for_each(pairs.size(), [&](std::size_t i) {
        labels[i] = classify_pair(*pairs[i], lexica, construct);
    });
    std::map<std::string, StrategyLabelSet> out;
    for (std::size_t i = 0; i < ids.size(); ++i) out.emplace(ids[i], labels[i]);
    return out;
}

}  // namespace

std::map<std::string, StrategyLabelSet> classify_corpus(const Corpus& corpus,
                                                        const StrategyLexica& lexica,
                                                        Construct construct) {
    return classify_impl(corpus, lexica, construct,
                         [](std::size_t n, auto&& body) { parallel_for(n, body); });
}

std::map<std::string, StrategyLabelSet> classify_corpus_serial(const Corpus& corpus,
                                                               const StrategyLexica& lexica,
                                                               Construct construct) {
    return classify_impl(corpus, lexica, construct,
                         [](std::size_t n, auto&& body) { serial_for(n, body); });
}

std::map<Strategy, double> strategy_distribution(const Corpus& corpus,
                                                 const StrategyLexica& lexica,
                                                 Construct construct) {
    if (corpus.pairs.empty()) throw Error("corpus has no pairs");
    const auto types = classify_corpus(corpus, lexica, construct);
    std::map<Strategy, double> out;
    for (Strategy s : {Strategy::affect, Strategy::gender, Strategy::identity,
                       Strategy::negation, Strategy::hedge}) {
        out[s] = 0.0;
    }
    for (const auto& [pid, label] : types) {
        for (Strategy s : label.strategies) out[s] += 1.0;
    }
    for (auto& [s, count] : out) count /= static_cast<double>(types.size());
    return out;
}

std::pair<std::vector<std::string>, std::vector<std::string>> partition(
    const Corpus& corpus, const StrategyLexica& lexica, Construct construct) {
    const auto types = classify_corpus(corpus, lexica, construct);
    std::vector<std::string> driven, agnostic;
    for (const auto& [pid, label] : types) {
        (label.construct_driven ? driven : agnostic).push_back(pid);
    }
    return {driven, agnostic};
}

}  // namespace cadkit
