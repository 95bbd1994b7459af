#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace cadkit {

enum class Origin { original, counterfactual };

enum class Construct { sentiment, sexism, hatespeech, custom };

Construct construct_from_string(const std::string& s);
std::string to_string(Construct c);
std::string to_string(Origin o);

struct Document {
    std::string id;
    std::string text;
    std::vector<std::string> tokens;  // filled by preprocess(text)
};

struct LabeledExample {
    Document doc;
    int label = 0;  // 0 = negative / not-construct, 1 = positive / construct
    Origin origin = Origin::original;
    std::string pair_id;  // empty for originals without a counterfactual
};

struct CounterfactualPair {
    LabeledExample original;
    LabeledExample counterfactual;
};

struct Corpus {
    Construct construct = Construct::custom;
    std::vector<LabeledExample> examples;
    std::map<std::string, CounterfactualPair> pairs;  // key: pair_id

    std::size_t size() const { return examples.size(); }
};

// Lowercase, drop hashtags/mentions/URLs, split on non-alphanumeric
// boundaries, keep tokens of length >= 1. Bytes >= 0x80 are treated as word
// characters so multibyte UTF-8 survives intact.
std::vector<std::string> preprocess(const std::string& text);

std::string join_tokens(const std::vector<std::string>& tokens);

Corpus load_jsonl(const std::string& path, Construct construct = Construct::custom);
void save_jsonl(const Corpus& corpus, const std::string& path);

// Same format and record checks as load_jsonl, but a counterfactual may
// appear without its original (it just forms no pair). Sampled training
// sets drop the originals they replace, so they are not valid paired
// corpora; this is the loader for those flat example lists.
Corpus load_examples_jsonl(const std::string& path,
                           Construct construct = Construct::custom);

// Build a validated corpus from in-memory examples (same checks as load_jsonl).
Corpus from_examples(std::vector<LabeledExample> examples,
                     Construct construct = Construct::custom);

// Per-class proportions preserved within +-1 example; pairs never straddle
// the two parts; deterministic per seed.
std::pair<Corpus, Corpus> stratified_split(const Corpus& corpus,
                                           double train_fraction,
                                           std::uint64_t seed);

}  // namespace cadkit
